#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sedsi/docid.hpp"
#include "sedsi/util.hpp"

using namespace sedsi;
using corpus::Document;
using corpus::Vocabulary;

namespace {

std::string write_temp(const std::string& content, const char* name) {
    auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

Vocabulary vocab_of(const std::vector<std::string>& words) {
    return Vocabulary::build({words}, 1);
}

}  // namespace

TEST_CASE("assign_eds_external canonicalizes and covers the corpus") {
    std::vector<Document> docs = {{"D3240834", "", "body"}};
    auto path = write_temp("D3240834\tAverage cost of Disneyland\n", "eds_ok.tsv");
    auto table = docid::assign_eds_external(path, docs);
    std::remove(path.c_str());
    CHECK(table.ed_of("D3240834") == "average cost of disneyland");
}

TEST_CASE("assign_eds_external collision and coverage handling") {
    std::vector<Document> docs = {{"d1", "", "x"}, {"d2", "", "y"}};
    auto shared = write_temp("d1\tSame ED text\nd2\tsame ed text!\n", "eds_shared.tsv");
    auto table = docid::assign_eds_external(shared, docs);
    std::remove(shared.c_str());
    CHECK(table.docs_of("same ed text") == std::vector<std::string>{"d1", "d2"});
    CHECK(table.collision_stats().distinct_count == 1);

    auto missing = write_temp("d1\tonly one\n", "eds_missing.tsv");
    CHECK_THROWS_WITH_AS(docid::assign_eds_external(missing, docs),
                         doctest::Contains("d2"), Error);
    std::remove(missing.c_str());

    auto dup = write_temp("d1\ta\nd1\tb\nd2\tc\n", "eds_dup.tsv");
    CHECK_THROWS_WITH_AS(docid::assign_eds_external(dup, docs),
                         doctest::Contains("duplicate"), Error);
    std::remove(dup.c_str());
}

TEST_CASE("assign_eds_extractive picks the top sentence") {
    // single sentence: the only candidate
    std::vector<Document> one = {{"d1", "", "just one sentence here"}};
    auto t1 = docid::assign_eds_extractive(one);
    CHECK(t1.ed_of("d1") == "just one sentence here");

    // identical docs collide deterministically
    std::vector<Document> twin = {{"a", "", "same words here. same words there."},
                                  {"b", "", "same words here. same words there."}};
    auto t2 = docid::assign_eds_extractive(twin);
    CHECK(t2.ed_of("a") == t2.ed_of("b"));
    CHECK(t2.collision_stats().collision_rate == doctest::Approx(0.5));

    // a 25-token top sentence is cut to the 20-token prefix
    std::string long_sent;
    for (int i = 0; i < 25; ++i) long_sent += "w" + std::to_string(i) + " ";
    long_sent += ".";
    std::vector<Document> longdoc = {{"d1", "", long_sent}};
    auto t3 = docid::assign_eds_extractive(longdoc);
    auto tokens = corpus::tokenize(t3.ed_of("d1"));
    CHECK(tokens.size() == docid::kMaxEdLen);
    CHECK(tokens.front() == "w0");
    CHECK(tokens.back() == "w19");

    std::vector<Document> empty_tokens = {{"d1", "", "?!"}};
    CHECK_THROWS_AS(docid::assign_eds_extractive(empty_tokens), Error);
}

TEST_CASE("collision_stats formulas") {
    docid::EdTable t;
    t.add("d1", "x");
    t.add("d2", "x");
    t.add("d3", "y");
    auto s = t.collision_stats();
    CHECK(s.doc_count == 3);
    CHECK(s.distinct_count == 2);
    CHECK(s.collision_rate == doctest::Approx(1.0 / 3.0));

    docid::EdTable unique;
    unique.add("d1", "a");
    unique.add("d2", "b");
    CHECK(unique.collision_stats().collision_rate == 0.0);

    docid::EdTable all_shared;
    for (int i = 0; i < 5; ++i) all_shared.add("d" + std::to_string(i), "same");
    CHECK(all_shared.collision_stats().collision_rate == doctest::Approx(1.0 - 1.0 / 5.0));
}

TEST_CASE("trie construction mirrors the ED set") {
    auto vocab = vocab_of({"a", "b", "c"});
    docid::EdTable table;
    table.add("d1", "a b");
    table.add("d2", "a c");
    auto trie = docid::build_trie(table, vocab);

    CHECK(trie.allowed_next({}) == std::vector<int>{vocab.id("a")});
    auto after_a = trie.allowed_next({vocab.id("a")});
    CHECK(after_a == std::vector<int>{vocab.id("b"), vocab.id("c")});
    CHECK(trie.allowed_next({vocab.id("a"), vocab.id("b")}) ==
          std::vector<int>{Vocabulary::kEos});
    CHECK(trie.terminal_count() == 2);

    // 1 ED of length 3 -> 4 edges (3 tokens + EOS), i.e. 5 nodes
    docid::EdTable single;
    single.add("d1", "a b c");
    auto t2 = docid::build_trie(single, vocab);
    CHECK(t2.node_count() == 5);
    CHECK(t2.terminal_count() == 1);

    // duplicate insertion leaves the trie unchanged
    docid::DocidTrie t3;
    t3.insert({6, 7});
    size_t nodes = t3.node_count();
    t3.insert({6, 7});
    CHECK(t3.node_count() == nodes);
    CHECK(t3.terminal_count() == 1);
}

TEST_CASE("trie rejects out-of-vocabulary EDs and bad prefixes") {
    auto vocab = vocab_of({"a"});
    docid::EdTable table;
    table.add("d1", "a zebra");
    CHECK_THROWS_WITH_AS(docid::build_trie(table, vocab), doctest::Contains("zebra"), Error);

    docid::DocidTrie trie;
    trie.insert({6});
    CHECK_THROWS_AS(trie.allowed_next({99}), Error);
}

TEST_CASE("terminals and table entries are in bijection") {
    auto vocab = vocab_of({"a", "b", "c", "d", "e"});
    docid::EdTable table;
    table.add("d1", "a b c");
    table.add("d2", "a b");
    table.add("d3", "c d e");
    table.add("d4", "a b c");  // collision with d1
    auto trie = docid::build_trie(table, vocab);

    CHECK(trie.terminal_count() == table.forward().size());
    auto paths = trie.terminal_paths();
    REQUIRE(paths.size() == table.forward().size());
    for (const auto& path : paths) {
        REQUIRE(path.back() == Vocabulary::kEos);
        std::string text;
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            if (i) text.push_back(' ');
            text += vocab.token(path[i]);
        }
        CHECK(table.has_ed(text));
        CHECK(trie.is_terminal(path));
    }
    // walking each table ED reaches a terminal
    for (const auto& [ed, doc_list] : table.forward()) {
        auto ids = vocab.ids(corpus::tokenize(ed));
        ids.push_back(Vocabulary::kEos);
        CHECK(trie.is_terminal(ids));
    }
}

TEST_CASE("allowed_next is non-empty on every valid non-terminal prefix") {
    auto vocab = vocab_of({"a", "b", "c", "d"});
    docid::EdTable table;
    table.add("d1", "a b c");
    table.add("d2", "a d");
    table.add("d3", "b");
    auto trie = docid::build_trie(table, vocab);

    // walk every prefix of every path
    for (const auto& path : trie.terminal_paths()) {
        std::vector<int> prefix;
        for (int token : path) {
            auto next = trie.allowed_next(prefix);
            CHECK(!next.empty());
            CHECK(std::find(next.begin(), next.end(), token) != next.end());
            prefix.push_back(token);
        }
    }
}

TEST_CASE("trie building is insertion-order independent") {
    auto vocab = vocab_of({"a", "b", "c"});
    std::vector<std::vector<int>> eds = {
        {vocab.id("a"), vocab.id("b")}, {vocab.id("c")}, {vocab.id("a"), vocab.id("c")}};

    docid::DocidTrie forward_order, reverse_order;
    for (const auto& ed : eds) forward_order.insert(ed);
    for (auto it = eds.rbegin(); it != eds.rend(); ++it) reverse_order.insert(*it);
    CHECK(forward_order.terminal_paths() == reverse_order.terminal_paths());
    CHECK(docid::dump_trie(forward_order, vocab) == docid::dump_trie(reverse_order, vocab));
}

TEST_CASE("trie dump lists one line per terminal") {
    auto vocab = vocab_of({"a", "b"});
    docid::EdTable table;
    table.add("d1", "a b");
    table.add("d2", "b");
    auto trie = docid::build_trie(table, vocab);
    auto dump = docid::dump_trie(trie, vocab);
    CHECK(std::count(dump.begin(), dump.end(), '\n') == 2);
    CHECK(dump.find("a b") != std::string::npos);
}
