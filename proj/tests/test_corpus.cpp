#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sedsi/corpus.hpp"
#include "sedsi/util.hpp"

using namespace sedsi;
using corpus::Document;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& content, const char* name = "corpus_test.tmp") {
        path = (std::filesystem::temp_directory_path() / name).string();
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_corpus parses jsonl in file order") {
    TempFile f("{\"doc_id\":\"d1\",\"text\":\"alpha beta\"}\n"
               "{\"doc_id\":\"d2\",\"text\":\"gamma\",\"title\":\"T\"}\n");
    auto docs = corpus::load_corpus(f.path, corpus::CorpusFormat::Jsonl);
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].doc_id == "d1");
    CHECK(docs[0].text == "alpha beta");
    CHECK(docs[1].doc_id == "d2");
    CHECK(docs[1].title == "T");
}

TEST_CASE("load_corpus rejects duplicate ids naming the offender") {
    TempFile f("{\"doc_id\":\"d1\",\"text\":\"a\"}\n{\"doc_id\":\"d1\",\"text\":\"b\"}\n");
    CHECK_THROWS_WITH_AS(corpus::load_corpus(f.path, corpus::CorpusFormat::Jsonl),
                         doctest::Contains("duplicate doc_id 'd1'"), Error);
}

TEST_CASE("load_corpus reports missing fields with line numbers") {
    TempFile f("{\"doc_id\":\"d1\",\"text\":\"a\"}\n{\"doc_id\":\"d2\"}\n");
    try {
        corpus::load_corpus(f.path, corpus::CorpusFormat::Jsonl);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("text") != std::string::npos);
    }
}

TEST_CASE("load_corpus tsv and malformed rows") {
    TempFile ok("d1\tTitle\tbody text\n", "corpus_ok.tsv");
    auto docs = corpus::load_corpus(ok.path, corpus::CorpusFormat::Tsv);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].title == "Title");

    TempFile bad("d1\tonly-two-fields\n", "corpus_bad.tsv");
    CHECK_THROWS_AS(corpus::load_corpus(bad.path, corpus::CorpusFormat::Tsv), Error);
}

TEST_CASE("corpus writer round trip") {
    std::vector<Document> docs = {{"d1", "", "alpha. beta!"},
                                  {"d2", "A Title", "text with \"quotes\" and\ttabs"},
                                  {"d3", "", "unicode snippet"}};
    auto path = (std::filesystem::temp_directory_path() / "corpus_rt.jsonl").string();
    corpus::write_corpus(docs, path, "config deadbeef");
    auto loaded = corpus::load_corpus(path, corpus::CorpusFormat::Jsonl);
    std::remove(path.c_str());
    REQUIRE(loaded.size() == docs.size());
    for (size_t i = 0; i < docs.size(); ++i) {
        CHECK(loaded[i].doc_id == docs[i].doc_id);
        CHECK(loaded[i].title == docs[i].title);
        CHECK(loaded[i].text == docs[i].text);
    }
}

TEST_CASE("split_sentences follows terminator-plus-whitespace rule") {
    CHECK(corpus::split_sentences("A good day. Is it? Yes!") ==
          std::vector<std::string>{"A good day.", "Is it?", "Yes!"});
    CHECK(corpus::split_sentences("no terminator here") ==
          std::vector<std::string>{"no terminator here"});
    CHECK(corpus::split_sentences("v1.2 is out. Done.") ==
          std::vector<std::string>{"v1.2 is out.", "Done."});
}

TEST_CASE("window_passages matches the worked examples") {
    auto p9 = corpus::window_passages(9, 5, 2);
    REQUIRE(p9.passages.size() == 3);
    CHECK(p9.passages[0].begin == 0);
    CHECK(p9.passages[0].end == 5);
    CHECK(p9.passages[1].begin == 2);
    CHECK(p9.passages[1].end == 7);
    CHECK(p9.passages[2].begin == 4);
    CHECK(p9.passages[2].end == 9);

    auto p4 = corpus::window_passages(4, 5, 2);
    REQUIRE(p4.passages.size() == 1);
    CHECK(p4.passages[0].begin == 0);
    CHECK(p4.passages[0].end == 4);

    auto p10 = corpus::window_passages(10, 5, 2);
    REQUIRE(p10.passages.size() == 4);
    CHECK(p10.passages[3].begin == 6);
    CHECK(p10.passages[3].end == 10);
}

TEST_CASE("window_passages start-index arithmetic, exhaustive") {
    for (size_t window = 1; window <= 10; ++window) {
        for (size_t stride = 1; stride <= 10; ++stride) {
            for (size_t n = 1; n <= 200; ++n) {
                auto list = corpus::window_passages(n, window, stride);
                REQUIRE(!list.passages.empty());
                for (size_t i = 0; i < list.passages.size(); ++i) {
                    const auto& p = list.passages[i];
                    REQUIRE(p.begin == i * stride);
                    REQUIRE(p.end == std::min(p.begin + window, n));
                    REQUIRE(p.begin < p.end);
                    // only the last window may touch the end
                    if (i + 1 < list.passages.size()) REQUIRE(p.end < n);
                }
                REQUIRE(list.passages.back().end == std::min(
                    list.passages.back().begin + window, n));
                // generation stops exactly at the first window reaching n
                const auto& last = list.passages.back();
                bool reached = last.end == n;
                bool exhausted = last.begin + stride >= n;
                REQUIRE((reached || exhausted));
                if (window >= stride) {
                    // full coverage when windows overlap or tile
                    std::vector<bool> covered(n, false);
                    for (const auto& q : list.passages)
                        for (size_t s = q.begin; s < q.end; ++s) covered[s] = true;
                    for (size_t s = 0; s < n; ++s) REQUIRE(covered[s]);
                }
            }
        }
    }
}

TEST_CASE("tokenize lowers, drops punctuation, splits at boundaries") {
    CHECK(corpus::tokenize("How much is a cost to run Disneyland?") ==
          std::vector<std::string>{"how", "much", "is", "a", "cost", "to", "run", "disneyland"});
    CHECK(corpus::tokenize("") == std::vector<std::string>{});
    CHECK(corpus::tokenize("15-20%") == std::vector<std::string>{"15", "20"});
    CHECK(corpus::tokenize("?!...") == std::vector<std::string>{});
}

TEST_CASE("tokenize is idempotent on its own joined output") {
    Rng rng(7);
    const std::string alphabet = "abcZ019.,!? -_%$";
    for (int round = 0; round < 200; ++round) {
        std::string text;
        size_t len = rng.next_below(40);
        for (size_t i = 0; i < len; ++i) text.push_back(alphabet[rng.next_below(alphabet.size())]);
        auto once = corpus::tokenize(text);
        std::string joined;
        for (const auto& t : once) {
            if (!joined.empty()) joined.push_back(' ');
            joined += t;
        }
        CHECK(corpus::tokenize(joined) == once);
    }
}

TEST_CASE("vocabulary respects min_freq and maps misses to UNK") {
    std::vector<std::vector<std::string>> streams = {{"a", "a", "b"}, {"a"}};
    auto vocab = corpus::Vocabulary::build(streams, 2);
    CHECK(vocab.size() == corpus::Vocabulary::kNumSpecials + 1);
    CHECK(vocab.id("a") == corpus::Vocabulary::kNumSpecials);
    CHECK(vocab.id("b") == corpus::Vocabulary::kUnk);
}

TEST_CASE("vocabulary counts specials plus kept tokens") {
    auto vocab = corpus::Vocabulary::build({{"a", "b"}}, 1);
    CHECK(vocab.size() == 8);
}

TEST_CASE("vocabulary id assignment is deterministic and frequency-ordered") {
    std::vector<std::vector<std::string>> streams = {{"zz", "zz", "aa", "mm", "mm", "aa", "qq"}};
    auto v1 = corpus::Vocabulary::build(streams, 1);
    auto v2 = corpus::Vocabulary::build(streams, 1);
    for (int i = 0; i < v1.size(); ++i) CHECK(v1.token(i) == v2.token(i));
    // freq 2 group ordered lexicographically, then freq 1
    CHECK(v1.token(6) == "aa");
    CHECK(v1.token(7) == "mm");
    CHECK(v1.token(8) == "zz");
    CHECK(v1.token(9) == "qq");
}

TEST_CASE("vocabulary build rejects an empty stream") {
    CHECK_THROWS_AS(corpus::Vocabulary::build({}, 1), Error);
    CHECK_THROWS_AS(corpus::Vocabulary::build({{}}, 1), Error);
}

TEST_CASE("vocabulary save/load keeps ids and specials stable") {
    auto vocab = corpus::Vocabulary::build({{"beta", "alpha", "beta"}}, 1);
    auto path = (std::filesystem::temp_directory_path() / "vocab_rt.tsv").string();
    vocab.save(path, "config cafef00d");
    auto loaded = corpus::Vocabulary::load(path);
    std::remove(path.c_str());
    REQUIRE(loaded.size() == vocab.size());
    for (int i = 0; i < vocab.size(); ++i) CHECK(loaded.token(i) == vocab.token(i));
    CHECK(loaded.min_freq() == vocab.min_freq());
    CHECK(loaded.id("<eos>") == corpus::Vocabulary::kEos);
}
