#include "sedsi/docid.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sedsi/summarize.hpp"
#include "sedsi/util.hpp"

namespace sedsi::docid {

void EdTable::add(const std::string& doc_id, const std::string& canonical_ed) {
    if (canonical_ed.empty()) throw Error("empty ED for doc '" + doc_id + "'");
    if (!reverse_.emplace(doc_id, canonical_ed).second)
        throw Error("duplicate ED assignment for doc '" + doc_id + "'");
    doc_order_.push_back(doc_id);
    forward_[canonical_ed].push_back(doc_id);
}

const std::string& EdTable::ed_of(const std::string& doc_id) const {
    auto it = reverse_.find(doc_id);
    if (it == reverse_.end()) throw Error("no ED for doc '" + doc_id + "'");
    return it->second;
}

bool EdTable::has_doc(const std::string& doc_id) const { return reverse_.count(doc_id) > 0; }

const std::vector<std::string>& EdTable::docs_of(const std::string& ed_text) const {
    auto it = forward_.find(ed_text);
    if (it == forward_.end()) throw Error("unknown ED '" + ed_text + "'");
    return it->second;
}

bool EdTable::has_ed(const std::string& ed_text) const { return forward_.count(ed_text) > 0; }

EdTable::CollisionStats EdTable::collision_stats() const {
    CollisionStats stats;
    stats.doc_count = doc_order_.size();
    stats.distinct_count = forward_.size();
    if (stats.doc_count > 0)
        stats.collision_rate =
            1.0 - static_cast<double>(stats.distinct_count) / static_cast<double>(stats.doc_count);
    return stats;
}

void EdTable::save(const std::string& path, const std::string& header) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write ED file: " + path);
    if (!header.empty()) out << "# " << header << "\n";
    for (const auto& doc_id : doc_order_) out << doc_id << "\t" << reverse_.at(doc_id) << "\n";
}

std::string canonicalize_ed(const std::string& raw_text) {
    auto tokens = corpus::tokenize(raw_text);
    if (tokens.size() > kMaxEdLen) tokens.resize(kMaxEdLen);
    std::string joined;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) joined.push_back(' ');
        joined += tokens[i];
    }
    return joined;
}

EdTable assign_eds_external(const std::string& path, const std::vector<corpus::Document>& docs) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open ED file: " + path);

    std::unordered_map<std::string, std::string> raw;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error("ED file line " + std::to_string(line_no) + ": expected doc_id<TAB>text");
        std::string doc_id = line.substr(0, tab);
        std::string text = line.substr(tab + 1);
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (!raw.emplace(doc_id, text).second)
            throw Error("ED file line " + std::to_string(line_no) + ": duplicate doc_id '" +
                        doc_id + "'");
    }

    EdTable table;
    for (const auto& doc : docs) {
        auto it = raw.find(doc.doc_id);
        if (it == raw.end())
            throw Error("ED file does not cover doc '" + doc.doc_id + "'");
        std::string canonical = canonicalize_ed(it->second);
        if (canonical.empty())
            throw Error("ED for doc '" + doc.doc_id + "' tokenizes to nothing");
        table.add(doc.doc_id, canonical);
    }
    return table;
}

EdTable assign_eds_extractive(const std::vector<corpus::Document>& docs) {
    EdTable table;
    for (const auto& doc : docs) {
        auto sentences = corpus::split_sentences(doc.text);
        std::vector<std::vector<std::string>> sentence_tokens;
        sentence_tokens.reserve(sentences.size());
        size_t total_tokens = 0;
        for (const auto& s : sentences) {
            sentence_tokens.push_back(corpus::tokenize(s));
            total_tokens += sentence_tokens.back().size();
        }
        if (sentences.empty() || total_tokens == 0)
            throw Error("doc '" + doc.doc_id + "' has an empty token stream");

        auto scores = summarize::pagerank(summarize::build_graph(sentence_tokens));
        size_t best = summarize::top_k_by_score(scores, 1).front();
        // the top sentence may still tokenize empty; fall back to the best non-empty one
        if (sentence_tokens[best].empty()) {
            auto order = summarize::top_k_by_score(scores, sentences.size());
            std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
                if (scores[a] != scores[b]) return scores[a] > scores[b];
                return a < b;
            });
            for (size_t idx : order) {
                if (!sentence_tokens[idx].empty()) {
                    best = idx;
                    break;
                }
            }
        }
        table.add(doc.doc_id, canonicalize_ed(sentences[best]));
    }
    return table;
}

void DocidTrie::insert(const std::vector<int>& ed_tokens) {
    if (ed_tokens.empty()) throw Error("cannot insert an empty ED into the trie");
    int node = 0;
    auto step = [&](int token) {
        auto [it, added] = nodes_[node].children.try_emplace(token, 0);
        if (added) {
            it->second = static_cast<int>(nodes_.size());
            nodes_.push_back(Node{});
        }
        node = it->second;
    };
    for (int token : ed_tokens) step(token);
    step(corpus::Vocabulary::kEos);
    if (!nodes_[node].terminal) {
        nodes_[node].terminal = true;
        ++terminal_count_;
    }
}

int DocidTrie::walk(const std::vector<int>& prefix) const {
    int node = 0;
    for (int token : prefix) {
        auto it = nodes_[node].children.find(token);
        if (it == nodes_[node].children.end()) return -1;
        node = it->second;
    }
    return node;
}

std::vector<int> DocidTrie::allowed_next(const std::vector<int>& prefix) const {
    int node = walk(prefix);
    if (node < 0) throw Error("prefix is not a path of the docid trie");
    std::vector<int> out;
    out.reserve(nodes_[node].children.size());
    for (const auto& [token, child] : nodes_[node].children) out.push_back(token);
    return out;
}

bool DocidTrie::is_terminal(const std::vector<int>& tokens) const {
    int node = walk(tokens);
    return node >= 0 && nodes_[node].terminal;
}

std::vector<std::vector<int>> DocidTrie::terminal_paths() const {
    std::vector<std::vector<int>> paths;
    std::vector<int> current;
    // children maps are ordered, so DFS emits paths in lexicographic order
    auto dfs = [&](auto&& self, int node) -> void {
        if (nodes_[node].terminal) paths.push_back(current);
        for (const auto& [token, child] : nodes_[node].children) {
            current.push_back(token);
            self(self, child);
            current.pop_back();
        }
    };
    dfs(dfs, 0);
    return paths;
}

DocidTrie build_trie(const EdTable& table, const corpus::Vocabulary& vocab) {
    DocidTrie trie;
    for (const auto& [ed_text, doc_ids] : table.forward()) {
        auto tokens = corpus::tokenize(ed_text);
        auto ids = vocab.ids(tokens);
        for (size_t i = 0; i < ids.size(); ++i) {
            if (ids[i] == corpus::Vocabulary::kUnk)
                throw Error("ED '" + ed_text + "' contains out-of-vocabulary token '" +
                            tokens[i] + "'");
        }
        trie.insert(ids);
    }
    return trie;
}

std::string dump_trie(const DocidTrie& trie, const corpus::Vocabulary& vocab) {
    std::ostringstream out;
    for (const auto& path : trie.terminal_paths()) {
        std::string ed;
        for (size_t i = 0; i + 1 < path.size(); ++i) {  // path ends with EOS
            if (i) ed.push_back(' ');
            ed += vocab.token(path[i]);
        }
        for (size_t i = 0; i < path.size(); ++i) {
            if (i) out << ' ';
            out << path[i];
        }
        out << "\t" << ed << "\n";
    }
    return out.str();
}

}  // namespace sedsi::docid
