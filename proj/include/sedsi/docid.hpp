#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "sedsi/corpus.hpp"

namespace sedsi::docid {

constexpr size_t kMaxEdLen = 20;  // tokens, before the EOS terminator

/// Docid table: every document maps to exactly one elaborative description
/// (ED), and an ED may be shared by several documents. ED text is stored in
/// canonical form: tokenized, truncated to kMaxEdLen, re-joined with spaces.
class EdTable {
public:
    struct CollisionStats {
        size_t doc_count = 0;
        size_t distinct_count = 0;
        double collision_rate = 0.0;  // 1 - distinct/docs
    };

    /// Register doc_id -> ed canonical text. Insertion order is preserved.
    void add(const std::string& doc_id, const std::string& canonical_ed);

    const std::string& ed_of(const std::string& doc_id) const;
    bool has_doc(const std::string& doc_id) const;
    /// Documents sharing this ED, in insertion order. Throws for unknown EDs.
    const std::vector<std::string>& docs_of(const std::string& ed_text) const;
    bool has_ed(const std::string& ed_text) const;

    size_t doc_count() const { return doc_order_.size(); }
    /// doc ids in insertion order.
    const std::vector<std::string>& doc_ids() const { return doc_order_; }
    /// ED text -> doc ids, keyed in sorted text order (deterministic).
    const std::map<std::string, std::vector<std::string>>& forward() const { return forward_; }

    CollisionStats collision_stats() const;

    void save(const std::string& path, const std::string& header = "") const;

private:
    std::vector<std::string> doc_order_;
    std::unordered_map<std::string, std::string> reverse_;  // doc_id -> ed text
    std::map<std::string, std::vector<std::string>> forward_;
};

/// Canonical ED form of a raw text: tokenize, truncate to kMaxEdLen, join.
std::string canonicalize_ed(const std::string& raw_text);

/// Load precomputed EDs from a TSV of doc_id <TAB> ed_text. Every corpus
/// document must be covered; rows for unknown documents are ignored.
EdTable assign_eds_external(const std::string& path, const std::vector<corpus::Document>& docs);

/// Deterministic fallback: the document's highest-PageRank sentence,
/// truncated to kMaxEdLen tokens, becomes its ED.
EdTable assign_eds_extractive(const std::vector<corpus::Document>& docs);

/// Prefix tree over the distinct ED token sequences, each terminated by EOS.
/// Immutable once built; decoding walks it read-only.
class DocidTrie {
public:
    /// Children of the node reached by `prefix`, in ascending token-id order.
    /// Throws if the prefix is not a path of the trie.
    std::vector<int> allowed_next(const std::vector<int>& prefix) const;

    /// True when `tokens` spells a complete root-to-terminal path.
    bool is_terminal(const std::vector<int>& tokens) const;

    size_t node_count() const { return nodes_.size(); }
    size_t terminal_count() const { return terminal_count_; }

    /// All terminal token paths (including EOS), sorted lexicographically.
    std::vector<std::vector<int>> terminal_paths() const;

    /// Insert an ED token path; the EOS terminator is appended here.
    /// Re-inserting an existing path is a no-op.
    void insert(const std::vector<int>& ed_tokens);

private:
    struct Node {
        std::map<int, int> children;  // token id -> node index
        bool terminal = false;
    };
    std::vector<Node> nodes_ = {Node{}};
    size_t terminal_count_ = 0;

    int walk(const std::vector<int>& prefix) const;  // -1 when not a path
};

/// Build the decoding trie from the table. Any ED that tokenizes to UNK under
/// this vocabulary is an error (the trie must only spell in-vocab sequences).
DocidTrie build_trie(const EdTable& table, const corpus::Vocabulary& vocab);

/// One "token-path -> ED" line per terminal, sorted; for debugging.
std::string dump_trie(const DocidTrie& trie, const corpus::Vocabulary& vocab);

}  // namespace sedsi::docid
