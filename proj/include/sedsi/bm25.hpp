#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sedsi/corpus.hpp"

namespace sedsi::bm25 {

/// Classic inverted index with exact term frequencies.
struct InvertedIndex {
    struct Posting {
        size_t doc = 0;  // index into doc_ids
        size_t tf = 0;
    };
    std::vector<std::string> doc_ids;
    std::vector<size_t> doc_lengths;  // token counts
    double avg_doc_length = 0.0;
    std::unordered_map<std::string, std::vector<Posting>> postings;  // sorted by doc
};

/// Tokenizes documents with the shared tokenizer and builds the index.
InvertedIndex build(const std::vector<corpus::Document>& docs);

/// Okapi scoring with the non-negative idf variant
///   idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
/// summed once per query-token occurrence. Only documents matching at least
/// one query term are returned, top-k by score, ties by doc_id.
std::vector<std::pair<std::string, double>> retrieve(const InvertedIndex& index,
                                                     const std::vector<std::string>& query_tokens,
                                                     size_t k, double k1 = 0.9, double b = 0.4);

}  // namespace sedsi::bm25
