#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sedsi/corpus.hpp"

namespace sedsi::summarize {

/// Undirected similarity graph over text units. Zero-weight pairs are
/// omitted; the edge list stores each pair once with i < j.
struct TextGraph {
    struct Edge {
        size_t a;
        size_t b;
        double weight;
    };
    size_t node_count = 0;
    std::vector<Edge> edges;
};

/// Lexical overlap between two token lists:
///   |shared distinct tokens| / (log max(|a|,2) + log max(|b|,2)).
/// The max(.,2) guard keeps the denominator positive for one-token units.
double similarity(const std::vector<std::string>& unit_a, const std::vector<std::string>& unit_b);

/// Pairwise similarity graph; an edge exists iff similarity > 0.
TextGraph build_graph(const std::vector<std::vector<std::string>>& units);

/// Weighted PageRank on the similarity graph:
///   WS(i) = (1-d) + d * sum_{j in N(i)} w_ji / (sum_{k in N(j)} w_jk) * WS(j)
/// Scores start at 1.0 and iterate until the largest per-node change drops
/// below tol or max_iter is hit. Isolated nodes settle at (1-d).
std::vector<double> pagerank(const TextGraph& graph, double damping = 0.85,
                             double tol = 1e-6, size_t max_iter = 100);

/// Indices of the top-n passages and top-u sentences by PageRank score over
/// the two unit graphs, ties broken by earlier position. Both lists come back
/// in document order. Requests larger than the unit count return everything.
std::pair<std::vector<size_t>, std::vector<size_t>> extract_summary(
    const std::vector<std::vector<std::string>>& sentence_tokens,
    const corpus::PassageList& passages, size_t n_passages, size_t u_sentences);

/// Top-k indices by score, ties broken by smaller index; result sorted
/// ascending. Shared by extract_summary and the extractive docid fallback.
std::vector<size_t> top_k_by_score(const std::vector<double>& scores, size_t k);

}  // namespace sedsi::summarize
