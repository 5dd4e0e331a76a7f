#include "sedsi/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "sedsi/util.hpp"

namespace sedsi::summarize {

double similarity(const std::vector<std::string>& unit_a, const std::vector<std::string>& unit_b) {
    if (unit_a.empty() || unit_b.empty()) return 0.0;
    const auto& small = unit_a.size() <= unit_b.size() ? unit_a : unit_b;
    const auto& large = unit_a.size() <= unit_b.size() ? unit_b : unit_a;
    std::unordered_set<std::string> small_set(small.begin(), small.end());
    std::unordered_set<std::string> shared;
    for (const auto& tok : large) {
        if (small_set.count(tok)) shared.insert(tok);
    }
    if (shared.empty()) return 0.0;
    double denom = std::log(static_cast<double>(std::max<size_t>(unit_a.size(), 2))) +
                   std::log(static_cast<double>(std::max<size_t>(unit_b.size(), 2)));
    return static_cast<double>(shared.size()) / denom;
}

TextGraph build_graph(const std::vector<std::vector<std::string>>& units) {
    if (units.empty()) throw Error("build_graph: no units");
    TextGraph graph;
    graph.node_count = units.size();
    for (size_t i = 0; i + 1 < units.size(); ++i) {
        for (size_t j = i + 1; j < units.size(); ++j) {
            double w = similarity(units[i], units[j]);
            if (w > 0.0) graph.edges.push_back({i, j, w});
        }
    }
    return graph;
}

std::vector<double> pagerank(const TextGraph& graph, double damping, double tol,
                             size_t max_iter) {
    if (damping <= 0.0 || damping >= 1.0) throw Error("pagerank: damping must be in (0,1)");
    const size_t n = graph.node_count;
    std::vector<double> weight_sum(n, 0.0);  // total incident weight per node
    for (const auto& e : graph.edges) {
        if (!std::isfinite(e.weight)) throw Error("pagerank: non-finite edge weight");
        weight_sum[e.a] += e.weight;
        weight_sum[e.b] += e.weight;
    }

    const double teleport = 1.0 - damping;
    std::vector<double> scores(n, 1.0);
    std::vector<double> next(n);
    for (size_t iter = 0; iter < max_iter; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        // accumulate d * w_ji / sum_k(w_jk) * WS(j) along both edge directions
        for (const auto& e : graph.edges) {
            next[e.a] += e.weight / weight_sum[e.b] * scores[e.b];
            next[e.b] += e.weight / weight_sum[e.a] * scores[e.a];
        }
        double max_delta = 0.0;
        for (size_t i = 0; i < n; ++i) {
            next[i] = teleport + damping * next[i];
            max_delta = std::max(max_delta, std::abs(next[i] - scores[i]));
        }
        scores.swap(next);
        if (max_delta < tol) break;
    }
    return scores;
}

std::vector<size_t> top_k_by_score(const std::vector<double>& scores, size_t k) {
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return scores[a] > scores[b];  // stable keeps earlier index on ties
    });
    if (order.size() > k) order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

std::pair<std::vector<size_t>, std::vector<size_t>> extract_summary(
    const std::vector<std::vector<std::string>>& sentence_tokens,
    const corpus::PassageList& passages, size_t n_passages, size_t u_sentences) {
    std::vector<std::vector<std::string>> passage_units;
    passage_units.reserve(passages.passages.size());
    for (const auto& p : passages.passages) {
        std::vector<std::string> unit;
        for (size_t s = p.begin; s < p.end; ++s)
            unit.insert(unit.end(), sentence_tokens[s].begin(), sentence_tokens[s].end());
        passage_units.push_back(std::move(unit));
    }

    auto passage_scores = pagerank(build_graph(passage_units));
    auto sentence_scores = pagerank(build_graph(sentence_tokens));
    return {top_k_by_score(passage_scores, n_passages),
            top_k_by_score(sentence_scores, u_sentences)};
}

}  // namespace sedsi::summarize
