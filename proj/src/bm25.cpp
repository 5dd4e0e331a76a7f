#include "sedsi/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sedsi/util.hpp"

namespace sedsi::bm25 {

InvertedIndex build(const std::vector<corpus::Document>& docs) {
    if (docs.empty()) throw Error("bm25: empty corpus");
    InvertedIndex index;
    index.doc_ids.reserve(docs.size());
    index.doc_lengths.reserve(docs.size());

    size_t total_length = 0;
    for (size_t d = 0; d < docs.size(); ++d) {
        auto tokens = corpus::tokenize(docs[d].text);
        index.doc_ids.push_back(docs[d].doc_id);
        index.doc_lengths.push_back(tokens.size());
        total_length += tokens.size();

        std::map<std::string, size_t> tf;
        for (const auto& t : tokens) ++tf[t];
        for (const auto& [term, count] : tf)
            index.postings[term].push_back({d, count});  // docs arrive in order, stays sorted
    }
    index.avg_doc_length = static_cast<double>(total_length) / static_cast<double>(docs.size());
    return index;
}

std::vector<std::pair<std::string, double>> retrieve(const InvertedIndex& index,
                                                     const std::vector<std::string>& query_tokens,
                                                     size_t k, double k1, double b) {
    if (k < 1) throw Error("bm25: k must be >= 1");
    if (index.avg_doc_length <= 0.0) return {};
    const double n_docs = static_cast<double>(index.doc_ids.size());

    std::unordered_map<size_t, double> scores;
    for (const auto& term : query_tokens) {  // one contribution per occurrence
        auto it = index.postings.find(term);
        if (it == index.postings.end()) continue;
        const auto& postings = it->second;
        double df = static_cast<double>(postings.size());
        double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
        for (const auto& posting : postings) {
            double tf = static_cast<double>(posting.tf);
            double dl = static_cast<double>(index.doc_lengths[posting.doc]);
            double norm = k1 * (1.0 - b + b * dl / index.avg_doc_length);
            scores[posting.doc] += idf * tf * (k1 + 1.0) / (tf + norm);
        }
    }

    std::vector<std::pair<std::string, double>> ranked;
    ranked.reserve(scores.size());
    for (const auto& [doc, score] : scores) ranked.emplace_back(index.doc_ids[doc], score);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b2) {
        if (a.second != b2.second) return a.second > b2.second;
        return a.first < b2.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

}  // namespace sedsi::bm25
