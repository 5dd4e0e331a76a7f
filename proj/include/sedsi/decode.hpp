#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sedsi/docid.hpp"
#include "sedsi/model.hpp"

namespace sedsi::decode {

struct Hypothesis {
    std::vector<int> tokens;
    double score = 0.0;  // sum of token log-probabilities
    bool finished = false;
};

struct BeamConfig {
    size_t width = 20;
    size_t max_len = docid::kMaxEdLen + 1;  // tokens + EOS
    uint64_t seed = 0;                      // collision expansion shuffle
    bool length_normalize = false;          // mean instead of sum scoring
};

/// One query's ranked documents.
struct RunEntry {
    std::string qid;
    std::vector<std::pair<std::string, double>> docs;  // (doc_id, score), scores non-increasing
};

struct RankedRun {
    std::string tag = "sedsi";
    std::vector<RunEntry> entries;
};

/// Beam search where each step's candidates are restricted to children of the
/// current prefix in the trie. Hypotheses that take the EOS edge are set
/// aside as finished; the search stops once `width` have finished or every
/// beam is exhausted. Output is sorted by score, ties broken by the
/// lexicographically smaller token sequence, and always spells valid EDs.
std::vector<std::pair<std::vector<int>, double>> constrained_beam_search(
    const model::Scorer& scorer, const docid::DocidTrie& trie,
    const std::vector<int>& source, const BeamConfig& config);

/// Expand ranked EDs into ranked documents. Documents sharing an ED inherit
/// its score and are emitted in seeded-shuffle order; documents of different
/// EDs keep the ED ranking.
std::vector<std::pair<std::string, double>> expand_to_documents(
    const std::vector<std::pair<std::vector<int>, double>>& ranked_eds,
    const docid::EdTable& table, const corpus::Vocabulary& vocab, uint64_t seed);

/// Tokenize the query, prepend the QUERY task marker, decode against the
/// trie and expand to documents. Throws if the query tokenizes to nothing.
RunEntry retrieve(const std::string& qid, const std::string& query_text,
                  const model::Scorer& scorer, const docid::DocidTrie& trie,
                  const docid::EdTable& table, const corpus::Vocabulary& vocab,
                  const BeamConfig& config);

/// TREC run lines: "qid Q0 doc_id rank score tag", rank from 1, score with
/// six decimals. A non-empty header is written first as a '#' comment.
void write_trec_run(const RankedRun& run, const std::string& path,
                    const std::string& header = "");
RankedRun read_trec_run(const std::string& path);

}  // namespace sedsi::decode
