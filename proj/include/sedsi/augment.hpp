#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sedsi/corpus.hpp"
#include "sedsi/docid.hpp"

namespace sedsi::augment {

enum class Granularity { Passage, Sentence };
enum class Style { Doc, Lead, Sum, Random };

Style parse_style(const std::string& name);
const char* style_name(Style s);

struct AugmentConfig {
    size_t lead_passages = 3;    // l
    size_t lead_sentences = 6;   // k
    size_t sum_passages = 1;     // n
    size_t sum_sentences = 6;    // u
    uint64_t seed = 0;           // random style only
};

struct RehearsalContent {
    std::string doc_id;
    Granularity granularity;
    Style style;
    std::string text;
};

/// One training pair: task-marked source token ids -> ED token ids + EOS.
struct TrainingExample {
    enum class Task { Document, Query };
    Task task;
    std::vector<int> source;
    std::vector<int> target;
};

struct Query {
    std::string qid;
    std::string text;
};

/// qid -> relevant doc_id (one judged document per query).
using Qrels = std::unordered_map<std::string, std::string>;

std::vector<Query> load_queries(const std::string& path);
Qrels load_qrels(const std::string& path);

/// Sentence/passage view of one document, shared by the augmenters.
struct DocUnits {
    std::vector<std::string> sentences;
    std::vector<std::vector<std::string>> sentence_tokens;
    corpus::PassageList passages;

    std::string passage_text(size_t passage_index) const;
    std::vector<std::string> passage_tokens(size_t passage_index) const;
};

DocUnits split_units(const corpus::Document& doc, size_t window = 5, size_t stride = 2);

/// First l passages as individual passage RCs plus the first k sentences
/// concatenated as one sentence RC. Documents with fewer than 3 passages get
/// a single passage RC; documents with fewer than k sentences use them all.
std::vector<RehearsalContent> lead_rcs(const corpus::Document& doc, const DocUnits& units,
                                       const AugmentConfig& config);

/// Top-n passages (each its own RC) and the top-u sentences concatenated in
/// document order, both selected by PageRank. Shortfall rules as in lead_rcs.
std::vector<RehearsalContent> summary_rcs(const corpus::Document& doc, const DocUnits& units,
                                          const AugmentConfig& config);

/// l passages and k sentences sampled uniformly without replacement (seeded);
/// sampled units are emitted in document order.
std::vector<RehearsalContent> random_rcs(const corpus::Document& doc, const DocUnits& units,
                                         const AugmentConfig& config);

/// RCs for one document under the configured style (none for Style::Doc).
std::vector<RehearsalContent> make_rcs(const corpus::Document& doc, const DocUnits& units,
                                       Style style, const AugmentConfig& config);

/// Assemble the multi-task training pool:
///   {DOC marker + document text -> ED} for every document,
///   {DOC marker + RC text -> ED} for every rehearsal content,
///   {QUERY marker + query text -> ED of its judged document} unless zero_shot.
/// Sources are truncated to max_source_len tokens (marker included).
std::vector<TrainingExample> build_training_set(
    const std::vector<corpus::Document>& docs, const docid::EdTable& eds,
    const std::vector<RehearsalContent>& rcs, const std::vector<Query>& queries,
    const Qrels& qrels, bool zero_shot, const corpus::Vocabulary& vocab,
    size_t max_source_len = 512);

void dump_rcs(const std::vector<RehearsalContent>& rcs, const std::string& path,
              const std::string& header = "");

}  // namespace sedsi::augment
