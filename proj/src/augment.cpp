#include "sedsi/augment.hpp"

#include <algorithm>
#include <fstream>

#include "sedsi/summarize.hpp"
#include "sedsi/util.hpp"
#include "json.hpp"

namespace sedsi::augment {

Style parse_style(const std::string& name) {
    if (name == "doc") return Style::Doc;
    if (name == "lead") return Style::Lead;
    if (name == "sum") return Style::Sum;
    if (name == "random") return Style::Random;
    throw Error("unknown RC style '" + name + "' (expected doc|lead|sum|random)");
}

const char* style_name(Style s) {
    switch (s) {
        case Style::Doc: return "doc";
        case Style::Lead: return "lead";
        case Style::Sum: return "sum";
        case Style::Random: return "random";
    }
    return "?";
}

std::vector<Query> load_queries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open queries file: " + path);
    std::vector<Query> queries;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error("queries line " + std::to_string(line_no) + ": expected qid<TAB>text");
        std::string text = line.substr(tab + 1);
        if (!text.empty() && text.back() == '\r') text.pop_back();
        queries.push_back({line.substr(0, tab), text});
    }
    return queries;
}

Qrels load_qrels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open qrels file: " + path);
    Qrels qrels;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> fields;
        size_t start = 0;
        while (start <= line.size()) {
            size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields.size() != 4)
            throw Error("qrels line " + std::to_string(line_no) +
                        ": expected qid<TAB>0<TAB>doc_id<TAB>rel");
        if (!qrels.emplace(fields[0], fields[2]).second)
            throw Error("qrels line " + std::to_string(line_no) + ": duplicate qid '" +
                        fields[0] + "'");
    }
    return qrels;
}

std::string DocUnits::passage_text(size_t passage_index) const {
    const auto& p = passages.passages.at(passage_index);
    std::string text;
    for (size_t s = p.begin; s < p.end; ++s) {
        if (!text.empty()) text.push_back(' ');
        text += sentences[s];
    }
    return text;
}

std::vector<std::string> DocUnits::passage_tokens(size_t passage_index) const {
    const auto& p = passages.passages.at(passage_index);
    std::vector<std::string> tokens;
    for (size_t s = p.begin; s < p.end; ++s)
        tokens.insert(tokens.end(), sentence_tokens[s].begin(), sentence_tokens[s].end());
    return tokens;
}

DocUnits split_units(const corpus::Document& doc, size_t window, size_t stride) {
    DocUnits units;
    units.sentences = corpus::split_sentences(doc.text);
    units.sentence_tokens.reserve(units.sentences.size());
    for (const auto& s : units.sentences) units.sentence_tokens.push_back(corpus::tokenize(s));
    units.passages = corpus::window_passages(units.sentences.size(), window, stride);
    return units;
}

namespace {

std::string join_sentences(const DocUnits& units, const std::vector<size_t>& ids) {
    std::string text;
    for (size_t id : ids) {
        if (!text.empty()) text.push_back(' ');
        text += units.sentences[id];
    }
    return text;
}

// "fewer than 3 passages" forces a single passage RC
size_t effective_passage_count(size_t requested, size_t available) {
    if (available < 3) return std::min<size_t>(1, available);
    return std::min(requested, available);
}

}  // namespace

std::vector<RehearsalContent> lead_rcs(const corpus::Document& doc, const DocUnits& units,
                                       const AugmentConfig& config) {
    std::vector<RehearsalContent> rcs;
    size_t n_pass = effective_passage_count(config.lead_passages, units.passages.passages.size());
    for (size_t p = 0; p < n_pass; ++p)
        rcs.push_back({doc.doc_id, Granularity::Passage, Style::Lead, units.passage_text(p)});

    size_t n_sent = std::min(config.lead_sentences, units.sentences.size());
    std::vector<size_t> ids(n_sent);
    for (size_t i = 0; i < n_sent; ++i) ids[i] = i;
    if (!ids.empty())
        rcs.push_back({doc.doc_id, Granularity::Sentence, Style::Lead, join_sentences(units, ids)});
    return rcs;
}

std::vector<RehearsalContent> summary_rcs(const corpus::Document& doc, const DocUnits& units,
                                          const AugmentConfig& config) {
    size_t n_pass = effective_passage_count(config.sum_passages, units.passages.passages.size());
    auto [passage_ids, sentence_ids] =
        summarize::extract_summary(units.sentence_tokens, units.passages, n_pass,
                                   std::min(config.sum_sentences, units.sentences.size()));

    std::vector<RehearsalContent> rcs;
    for (size_t p : passage_ids)
        rcs.push_back({doc.doc_id, Granularity::Passage, Style::Sum, units.passage_text(p)});
    if (!sentence_ids.empty())
        rcs.push_back(
            {doc.doc_id, Granularity::Sentence, Style::Sum, join_sentences(units, sentence_ids)});
    return rcs;
}

std::vector<RehearsalContent> random_rcs(const corpus::Document& doc, const DocUnits& units,
                                         const AugmentConfig& config) {
    // per-document stream so the draw does not depend on corpus order
    Rng rng(fnv1a(doc.doc_id, config.seed ^ 0x9e3779b97f4a7c15ull));

    auto passage_pick =
        rng.sample_without_replacement(units.passages.passages.size(), config.lead_passages);
    std::sort(passage_pick.begin(), passage_pick.end());
    auto sentence_pick =
        rng.sample_without_replacement(units.sentences.size(), config.lead_sentences);
    std::sort(sentence_pick.begin(), sentence_pick.end());

    std::vector<RehearsalContent> rcs;
    for (size_t p : passage_pick)
        rcs.push_back({doc.doc_id, Granularity::Passage, Style::Random, units.passage_text(p)});
    if (!sentence_pick.empty())
        rcs.push_back(
            {doc.doc_id, Granularity::Sentence, Style::Random, join_sentences(units, sentence_pick)});
    return rcs;
}

std::vector<RehearsalContent> make_rcs(const corpus::Document& doc, const DocUnits& units,
                                       Style style, const AugmentConfig& config) {
    switch (style) {
        case Style::Doc: return {};
        case Style::Lead: return lead_rcs(doc, units, config);
        case Style::Sum: return summary_rcs(doc, units, config);
        case Style::Random: return random_rcs(doc, units, config);
    }
    return {};
}

std::vector<TrainingExample> build_training_set(
    const std::vector<corpus::Document>& docs, const docid::EdTable& eds,
    const std::vector<RehearsalContent>& rcs, const std::vector<Query>& queries,
    const Qrels& qrels, bool zero_shot, const corpus::Vocabulary& vocab, size_t max_source_len) {
    std::unordered_map<std::string, std::vector<int>> targets;
    for (const auto& doc : docs) {
        if (!eds.has_doc(doc.doc_id)) throw Error("doc '" + doc.doc_id + "' has no ED");
        auto target = vocab.ids(corpus::tokenize(eds.ed_of(doc.doc_id)));
        target.push_back(corpus::Vocabulary::kEos);
        targets.emplace(doc.doc_id, std::move(target));
    }

    auto make_source = [&](int marker, const std::string& text) {
        std::vector<int> source;
        source.push_back(marker);
        for (int id : vocab.ids(corpus::tokenize(text))) {
            if (source.size() >= max_source_len) break;
            source.push_back(id);
        }
        return source;
    };

    std::vector<TrainingExample> examples;
    std::unordered_map<std::string, std::vector<const RehearsalContent*>> rcs_by_doc;
    for (const auto& rc : rcs) {
        if (!targets.count(rc.doc_id))
            throw Error("rehearsal content references unknown doc '" + rc.doc_id + "'");
        rcs_by_doc[rc.doc_id].push_back(&rc);
    }

    for (const auto& doc : docs) {
        const auto& target = targets.at(doc.doc_id);
        examples.push_back({TrainingExample::Task::Document,
                            make_source(corpus::Vocabulary::kDocTask, doc.text), target});
        auto it = rcs_by_doc.find(doc.doc_id);
        if (it == rcs_by_doc.end()) continue;
        for (const auto* rc : it->second)
            examples.push_back({TrainingExample::Task::Document,
                                make_source(corpus::Vocabulary::kDocTask, rc->text), target});
    }

    std::unordered_map<std::string, bool> query_known;
    for (const auto& q : queries) query_known[q.qid] = true;
    for (const auto& [qid, doc_id] : qrels) {
        if (!query_known.count(qid))
            throw Error("qrels references unknown query id '" + qid + "'");
        if (!targets.count(doc_id))
            throw Error("qrels references unknown doc_id '" + doc_id + "'");
    }

    if (!zero_shot) {
        for (const auto& q : queries) {
            auto rel = qrels.find(q.qid);
            if (rel == qrels.end()) continue;  // unjudged queries carry no label
            examples.push_back({TrainingExample::Task::Query,
                                make_source(corpus::Vocabulary::kQueryTask, q.text),
                                targets.at(rel->second)});
        }
    }
    return examples;
}

void dump_rcs(const std::vector<RehearsalContent>& rcs, const std::string& path,
              const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write RC dump: " + path);
    if (!header.empty()) out << "# " << header << "\n";
    for (const auto& rc : rcs) {
        nlohmann::ordered_json record;
        record["doc_id"] = rc.doc_id;
        record["style"] = style_name(rc.style);
        record["granularity"] = rc.granularity == Granularity::Passage ? "passage" : "sentence";
        record["text"] = rc.text;
        out << record.dump() << "\n";
    }
}

}  // namespace sedsi::augment
