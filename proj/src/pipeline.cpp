#include "sedsi/pipeline.hpp"

namespace sedsi::pipeline {

corpus::Vocabulary build_vocabulary(const std::vector<corpus::Document>& docs,
                                    const docid::EdTable& eds,
                                    const std::vector<augment::Query>& queries, int min_freq) {
    std::vector<std::vector<std::string>> streams;
    streams.reserve(docs.size() + eds.doc_count() + queries.size());
    for (const auto& doc : docs) streams.push_back(corpus::tokenize(doc.text));
    for (const auto& [ed_text, ignored] : eds.forward())
        streams.push_back(corpus::tokenize(ed_text));
    for (const auto& q : queries) streams.push_back(corpus::tokenize(q.text));
    return corpus::Vocabulary::build(streams, min_freq);
}

std::vector<augment::RehearsalContent> collect_rcs(const std::vector<corpus::Document>& docs,
                                                   augment::Style style,
                                                   const augment::AugmentConfig& config,
                                                   size_t window, size_t stride) {
    std::vector<augment::RehearsalContent> rcs;
    for (const auto& doc : docs) {
        auto units = augment::split_units(doc, window, stride);
        auto doc_rcs = augment::make_rcs(doc, units, style, config);
        rcs.insert(rcs.end(), std::make_move_iterator(doc_rcs.begin()),
                   std::make_move_iterator(doc_rcs.end()));
    }
    return rcs;
}

}  // namespace sedsi::pipeline
