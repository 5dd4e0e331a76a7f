#pragma once

#include <string>
#include <vector>

#include "sedsi/augment.hpp"
#include "sedsi/corpus.hpp"
#include "sedsi/docid.hpp"

namespace sedsi::pipeline {

/// Vocabulary over document texts, ED texts and query texts, so decoding and
/// docids share one token space.
corpus::Vocabulary build_vocabulary(const std::vector<corpus::Document>& docs,
                                    const docid::EdTable& eds,
                                    const std::vector<augment::Query>& queries,
                                    int min_freq = 1);

/// Rehearsal contents for every document under one style, corpus order.
std::vector<augment::RehearsalContent> collect_rcs(const std::vector<corpus::Document>& docs,
                                                   augment::Style style,
                                                   const augment::AugmentConfig& config,
                                                   size_t window = 5, size_t stride = 2);

}  // namespace sedsi::pipeline
