#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sedsi/augment.hpp"
#include "sedsi/decode.hpp"

namespace sedsi::eval {

using augment::Qrels;

struct MetricReport {
    std::vector<std::pair<std::string, double>> values;  // in requested order
    size_t query_count = 0;
};

/// Fraction of queries whose judged document appears at rank <= N.
/// Queries absent from the run count as misses.
double hits_at(const decode::RankedRun& run, const Qrels& qrels, size_t n);

/// Mean reciprocal rank, zero for queries ranked beyond N or missing.
double mrr_at(const decode::RankedRun& run, const Qrels& qrels, size_t n);

enum class RecallKey { Identity, Domain };

/// Fraction of queries where key(prediction) == key(truth) for some
/// prediction in the top k. Domain keying reduces URL-like ids to their
/// registrable domain (last two dot-separated host labels).
double recall_at(const decode::RankedRun& run, const Qrels& qrels, size_t k, RecallKey key);

/// Registrable-domain suffix of a URL-like id: scheme/path stripped, then the
/// last two labels of the host ("jobs.pumch.cn" -> "pumch.cn").
std::string registrable_domain(const std::string& id);

/// Metric spec names: Hits@N, MRR@N, Recall@N, DomainRecall@N
/// (case-insensitive). Unknown names throw.
MetricReport evaluate_run(const decode::RankedRun& run, const Qrels& qrels,
                          const std::vector<std::string>& metric_specs);

/// key<TAB>value lines, one per metric plus the query count.
void write_report(const MetricReport& report, const std::string& path,
                  const std::string& header = "");

}  // namespace sedsi::eval
