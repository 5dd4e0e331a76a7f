#include "sedsi/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "sedsi/util.hpp"

namespace sedsi::eval {

namespace {

/// 1-based rank of the judged doc for each qrels query; 0 when not ranked.
std::unordered_map<std::string, size_t> judged_ranks(const decode::RankedRun& run,
                                                     const Qrels& qrels) {
    std::unordered_map<std::string, size_t> ranks;
    for (const auto& [qid, doc_id] : qrels) ranks[qid] = 0;
    for (const auto& entry : run.entries) {
        auto rel = qrels.find(entry.qid);
        if (rel == qrels.end()) continue;
        for (size_t i = 0; i < entry.docs.size(); ++i) {
            if (entry.docs[i].first == rel->second) {
                ranks[entry.qid] = i + 1;
                break;
            }
        }
    }
    return ranks;
}

void require(bool cond, const char* msg) {
    if (!cond) throw Error(msg);
}

}  // namespace

double hits_at(const decode::RankedRun& run, const Qrels& qrels, size_t n) {
    require(n >= 1, "hits_at: N must be >= 1");
    require(!qrels.empty(), "hits_at: empty qrels");
    size_t hits = 0;
    for (const auto& [qid, rank] : judged_ranks(run, qrels)) {
        if (rank >= 1 && rank <= n) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(qrels.size());
}

double mrr_at(const decode::RankedRun& run, const Qrels& qrels, size_t n) {
    require(n >= 1, "mrr_at: N must be >= 1");
    require(!qrels.empty(), "mrr_at: empty qrels");
    double sum = 0.0;
    for (const auto& [qid, rank] : judged_ranks(run, qrels)) {
        if (rank >= 1 && rank <= n) sum += 1.0 / static_cast<double>(rank);
    }
    return sum / static_cast<double>(qrels.size());
}

std::string registrable_domain(const std::string& id) {
    std::string host = id;
    size_t scheme = host.find("://");
    if (scheme != std::string::npos) host = host.substr(scheme + 3);
    size_t slash = host.find_first_of("/:?");
    if (slash != std::string::npos) host = host.substr(0, slash);

    size_t last_dot = host.rfind('.');
    if (last_dot == std::string::npos || last_dot == 0) return host;
    size_t second_dot = host.rfind('.', last_dot - 1);
    if (second_dot == std::string::npos) return host;
    return host.substr(second_dot + 1);
}

double recall_at(const decode::RankedRun& run, const Qrels& qrels, size_t k, RecallKey key) {
    require(k >= 1, "recall_at: k must be >= 1");
    require(!qrels.empty(), "recall_at: empty qrels");
    auto key_of = [&](const std::string& id) {
        return key == RecallKey::Domain ? registrable_domain(id) : id;
    };

    std::unordered_map<std::string, const decode::RunEntry*> by_qid;
    for (const auto& entry : run.entries) by_qid.emplace(entry.qid, &entry);

    size_t found = 0;
    for (const auto& [qid, truth] : qrels) {
        auto it = by_qid.find(qid);
        if (it == by_qid.end()) continue;
        const auto& docs = it->second->docs;
        std::string truth_key = key_of(truth);
        for (size_t i = 0; i < docs.size() && i < k; ++i) {
            if (key_of(docs[i].first) == truth_key) {
                ++found;
                break;
            }
        }
    }
    return static_cast<double>(found) / static_cast<double>(qrels.size());
}

MetricReport evaluate_run(const decode::RankedRun& run, const Qrels& qrels,
                          const std::vector<std::string>& metric_specs) {
    MetricReport report;
    report.query_count = qrels.size();
    for (const auto& spec : metric_specs) {
        size_t at = spec.find('@');
        if (at == std::string::npos) throw Error("unknown metric '" + spec + "'");
        std::string name = spec.substr(0, at);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        size_t cutoff = 0;
        try {
            cutoff = std::stoul(spec.substr(at + 1));
        } catch (const std::exception&) {
            throw Error("bad cutoff in metric '" + spec + "'");
        }
        double value = 0.0;
        std::string canonical;
        if (name == "hits") {
            value = hits_at(run, qrels, cutoff);
            canonical = "Hits@";
        } else if (name == "mrr") {
            value = mrr_at(run, qrels, cutoff);
            canonical = "MRR@";
        } else if (name == "recall") {
            value = recall_at(run, qrels, cutoff, RecallKey::Identity);
            canonical = "Recall@";
        } else if (name == "domainrecall" || name == "domain_recall") {
            value = recall_at(run, qrels, cutoff, RecallKey::Domain);
            canonical = "DomainRecall@";
        } else {
            throw Error("unknown metric '" + spec + "'");
        }
        report.values.emplace_back(canonical + std::to_string(cutoff), value);
    }
    return report;
}

void write_report(const MetricReport& report, const std::string& path,
                  const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write metric report: " + path);
    if (!header.empty()) out << "# " << header << "\n";
    out << "queries\t" << report.query_count << "\n";
    char buf[64];
    for (const auto& [name, value] : report.values) {
        std::snprintf(buf, sizeof(buf), "%.6f", value);
        out << name << "\t" << buf << "\n";
    }
}

}  // namespace sedsi::eval
