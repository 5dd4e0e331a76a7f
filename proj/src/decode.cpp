#include "sedsi/decode.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "sedsi/util.hpp"

namespace sedsi::decode {

namespace {

bool better(const std::pair<std::vector<int>, double>& a,
            const std::pair<std::vector<int>, double>& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;  // lexicographically smaller token sequence wins ties
}

}  // namespace

std::vector<std::pair<std::vector<int>, double>> constrained_beam_search(
    const model::Scorer& scorer, const docid::DocidTrie& trie,
    const std::vector<int>& source, const BeamConfig& config) {
    if (config.width < 1) throw Error("beam width must be >= 1");
    if (trie.terminal_count() == 0) throw Error("beam search over an empty trie");

    using Scored = std::pair<std::vector<int>, double>;  // (tokens, summed logprob)
    std::vector<Scored> live;
    live.push_back({{}, 0.0});
    std::vector<Scored> finished;

    for (size_t step_no = 0; step_no < config.max_len && !live.empty(); ++step_no) {
        if (finished.size() >= config.width) break;
        std::vector<Scored> candidates;
        for (const auto& hyp : live) {
            Eigen::VectorXd logprobs = scorer.next_token_logprobs(source, hyp.first);
            for (int token : trie.allowed_next(hyp.first)) {
                std::vector<int> extended = hyp.first;
                extended.push_back(token);
                candidates.push_back({std::move(extended), hyp.second + logprobs(token)});
            }
        }
        live.clear();
        std::sort(candidates.begin(), candidates.end(), better);
        for (auto& cand : candidates) {
            if (cand.first.back() == corpus::Vocabulary::kEos) {
                finished.push_back(std::move(cand));
            } else if (live.size() < config.width) {
                live.push_back(std::move(cand));
            }
        }
    }

    std::sort(finished.begin(), finished.end(), better);
    if (finished.size() > config.width) finished.resize(config.width);
    if (config.length_normalize) {
        for (auto& f : finished) f.second /= static_cast<double>(f.first.size());
        std::sort(finished.begin(), finished.end(), better);
    }
    return finished;
}

std::vector<std::pair<std::string, double>> expand_to_documents(
    const std::vector<std::pair<std::vector<int>, double>>& ranked_eds,
    const docid::EdTable& table, const corpus::Vocabulary& vocab, uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<std::string, double>> docs;
    for (const auto& [tokens, score] : ranked_eds) {
        std::string ed_text;
        for (size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i] == corpus::Vocabulary::kEos) break;
            if (i) ed_text.push_back(' ');
            ed_text += vocab.token(tokens[i]);
        }
        auto group = table.docs_of(ed_text);  // throws on unknown EDs
        if (group.size() > 1) rng.shuffle(group);
        for (auto& doc_id : group) docs.emplace_back(std::move(doc_id), score);
    }
    return docs;
}

RunEntry retrieve(const std::string& qid, const std::string& query_text,
                  const model::Scorer& scorer, const docid::DocidTrie& trie,
                  const docid::EdTable& table, const corpus::Vocabulary& vocab,
                  const BeamConfig& config) {
    auto tokens = corpus::tokenize(query_text);
    if (tokens.empty()) throw Error("query '" + qid + "' tokenizes to nothing");
    std::vector<int> source;
    source.push_back(corpus::Vocabulary::kQueryTask);
    for (int id : vocab.ids(tokens)) source.push_back(id);

    auto ranked = constrained_beam_search(scorer, trie, source, config);
    RunEntry entry;
    entry.qid = qid;
    entry.docs = expand_to_documents(ranked, table, vocab, config.seed);
    return entry;
}

void write_trec_run(const RankedRun& run, const std::string& path, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write run file: " + path);
    if (!header.empty()) out << "# " << header << "\n";
    char score_buf[64];
    for (const auto& entry : run.entries) {
        size_t rank = 1;
        for (const auto& [doc_id, score] : entry.docs) {
            std::snprintf(score_buf, sizeof(score_buf), "%.6f", score);
            out << entry.qid << " Q0 " << doc_id << " " << rank << " " << score_buf << " "
                << run.tag << "\n";
            ++rank;
        }
    }
}

RankedRun read_trec_run(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open run file: " + path);
    RankedRun run;
    std::map<std::string, size_t> index;
    std::vector<std::vector<size_t>> ranks;  // per entry, parallel to docs
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::string qid, q0, doc_id, tag;
        size_t rank;
        double score;
        std::istringstream fields(line);
        if (!(fields >> qid >> q0 >> doc_id >> rank >> score >> tag))
            throw Error("run file line " + std::to_string(line_no) + ": malformed TREC line");
        run.tag = tag;
        auto [it, added] = index.try_emplace(qid, run.entries.size());
        if (added) {
            run.entries.push_back({qid, {}});
            ranks.emplace_back();
        }
        run.entries[it->second].docs.emplace_back(doc_id, score);
        ranks[it->second].push_back(rank);
    }
    // restore per-query rank order in case the file interleaves
    for (size_t e = 0; e < run.entries.size(); ++e) {
        auto& docs = run.entries[e].docs;
        std::vector<size_t> order(docs.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return ranks[e][a] < ranks[e][b]; });
        std::vector<std::pair<std::string, double>> sorted;
        sorted.reserve(docs.size());
        for (size_t i : order) sorted.push_back(std::move(docs[i]));
        docs = std::move(sorted);
    }
    return run;
}

}  // namespace sedsi::decode
