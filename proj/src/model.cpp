#include "sedsi/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sedsi/util.hpp"

namespace sedsi::model {

namespace {

using Eigen::MatrixXd;
using Eigen::MatrixXf;
using Eigen::VectorXd;
using Eigen::VectorXf;

void fill_uniform(MatrixXf& m, Rng& rng, double scale) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = static_cast<float>(rng.uniform(-scale, scale));
}

void check_ids(const ModelParams& params, std::span<const int> ids, const char* what) {
    for (int id : ids) {
        if (id < 0 || id >= params.vocab_size)
            throw Error(std::string(what) + " token id " + std::to_string(id) +
                        " out of range [0," + std::to_string(params.vocab_size) + ")");
    }
}

/// Double-precision working copy; all math runs on this.
struct ParamsD {
    MatrixXd emb, w_src, w_prev, w_prefix, out;
    VectorXd bias, out_bias;

    explicit ParamsD(const ModelParams& p)
        : emb(p.emb.cast<double>()),
          w_src(p.w_src.cast<double>()),
          w_prev(p.w_prev.cast<double>()),
          w_prefix(p.w_prefix.cast<double>()),
          out(p.out.cast<double>()),
          bias(p.bias.cast<double>()),
          out_bias(p.out_bias.cast<double>()) {}
};

VectorXd mean_embedding(const MatrixXd& emb, std::span<const int> ids) {
    VectorXd pooled = VectorXd::Zero(emb.cols());
    if (ids.empty()) return pooled;
    for (int id : ids) pooled += emb.row(id).transpose();
    return pooled / static_cast<double>(ids.size());
}

VectorXd log_softmax(VectorXd logits) {
    double max = logits.maxCoeff();
    double lse = max + std::log((logits.array() - max).exp().sum());
    logits.array() -= lse;
    return logits;
}

VectorXd forward_from(const ParamsD& p, const VectorXd& source_pool,
                      std::span<const int> prefix) {
    int prev = prefix.empty() ? corpus::Vocabulary::kBos : prefix.back();
    VectorXd prev_emb = p.emb.row(prev).transpose();
    VectorXd prefix_pool =
        prefix.size() >= 2 ? mean_embedding(p.emb, prefix.subspan(0, prefix.size() - 1))
                           : VectorXd::Zero(p.emb.cols());
    VectorXd hidden =
        (p.w_src * source_pool + p.w_prev * prev_emb + p.w_prefix * prefix_pool + p.bias)
            .array()
            .tanh();
    return log_softmax(p.out * hidden + p.out_bias);
}

}  // namespace

ModelParams init_params(int vocab_size, int embed_dim, int hidden_dim, uint64_t seed) {
    if (vocab_size < 1 || embed_dim < 1 || hidden_dim < 1)
        throw Error("model dims must be positive");
    ModelParams p;
    p.vocab_size = vocab_size;
    p.embed_dim = embed_dim;
    p.hidden_dim = hidden_dim;
    p.emb.resize(vocab_size, embed_dim);
    p.w_src.resize(hidden_dim, embed_dim);
    p.w_prev.resize(hidden_dim, embed_dim);
    p.w_prefix.resize(hidden_dim, embed_dim);
    p.bias = VectorXf::Zero(hidden_dim);
    p.out.resize(vocab_size, hidden_dim);
    p.out_bias = VectorXf::Zero(vocab_size);

    Rng rng(seed);
    double w_scale = std::sqrt(6.0 / (embed_dim + hidden_dim));
    double out_scale = std::sqrt(6.0 / (hidden_dim + vocab_size));
    fill_uniform(p.emb, rng, 0.1);
    fill_uniform(p.w_src, rng, w_scale);
    fill_uniform(p.w_prev, rng, w_scale);
    fill_uniform(p.w_prefix, rng, w_scale);
    fill_uniform(p.out, rng, out_scale);
    return p;
}

Eigen::VectorXd forward_logprobs(const ModelParams& params, std::span<const int> source,
                                 std::span<const int> target_prefix) {
    if (source.empty()) throw Error("forward_logprobs: empty source");
    check_ids(params, source, "source");
    check_ids(params, target_prefix, "prefix");
    ParamsD p(params);
    return forward_from(p, mean_embedding(p.emb, source), target_prefix);
}

LossResult loss_and_grads(const ModelParams& params,
                          const std::vector<augment::TrainingExample>& batch,
                          double label_smoothing) {
    if (batch.empty()) throw Error("loss_and_grads: empty batch");
    const int V = params.vocab_size;
    const int E = params.embed_dim;

    Eigen::Index total_positions = 0;
    for (const auto& ex : batch) {
        if (ex.source.empty()) throw Error("loss_and_grads: example with empty source");
        if (ex.target.empty()) throw Error("loss_and_grads: example with empty target");
        check_ids(params, ex.source, "source");
        check_ids(params, ex.target, "target");
        total_positions += static_cast<Eigen::Index>(ex.target.size());
    }

    ParamsD p(params);
    const Eigen::Index T = total_positions;

    // Column t holds the inputs of one target position.
    MatrixXd src_pool(E, T), prev_emb(E, T), prefix_pool(E, T);
    std::vector<int> gold(static_cast<size_t>(T));
    {
        Eigen::Index t = 0;
        for (const auto& ex : batch) {
            VectorXd pool = mean_embedding(p.emb, ex.source);
            VectorXd running = VectorXd::Zero(E);  // sum of emb over target[0..i-1]
            for (size_t i = 0; i < ex.target.size(); ++i, ++t) {
                src_pool.col(t) = pool;
                int prev = i == 0 ? corpus::Vocabulary::kBos : ex.target[i - 1];
                prev_emb.col(t) = p.emb.row(prev).transpose();
                if (i >= 2)
                    prefix_pool.col(t) = running / static_cast<double>(i - 1);
                else
                    prefix_pool.col(t).setZero();
                if (i >= 1) running += p.emb.row(ex.target[i - 1]).transpose();
                gold[static_cast<size_t>(t)] = ex.target[i];
            }
        }
    }

    MatrixXd hidden =
        ((p.w_src * src_pool + p.w_prev * prev_emb + p.w_prefix * prefix_pool).colwise() + p.bias)
            .array()
            .tanh();
    MatrixXd logits = (p.out * hidden).colwise() + p.out_bias;  // V x T

    // column-wise log-softmax
    Eigen::RowVectorXd col_max = logits.colwise().maxCoeff();
    MatrixXd shifted = logits.rowwise() - col_max;
    Eigen::RowVectorXd lse = shifted.array().exp().colwise().sum().log();
    MatrixXd logprobs = shifted.rowwise() - lse;

    const double eps = label_smoothing;
    const double uniform_mass = eps / static_cast<double>(V);
    double loss = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
        loss -= (1.0 - eps) * logprobs(gold[static_cast<size_t>(t)], t);
        if (eps > 0.0) loss -= uniform_mass * logprobs.col(t).sum();
    }
    loss /= static_cast<double>(T);
    if (!std::isfinite(loss)) throw Error("loss_and_grads: non-finite loss");

    // dL/dlogits = (softmax - smoothed onehot) / T
    MatrixXd dlogits = logprobs.array().exp();
    dlogits.array() -= uniform_mass;
    for (Eigen::Index t = 0; t < T; ++t) dlogits(gold[static_cast<size_t>(t)], t) -= 1.0 - eps;
    dlogits /= static_cast<double>(T);

    LossResult result;
    result.loss = loss;
    auto& g = result.grads;
    g.out = dlogits * hidden.transpose();
    g.out_bias = dlogits.rowwise().sum();

    MatrixXd dhidden = p.out.transpose() * dlogits;
    MatrixXd dpre = dhidden.array() * (1.0 - hidden.array().square());
    g.bias = dpre.rowwise().sum();
    g.w_src = dpre * src_pool.transpose();
    g.w_prev = dpre * prev_emb.transpose();
    g.w_prefix = dpre * prefix_pool.transpose();

    MatrixXd dsrc = p.w_src.transpose() * dpre;        // E x T
    MatrixXd dprev = p.w_prev.transpose() * dpre;      // E x T
    MatrixXd dprefix = p.w_prefix.transpose() * dpre;  // E x T

    g.emb = MatrixXd::Zero(V, E);
    {
        Eigen::Index t = 0;
        for (const auto& ex : batch) {
            const Eigen::Index len = static_cast<Eigen::Index>(ex.target.size());
            // source mean: every source token splits each position's gradient
            VectorXd dsrc_sum = dsrc.middleCols(t, len).rowwise().sum();
            dsrc_sum /= static_cast<double>(ex.source.size());
            for (int id : ex.source) g.emb.row(id) += dsrc_sum.transpose();

            for (Eigen::Index i = 0; i < len; ++i) {
                int prev = i == 0 ? corpus::Vocabulary::kBos : ex.target[static_cast<size_t>(i - 1)];
                g.emb.row(prev) += dprev.col(t + i).transpose();
            }
            // prefix mean of position i covers target[0..i-2]: walk suffix sums
            VectorXd running = VectorXd::Zero(E);
            for (Eigen::Index j = len - 3; j >= 0; --j) {
                running += dprefix.col(t + j + 2) / static_cast<double>(j + 1);
                g.emb.row(ex.target[static_cast<size_t>(j)]) += running.transpose();
            }
            t += len;
        }
    }
    return result;
}

std::vector<double> train(ModelParams& params,
                          const std::vector<augment::TrainingExample>& examples,
                          const TrainConfig& config) {
    if (examples.empty()) throw Error("train: empty training set");
    if (config.learning_rate < 0.0) throw Error("train: negative learning rate");
    if (config.batch_size < 1) throw Error("train: batch size must be >= 1");

    auto zeros_like_f = [](const MatrixXf& m) { return MatrixXd::Zero(m.rows(), m.cols()); };

    // Adam state per tensor, kept in double between steps.
    MatrixXd m_emb = zeros_like_f(params.emb), v_emb = zeros_like_f(params.emb);
    MatrixXd m_src = zeros_like_f(params.w_src), v_src = zeros_like_f(params.w_src);
    MatrixXd m_prev = zeros_like_f(params.w_prev), v_prev = zeros_like_f(params.w_prev);
    MatrixXd m_prefix = zeros_like_f(params.w_prefix), v_prefix = zeros_like_f(params.w_prefix);
    MatrixXd m_out = zeros_like_f(params.out), v_out = zeros_like_f(params.out);
    VectorXd m_bias = VectorXd::Zero(params.bias.size()), v_bias = VectorXd::Zero(params.bias.size());
    VectorXd m_ob = VectorXd::Zero(params.out_bias.size()),
             v_ob = VectorXd::Zero(params.out_bias.size());

    long step = 0;
    auto adam_update = [&](MatrixXf& param, const MatrixXd& grad, MatrixXd& m, MatrixXd& v) {
        m = config.beta1 * m + (1.0 - config.beta1) * grad;
        v = config.beta2 * v + (1.0 - config.beta2) * grad.array().square().matrix();
        double mc = 1.0 - std::pow(config.beta1, static_cast<double>(step));
        double vc = 1.0 - std::pow(config.beta2, static_cast<double>(step));
        MatrixXd update = (m / mc).array() / ((v / vc).array().sqrt() + config.adam_eps);
        param = (param.cast<double>() - config.learning_rate * update).cast<float>();
    };
    auto adam_update_vec = [&](VectorXf& param, const VectorXd& grad, VectorXd& m, VectorXd& v) {
        m = config.beta1 * m + (1.0 - config.beta1) * grad;
        v = config.beta2 * v + (1.0 - config.beta2) * grad.array().square().matrix();
        double mc = 1.0 - std::pow(config.beta1, static_cast<double>(step));
        double vc = 1.0 - std::pow(config.beta2, static_cast<double>(step));
        VectorXd update = (m / mc).array() / ((v / vc).array().sqrt() + config.adam_eps);
        param = (param.cast<double>() - config.learning_rate * update).cast<float>();
    };

    std::vector<size_t> order(examples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<double> history;
    history.reserve(static_cast<size_t>(config.epochs));
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Rng rng(fnv1a("epoch:" + std::to_string(epoch), config.seed ^ 0xda3e39cb94b95bdbull));
        rng.shuffle(order);

        double epoch_loss = 0.0;
        size_t epoch_positions = 0;
        for (size_t begin = 0; begin < order.size(); begin += static_cast<size_t>(config.batch_size)) {
            size_t end = std::min(order.size(), begin + static_cast<size_t>(config.batch_size));
            std::vector<augment::TrainingExample> batch;
            batch.reserve(end - begin);
            size_t batch_positions = 0;
            for (size_t i = begin; i < end; ++i) {
                batch.push_back(examples[order[i]]);
                batch_positions += batch.back().target.size();
            }

            LossResult res = loss_and_grads(params, batch, config.label_smoothing);
            if (!std::isfinite(res.loss))
                throw Error("train: diverged at step " + std::to_string(step));
            ++step;
            adam_update(params.emb, res.grads.emb, m_emb, v_emb);
            adam_update(params.w_src, res.grads.w_src, m_src, v_src);
            adam_update(params.w_prev, res.grads.w_prev, m_prev, v_prev);
            adam_update(params.w_prefix, res.grads.w_prefix, m_prefix, v_prefix);
            adam_update(params.out, res.grads.out, m_out, v_out);
            adam_update_vec(params.bias, res.grads.bias, m_bias, v_bias);
            adam_update_vec(params.out_bias, res.grads.out_bias, m_ob, v_ob);

            epoch_loss += res.loss * static_cast<double>(batch_positions);
            epoch_positions += batch_positions;
        }
        history.push_back(epoch_loss / static_cast<double>(epoch_positions));
    }
    return history;
}

void save_checkpoint(const ModelParams& params, const std::string& path, uint64_t seed,
                     const std::string& config_digest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write checkpoint: " + path);
    out << "sedsi-ckpt v1 V=" << params.vocab_size << " E=" << params.embed_dim
        << " H=" << params.hidden_dim << " seed=" << seed
        << " config=" << (config_digest.empty() ? "-" : config_digest) << "\n";
    auto write_mat = [&](const MatrixXf& m) {
        out.write(reinterpret_cast<const char*>(m.data()),
                  static_cast<std::streamsize>(sizeof(float) * static_cast<size_t>(m.size())));
    };
    write_mat(params.emb);
    write_mat(params.w_src);
    write_mat(params.w_prev);
    write_mat(params.w_prefix);
    out.write(reinterpret_cast<const char*>(params.bias.data()),
              static_cast<std::streamsize>(sizeof(float) * static_cast<size_t>(params.bias.size())));
    write_mat(params.out);
    out.write(reinterpret_cast<const char*>(params.out_bias.data()),
              static_cast<std::streamsize>(sizeof(float) *
                                           static_cast<size_t>(params.out_bias.size())));
    if (!out) throw Error("checkpoint write failed: " + path);
}

ModelParams load_checkpoint(const std::string& path, int expected_vocab) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint: " + path);
    std::string manifest;
    if (!std::getline(in, manifest) || manifest.rfind("sedsi-ckpt v1 ", 0) != 0)
        throw Error("corrupt checkpoint (bad manifest): " + path);

    auto field = [&](const std::string& key) {
        std::string marker = " " + key + "=";
        size_t at = manifest.find(marker);
        if (at == std::string::npos)
            throw Error("corrupt checkpoint (missing " + key + "): " + path);
        size_t begin = at + marker.size();
        size_t end = manifest.find(' ', begin);
        return manifest.substr(begin, end == std::string::npos ? end : end - begin);
    };
    int V = std::stoi(field("V"));
    int E = std::stoi(field("E"));
    int H = std::stoi(field("H"));
    if (V < 1 || E < 1 || H < 1) throw Error("corrupt checkpoint (bad dims): " + path);
    if (expected_vocab >= 0 && V != expected_vocab)
        throw Error("checkpoint vocabulary mismatch: expected V=" + std::to_string(expected_vocab) +
                    ", found V=" + std::to_string(V));

    ModelParams p;
    p.vocab_size = V;
    p.embed_dim = E;
    p.hidden_dim = H;
    p.emb.resize(V, E);
    p.w_src.resize(H, E);
    p.w_prev.resize(H, E);
    p.w_prefix.resize(H, E);
    p.bias.resize(H);
    p.out.resize(V, H);
    p.out_bias.resize(V);

    auto read_block = [&](float* data, size_t count) {
        in.read(reinterpret_cast<char*>(data),
                static_cast<std::streamsize>(sizeof(float) * count));
        if (static_cast<size_t>(in.gcount()) != sizeof(float) * count)
            throw Error("corrupt checkpoint (truncated): " + path);
    };
    read_block(p.emb.data(), static_cast<size_t>(p.emb.size()));
    read_block(p.w_src.data(), static_cast<size_t>(p.w_src.size()));
    read_block(p.w_prev.data(), static_cast<size_t>(p.w_prev.size()));
    read_block(p.w_prefix.data(), static_cast<size_t>(p.w_prefix.size()));
    read_block(p.bias.data(), static_cast<size_t>(p.bias.size()));
    read_block(p.out.data(), static_cast<size_t>(p.out.size()));
    read_block(p.out_bias.data(), static_cast<size_t>(p.out_bias.size()));
    if (in.peek() != std::char_traits<char>::eof())
        throw Error("corrupt checkpoint (trailing bytes): " + path);
    return p;
}

NeuralScorer::NeuralScorer(const ModelParams& params)
    : vocab_size_(params.vocab_size),
      emb_(params.emb.cast<double>()),
      w_src_(params.w_src.cast<double>()),
      w_prev_(params.w_prev.cast<double>()),
      w_prefix_(params.w_prefix.cast<double>()),
      out_(params.out.cast<double>()),
      bias_(params.bias.cast<double>()),
      out_bias_(params.out_bias.cast<double>()) {}

Eigen::VectorXd NeuralScorer::next_token_logprobs(std::span<const int> source,
                                                  std::span<const int> prefix) const {
    if (source.empty()) throw Error("next_token_logprobs: empty source");
    bool same = has_cache_ && cached_source_.size() == source.size() &&
                std::equal(source.begin(), source.end(), cached_source_.begin());
    if (!same) {
        cached_pool_ = mean_embedding(emb_, source);
        cached_source_.assign(source.begin(), source.end());
        has_cache_ = true;
    }

    int prev = prefix.empty() ? corpus::Vocabulary::kBos : prefix.back();
    VectorXd prev_emb = emb_.row(prev).transpose();
    VectorXd prefix_pool = prefix.size() >= 2
                               ? mean_embedding(emb_, prefix.subspan(0, prefix.size() - 1))
                               : VectorXd::Zero(emb_.cols());
    VectorXd hidden =
        (w_src_ * cached_pool_ + w_prev_ * prev_emb + w_prefix_ * prefix_pool + bias_)
            .array()
            .tanh();
    return log_softmax(out_ * hidden + out_bias_);
}

}  // namespace sedsi::model
