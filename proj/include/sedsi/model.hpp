#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sedsi/augment.hpp"

namespace sedsi::model {

/// Trainable scorer parameters. Values are kept float32-representable so a
/// checkpoint round trip is bit-exact; all arithmetic runs in double.
struct ModelParams {
    int vocab_size = 0;   // V
    int embed_dim = 0;    // E
    int hidden_dim = 0;   // H
    Eigen::MatrixXf emb;        // V x E token embeddings
    Eigen::MatrixXf w_src;      // H x E, source mean pathway
    Eigen::MatrixXf w_prev;     // H x E, previous-token pathway
    Eigen::MatrixXf w_prefix;   // H x E, prefix-mean pathway
    Eigen::VectorXf bias;       // H
    Eigen::MatrixXf out;        // V x H output projection
    Eigen::VectorXf out_bias;   // V
};

ModelParams init_params(int vocab_size, int embed_dim, int hidden_dim, uint64_t seed);

struct Gradients {
    Eigen::MatrixXd emb, w_src, w_prev, w_prefix, out;
    Eigen::VectorXd bias, out_bias;
};

/// Next-token log-probabilities over the vocabulary:
///   c = mean emb of source tokens
///   a = emb of the previous target token (BOS when the prefix is empty)
///   p = mean emb of the prefix excluding its last token (zero when none)
///   h = tanh(w_src c + w_prev a + w_prefix p + bias)
///   result = log_softmax(out h + out_bias)
Eigen::VectorXd forward_logprobs(const ModelParams& params, std::span<const int> source,
                                 std::span<const int> target_prefix);

struct LossResult {
    double loss = 0.0;
    Gradients grads;
};

/// Label-smoothed cross entropy averaged over every target position in the
/// batch, with exact analytic gradients.
LossResult loss_and_grads(const ModelParams& params,
                          const std::vector<augment::TrainingExample>& batch,
                          double label_smoothing);

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 1;
    int batch_size = 32;
    uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    double label_smoothing = 0.1;
};

/// Adam over shuffled minibatches; fully deterministic for a fixed seed.
/// Returns the per-epoch mean loss history. Throws on a non-finite loss.
std::vector<double> train(ModelParams& params,
                          const std::vector<augment::TrainingExample>& examples,
                          const TrainConfig& config);

/// Checkpoint layout: one text manifest line
///   sedsi-ckpt v1 V=<V> E=<E> H=<H> seed=<seed> config=<digest>
/// followed by the raw little-endian float32 arrays in fixed order
/// (emb, w_src, w_prev, w_prefix, bias, out, out_bias).
void save_checkpoint(const ModelParams& params, const std::string& path, uint64_t seed,
                     const std::string& config_digest = "");

/// expected_vocab >= 0 enforces a vocabulary-size match. Truncated or
/// oversized files are rejected.
ModelParams load_checkpoint(const std::string& path, int expected_vocab = -1);

/// Scoring contract consumed by decoding: a length-V vector of log
/// probabilities that sums to one in probability space.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual Eigen::VectorXd next_token_logprobs(std::span<const int> source,
                                                std::span<const int> prefix) const = 0;
    virtual int vocab_size() const = 0;
};

/// Scorer view over trained parameters. Caches the double-precision copy of
/// the parameters and the pooled encoding of the most recent source.
class NeuralScorer final : public Scorer {
public:
    explicit NeuralScorer(const ModelParams& params);
    Eigen::VectorXd next_token_logprobs(std::span<const int> source,
                                        std::span<const int> prefix) const override;
    int vocab_size() const override { return vocab_size_; }

private:
    int vocab_size_;
    Eigen::MatrixXd emb_, w_src_, w_prev_, w_prefix_, out_;
    Eigen::VectorXd bias_, out_bias_;
    mutable std::vector<int> cached_source_;
    mutable Eigen::VectorXd cached_pool_;
    mutable bool has_cache_ = false;
};

}  // namespace sedsi::model
