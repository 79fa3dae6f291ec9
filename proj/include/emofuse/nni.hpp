#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "emofuse/core.hpp"
#include "emofuse/metrics.hpp"

namespace emofuse::nni {

// Architecture is fixed: [face; context] -> 100 ReLU -> softmax over 7.
inline constexpr std::size_t kInputDim = 2 * kEmotionCount;
inline constexpr std::size_t kHiddenDim = 100;
inline constexpr std::size_t kOutputDim = kEmotionCount;

// Dense parameters, row-major. Also used as the gradient container.
struct MlpParams {
  std::vector<double> w1;  // kInputDim x kHiddenDim
  std::vector<double> b1;  // kHiddenDim
  std::vector<double> w2;  // kHiddenDim x kOutputDim
  std::vector<double> b2;  // kOutputDim

  static MlpParams zeros();
  // He-style bounds on the ReLU layer, Xavier-style on the output layer,
  // zero biases.
  static MlpParams init(std::uint64_t seed);

  std::size_t count() const {
    return w1.size() + b1.size() + w2.size() + b2.size();
  }
};

struct TrainConfig {
  std::size_t epochs = 1000;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  bool stratified = false;  // stratify fold assignment by outcome

  void validate() const;  // epochs >= 1, folds >= 2, learning_rate > 0
};

struct TrainRow {
  EmotionDistribution face;
  EmotionDistribution context;
  EmotionDistribution target;
  GameOutcome outcome;
};

using Dataset = std::vector<TrainRow>;

// Rows in corpus order; every clip must carry all three sources.
Dataset dataset_from_corpus(const Corpus& corpus, const SourceId& face_source,
                            const SourceId& context_source,
                            const SourceId& target_source);

// relu(x*w1 + b1) -> softmax(h*w2 + b2). Throws NonFiniteActivation if the
// parameters have exploded.
EmotionDistribution forward(const MlpParams& params,
                            const EmotionDistribution& face,
                            const EmotionDistribution& context);

// KL(target || output) in nats; output must be strictly positive, which the
// softmax guarantees.
double kl_loss(const EmotionDistribution& target, const EmotionDistribution& output);

// Inputs and targets flattened for the batch kernels.
struct Batch {
  std::vector<double> inputs;   // n x kInputDim
  std::vector<double> targets;  // n x kOutputDim
  std::size_t n = 0;

  static Batch from(std::span<const TrainRow> rows);
};

// Mean KL loss over the batch. Row-parallel with a fixed-order reduction.
double batch_loss(const MlpParams& params, const Batch& batch);

// Mean KL loss plus gradients for every parameter. Each gradient cell
// accumulates its rows in index order, so the result does not depend on the
// thread count.
double batch_loss_grad(const MlpParams& params, const Batch& batch,
                       MlpParams& grad);

struct TrainResult {
  MlpParams params;
  std::vector<double> loss_history;  // mean loss at the start of each epoch
};

// Full-batch Adam for config.epochs steps. Deterministic: identical dataset
// and seed give bit-identical parameters.
TrainResult train(const Dataset& dataset, const TrainConfig& config);

struct FoldReport {
  std::size_t fold_index = 0;
  MetricReport report;
};

// Seeded shuffle, contiguous folds, train on the remainder, score the
// held-out fold. Per-fold training seeds are derived from config.seed.
std::vector<FoldReport> cross_validate(const Dataset& dataset,
                                       const TrainConfig& config,
                                       const EvalOptions& options = {});

// Versioned JSON container: shape header plus row-major values.
void save_params(const MlpParams& params, const std::filesystem::path& path);
MlpParams load_params(const std::filesystem::path& path);

}  // namespace emofuse::nni
