#include "emofuse/nni.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "emofuse/rng.hpp"
#include "emofuse/sum.hpp"

namespace emofuse::nni {
namespace {

// Hidden pre-activations, activations and output log-probabilities for one
// row. Shared by the single-sample op and the batch kernels.
void forward_row(const MlpParams& params, const double* x, double* h_pre,
                 double* h, double* logp, double* y) {
  for (std::size_t j = 0; j < kHiddenDim; ++j) {
    double acc = params.b1[j];
    for (std::size_t i = 0; i < kInputDim; ++i) {
      acc += x[i] * params.w1[i * kHiddenDim + j];
    }
    h_pre[j] = acc;
    h[j] = acc > 0.0 ? acc : 0.0;
  }
  double logits[kOutputDim];
  for (std::size_t k = 0; k < kOutputDim; ++k) {
    double acc = params.b2[k];
    for (std::size_t j = 0; j < kHiddenDim; ++j) {
      acc += h[j] * params.w2[j * kOutputDim + k];
    }
    logits[k] = acc;
  }
  const double peak = *std::max_element(logits, logits + kOutputDim);
  double sum_exp = 0.0;
  for (std::size_t k = 0; k < kOutputDim; ++k) sum_exp += std::exp(logits[k] - peak);
  const double lse = peak + std::log(sum_exp);
  for (std::size_t k = 0; k < kOutputDim; ++k) {
    logp[k] = logits[k] - lse;
    y[k] = std::exp(logp[k]);
  }
}

double row_kl(const double* target, const double* logp) {
  double loss = 0.0;
  for (std::size_t k = 0; k < kOutputDim; ++k) {
    const double t = target[k];
    if (t > 0.0) loss += t * (std::log(t) - logp[k]);
  }
  return loss;
}

struct BatchWorkspace {
  std::vector<double> h_pre, h, logp, y, dlogits, dpre;
  std::vector<double> row_loss;

  explicit BatchWorkspace(std::size_t n)
      : h_pre(n * kHiddenDim),
        h(n * kHiddenDim),
        logp(n * kOutputDim),
        y(n * kOutputDim),
        dlogits(n * kOutputDim),
        dpre(n * kHiddenDim),
        row_loss(n) {}
};

double batch_forward(const MlpParams& params, const Batch& batch,
                     BatchWorkspace& ws) {
  const auto n = static_cast<std::ptrdiff_t>(batch.n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto row = static_cast<std::size_t>(r);
    forward_row(params, &batch.inputs[row * kInputDim],
                &ws.h_pre[row * kHiddenDim], &ws.h[row * kHiddenDim],
                &ws.logp[row * kOutputDim], &ws.y[row * kOutputDim]);
    ws.row_loss[row] = row_kl(&batch.targets[row * kOutputDim],
                              &ws.logp[row * kOutputDim]);
  }
  return pairwise_mean(ws.row_loss);
}

std::vector<std::vector<std::size_t>> fold_partition(std::size_t n,
                                                     const TrainConfig& config,
                                                     const Dataset& dataset) {
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  Rng rng(derive_seed(config.seed, "cv-shuffle"));

  std::vector<std::vector<std::size_t>> folds(config.folds);
  if (config.stratified) {
    std::array<std::vector<std::size_t>, 4> groups;
    for (std::size_t i = 0; i < n; ++i) {
      groups[static_cast<std::size_t>(dataset[i].outcome)].push_back(i);
    }
    std::size_t dealt = 0;
    for (auto& group : groups) {
      rng.shuffle(std::span<std::size_t>(group));
      for (const std::size_t idx : group) {
        folds[dealt % config.folds].push_back(idx);
        ++dealt;
      }
    }
  } else {
    rng.shuffle(std::span<std::size_t>(indices));
    const std::size_t base = n / config.folds;
    const std::size_t extra = n % config.folds;
    std::size_t cursor = 0;
    for (std::size_t f = 0; f < config.folds; ++f) {
      const std::size_t size = base + (f < extra ? 1 : 0);
      folds[f].assign(indices.begin() + static_cast<std::ptrdiff_t>(cursor),
                      indices.begin() + static_cast<std::ptrdiff_t>(cursor + size));
      cursor += size;
    }
  }
  return folds;
}

void adam_step(std::span<double> param, std::span<const double> grad,
               std::span<double> m, std::span<double> v, double lr_t,
               const TrainConfig& config) {
  const auto n = static_cast<std::ptrdiff_t>(param.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double g = grad[static_cast<std::size_t>(i)];
    double& mi = m[static_cast<std::size_t>(i)];
    double& vi = v[static_cast<std::size_t>(i)];
    mi = config.adam_beta1 * mi + (1.0 - config.adam_beta1) * g;
    vi = config.adam_beta2 * vi + (1.0 - config.adam_beta2) * g * g;
    param[static_cast<std::size_t>(i)] -=
        lr_t * mi / (std::sqrt(vi) + config.adam_eps);
  }
}

}  // namespace

MlpParams MlpParams::zeros() {
  MlpParams p;
  p.w1.assign(kInputDim * kHiddenDim, 0.0);
  p.b1.assign(kHiddenDim, 0.0);
  p.w2.assign(kHiddenDim * kOutputDim, 0.0);
  p.b2.assign(kOutputDim, 0.0);
  return p;
}

MlpParams MlpParams::init(std::uint64_t seed) {
  MlpParams p = zeros();
  Rng rng(seed);
  const double hidden_limit = std::sqrt(6.0 / static_cast<double>(kInputDim));
  for (double& w : p.w1) w = rng.uniform(-hidden_limit, hidden_limit);
  const double out_limit =
      std::sqrt(6.0 / static_cast<double>(kHiddenDim + kOutputDim));
  for (double& w : p.w2) w = rng.uniform(-out_limit, out_limit);
  return p;
}

void TrainConfig::validate() const {
  if (epochs < 1) raise(Errc::InvalidConfig, "epochs must be >= 1");
  if (folds < 2) raise(Errc::InvalidConfig, "folds must be >= 2");
  if (!(learning_rate > 0.0)) raise(Errc::InvalidConfig, "learning_rate must be > 0");
}

Dataset dataset_from_corpus(const Corpus& corpus, const SourceId& face_source,
                            const SourceId& context_source,
                            const SourceId& target_source) {
  Dataset rows;
  rows.reserve(corpus.size());
  for (const ClipRecord& clip : corpus) {
    rows.push_back(TrainRow{clip.at(face_source), clip.at(context_source),
                            clip.at(target_source), clip.outcome});
  }
  return rows;
}

Batch Batch::from(std::span<const TrainRow> rows) {
  Batch batch;
  batch.n = rows.size();
  batch.inputs.resize(batch.n * kInputDim);
  batch.targets.resize(batch.n * kOutputDim);
  for (std::size_t r = 0; r < batch.n; ++r) {
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
      batch.inputs[r * kInputDim + i] = rows[r].face.at(i);
      batch.inputs[r * kInputDim + kEmotionCount + i] = rows[r].context.at(i);
    }
    for (std::size_t k = 0; k < kOutputDim; ++k) {
      batch.targets[r * kOutputDim + k] = rows[r].target.at(k);
    }
  }
  return batch;
}

EmotionDistribution forward(const MlpParams& params,
                            const EmotionDistribution& face,
                            const EmotionDistribution& context) {
  double x[kInputDim];
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    x[i] = face.at(i);
    x[kEmotionCount + i] = context.at(i);
  }
  std::vector<double> h_pre(kHiddenDim), h(kHiddenDim);
  double logp[kOutputDim];
  std::array<double, kOutputDim> y{};
  forward_row(params, x, h_pre.data(), h.data(), logp, y.data());
  for (const double v : y) {
    if (!std::isfinite(v)) {
      raise(Errc::NonFiniteActivation, "forward pass produced a non-finite value");
    }
  }
  return EmotionDistribution::make(y);
}

double kl_loss(const EmotionDistribution& target,
               const EmotionDistribution& output) {
  return kld(target, output);
}

double batch_loss(const MlpParams& params, const Batch& batch) {
  BatchWorkspace ws(batch.n);
  return batch_forward(params, batch, ws);
}

double batch_loss_grad(const MlpParams& params, const Batch& batch,
                       MlpParams& grad) {
  BatchWorkspace ws(batch.n);
  const double loss = batch_forward(params, batch, ws);
  const auto n = static_cast<std::ptrdiff_t>(batch.n);
  const double inv_n = 1.0 / static_cast<double>(batch.n);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto row = static_cast<std::size_t>(r);
    // d(mean KL)/d(logit) = (softmax - target) / n
    for (std::size_t k = 0; k < kOutputDim; ++k) {
      ws.dlogits[row * kOutputDim + k] =
          (ws.y[row * kOutputDim + k] - batch.targets[row * kOutputDim + k]) *
          inv_n;
    }
    for (std::size_t j = 0; j < kHiddenDim; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < kOutputDim; ++k) {
        acc += ws.dlogits[row * kOutputDim + k] * params.w2[j * kOutputDim + k];
      }
      ws.dpre[row * kHiddenDim + j] =
          ws.h_pre[row * kHiddenDim + j] > 0.0 ? acc : 0.0;
    }
  }

  // Every weight gradient accumulates its rows in index order regardless of
  // the thread that owns the cell.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(kHiddenDim); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    for (std::size_t k = 0; k < kOutputDim; ++k) {
      double acc = 0.0;
      for (std::size_t row = 0; row < batch.n; ++row) {
        acc += ws.h[row * kHiddenDim + jj] * ws.dlogits[row * kOutputDim + k];
      }
      grad.w2[jj * kOutputDim + k] = acc;
    }
  }
  for (std::size_t k = 0; k < kOutputDim; ++k) {
    double acc = 0.0;
    for (std::size_t row = 0; row < batch.n; ++row) {
      acc += ws.dlogits[row * kOutputDim + k];
    }
    grad.b2[k] = acc;
  }

#pragma omp parallel for schedule(static) collapse(2)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(kInputDim); ++i) {
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(kHiddenDim); ++j) {
      const auto ii = static_cast<std::size_t>(i);
      const auto jj = static_cast<std::size_t>(j);
      double acc = 0.0;
      for (std::size_t row = 0; row < batch.n; ++row) {
        acc += batch.inputs[row * kInputDim + ii] * ws.dpre[row * kHiddenDim + jj];
      }
      grad.w1[ii * kHiddenDim + jj] = acc;
    }
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(kHiddenDim); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    double acc = 0.0;
    for (std::size_t row = 0; row < batch.n; ++row) {
      acc += ws.dpre[row * kHiddenDim + jj];
    }
    grad.b1[jj] = acc;
  }
  return loss;
}

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) raise(Errc::EmptyDataset, "training needs at least one row");

  const Batch batch = Batch::from(dataset);
  TrainResult result;
  result.params = MlpParams::init(config.seed);
  result.loss_history.reserve(config.epochs);

  MlpParams grad = MlpParams::zeros();
  MlpParams m = MlpParams::zeros();
  MlpParams v = MlpParams::zeros();

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double loss = batch_loss_grad(result.params, batch, grad);
    if (!std::isfinite(loss)) {
      raise(Errc::DivergedTraining,
            "non-finite loss at epoch " + std::to_string(epoch));
    }
    result.loss_history.push_back(loss);

    const auto t = static_cast<double>(epoch + 1);
    const double lr_t = config.learning_rate *
                        std::sqrt(1.0 - std::pow(config.adam_beta2, t)) /
                        (1.0 - std::pow(config.adam_beta1, t));
    adam_step(result.params.w1, grad.w1, m.w1, v.w1, lr_t, config);
    adam_step(result.params.b1, grad.b1, m.b1, v.b1, lr_t, config);
    adam_step(result.params.w2, grad.w2, m.w2, v.w2, lr_t, config);
    adam_step(result.params.b2, grad.b2, m.b2, v.b2, lr_t, config);
  }
  return result;
}

std::vector<FoldReport> cross_validate(const Dataset& dataset,
                                       const TrainConfig& config,
                                       const EvalOptions& options) {
  config.validate();
  if (dataset.size() < config.folds) {
    raise(Errc::DatasetTooSmall, std::to_string(dataset.size()) + " rows for " +
                                     std::to_string(config.folds) + " folds");
  }
  const auto folds = fold_partition(dataset.size(), config, dataset);

  std::vector<FoldReport> reports;
  reports.reserve(config.folds);
  for (std::size_t f = 0; f < config.folds; ++f) {
    std::vector<bool> held_out(dataset.size(), false);
    for (const std::size_t idx : folds[f]) held_out[idx] = true;

    Dataset train_rows;
    train_rows.reserve(dataset.size() - folds[f].size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (!held_out[i]) train_rows.push_back(dataset[i]);
    }

    TrainConfig fold_config = config;
    fold_config.seed = derive_seed(config.seed, "nni-fold-" + std::to_string(f));
    const TrainResult trained = train(train_rows, fold_config);

    std::vector<EvalPair> pairs;
    pairs.reserve(folds[f].size());
    for (const std::size_t idx : folds[f]) {
      const TrainRow& row = dataset[idx];
      pairs.push_back(EvalPair{row.outcome, row.target,
                               forward(trained.params, row.face, row.context)});
    }
    reports.push_back(FoldReport{f, evaluate_pairs(pairs, options).report});
  }
  return reports;
}

void save_params(const MlpParams& params, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["format"] = "emofuse-mlp";
  doc["version"] = 1;
  doc["input_dim"] = kInputDim;
  doc["hidden_dim"] = kHiddenDim;
  doc["output_dim"] = kOutputDim;
  doc["w1"] = params.w1;
  doc["b1"] = params.b1;
  doc["w2"] = params.w2;
  doc["b2"] = params.b2;
  std::ofstream out(path);
  if (!out) raise(Errc::IoError, "cannot write " + path.string());
  out << doc.dump() << '\n';
}

MlpParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoError, "cannot read " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& ex) {
    raise(Errc::InvalidConfig, "bad params file: " + std::string(ex.what()));
  }
  if (doc.value("format", "") != "emofuse-mlp" || doc.value("version", 0) != 1) {
    raise(Errc::InvalidConfig, "unrecognized params container");
  }
  if (doc.value("input_dim", 0) != static_cast<int>(kInputDim) ||
      doc.value("hidden_dim", 0) != static_cast<int>(kHiddenDim) ||
      doc.value("output_dim", 0) != static_cast<int>(kOutputDim)) {
    raise(Errc::InvalidConfig, "params shape mismatch");
  }
  MlpParams params;
  params.w1 = doc.at("w1").get<std::vector<double>>();
  params.b1 = doc.at("b1").get<std::vector<double>>();
  params.w2 = doc.at("w2").get<std::vector<double>>();
  params.b2 = doc.at("b2").get<std::vector<double>>();
  if (params.w1.size() != kInputDim * kHiddenDim ||
      params.b1.size() != kHiddenDim ||
      params.w2.size() != kHiddenDim * kOutputDim ||
      params.b2.size() != kOutputDim) {
    raise(Errc::InvalidConfig, "params array length mismatch");
  }
  return params;
}

}  // namespace emofuse::nni
