#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "emofuse/core.hpp"

namespace emofuse {

struct MetricTriple {
  double kld = 0.0;
  double rmse = 0.0;
  double f1 = 0.0;
};

// Per-method evaluation summary: overall plus a per-outcome breakdown.
// Outcomes with no clips are omitted rather than reported as zero.
struct MetricReport {
  MetricTriple overall;
  std::map<GameOutcome, MetricTriple> by_outcome;
  std::size_t n_items = 0;
  std::map<GameOutcome, std::size_t> n_by_outcome;
};

// Rows are true labels, columns predicted labels, canonical emotion order.
class ConfusionMatrix {
 public:
  std::uint64_t at(Emotion truth, Emotion pred) const {
    return counts_[index(truth)][index(pred)];
  }
  void add(Emotion truth, Emotion pred) { ++counts_[index(truth)][index(pred)]; }
  std::uint64_t total() const;

 private:
  static std::size_t index(Emotion e) { return static_cast<std::size_t>(e); }
  std::array<std::array<std::uint64_t, kEmotionCount>, kEmotionCount> counts_{};
};

// KL(truth || pred) in nats, 0*ln(0) = 0. pred must already be strictly
// positive wherever truth has mass; the evaluation pipeline guarantees that
// by smoothing predictions first.
double kld(const EmotionDistribution& truth, const EmotionDistribution& pred);

// sqrt of the mean squared componentwise difference; symmetric.
double rmse(const EmotionDistribution& a, const EmotionDistribution& b);

// Per-class F1 averaged with weights proportional to true-class support.
// Classes without true instances carry weight zero.
double f1_weighted(std::span<const Emotion> truths, std::span<const Emotion> preds);

ConfusionMatrix confusion(std::span<const Emotion> truths,
                          std::span<const Emotion> preds);

enum class KldDirection { TruthGivenPred, PredGivenTruth };
enum class LogBase { Nats, Bits };

struct EvalOptions {
  double pred_epsilon = 1e-6;  // smoothing applied to predictions before KLD
  KldDirection direction = KldDirection::TruthGivenPred;
  LogBase base = LogBase::Nats;
};

struct EvalResult {
  MetricReport report;
  ConfusionMatrix confusion;
};

struct EvalPair {
  GameOutcome outcome;
  EmotionDistribution truth;
  EmotionDistribution pred;
};

// Scores a prediction source against a truth source clip by clip. Per-clip
// values are computed in parallel; every aggregate uses a fixed-order
// pairwise reduction, so reports are identical across thread counts.
EvalResult evaluate(const Corpus& corpus, const SourceId& truth_source,
                    const SourceId& pred_source, const EvalOptions& options = {});

EvalResult evaluate_pairs(std::span<const EvalPair> pairs,
                          const EvalOptions& options = {});

struct ImprovementDelta {
  double delta_kld = 0.0;
  double delta_rmse = 0.0;
};

// face_only minus fused, per outcome; positive means integration helped.
std::map<GameOutcome, ImprovementDelta> improvement_delta(
    const MetricReport& report_face_only, const MetricReport& report_fused);

// Renderings: CSV carries full precision for downstream tooling, Markdown
// mirrors the aligned per-context table layout.
std::string report_to_csv(const MetricReport& report);
std::string report_to_markdown(const MetricReport& report, std::string_view label);
std::string confusion_to_csv(const ConfusionMatrix& cm);
std::string confusion_to_markdown(const ConfusionMatrix& cm);

// Full-precision decimal rendering (shortest round-trip form).
std::string format_double(double value);

}  // namespace emofuse
