#pragma once

#include "emofuse/core.hpp"

namespace emofuse {

inline constexpr double kCueEpsilon = 1e-6;  // mandatory pre-fusion smoothing

enum class PriorKind { Uniform, Empirical };

// P(e), the prior a Bayesian integration divides by. Uniform is the default
// throughout; empirical priors are smoothed so the division is always defined.
class Prior {
 public:
  static Prior uniform();
  static Prior empirical(const EmotionDistribution& dist);

  PriorKind kind() const { return kind_; }
  const EmotionDistribution& dist() const { return dist_; }

 private:
  Prior(PriorKind kind, EmotionDistribution dist)
      : kind_(kind), dist_(std::move(dist)) {}
  PriorKind kind_;
  EmotionDistribution dist_;
};

// Corpus-wide mean of a ground-truth source, smoothed. Offered for runs that
// want an empirical P(e).
Prior empirical_prior_from(const Corpus& corpus, const SourceId& truth_source);

// Bayesian cue integration: result_i proportional to face_i * context_i / prior_i.
// Both cues are smoothed with `epsilon` first so a hard zero in one cue cannot
// veto an emotion the other supports.
EmotionDistribution bci_fuse(const EmotionDistribution& face,
                             const EmotionDistribution& context,
                             const Prior& prior, double epsilon = kCueEpsilon);

// Applies bci_fuse per clip, adding a FusedBCI distribution whose detail is
// "<face>+<context>". Inputs are untouched; clips are processed in parallel
// and returned in the input order.
Corpus fuse_corpus(const Corpus& corpus, const SourceId& face_source,
                   const SourceId& context_source, const Prior& prior,
                   double epsilon = kCueEpsilon);

// Fused-source identity assigned by fuse_corpus for a cue pair.
SourceId fused_bci_id(const SourceId& face_source, const SourceId& context_source);

}  // namespace emofuse
