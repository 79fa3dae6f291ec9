#include "emofuse/fusion.hpp"

#include <cmath>

namespace emofuse {

Prior Prior::uniform() {
  return Prior(PriorKind::Uniform, EmotionDistribution::uniform());
}

Prior Prior::empirical(const EmotionDistribution& dist) {
  return Prior(PriorKind::Empirical, dist.smoothed(kCueEpsilon));
}

Prior empirical_prior_from(const Corpus& corpus, const SourceId& truth_source) {
  if (corpus.empty()) raise(Errc::EmptyCorpus, "empirical prior needs clips");
  std::array<double, kEmotionCount> mean{};
  for (const ClipRecord& clip : corpus) {
    const auto& dist = clip.at(truth_source);
    for (std::size_t i = 0; i < kEmotionCount; ++i) mean[i] += dist.at(i);
  }
  for (double& v : mean) v /= static_cast<double>(corpus.size());
  return Prior::empirical(EmotionDistribution::make(mean));
}

EmotionDistribution bci_fuse(const EmotionDistribution& face,
                             const EmotionDistribution& context,
                             const Prior& prior, double epsilon) {
  const EmotionDistribution f = face.smoothed(epsilon);
  const EmotionDistribution c = context.smoothed(epsilon);
  std::array<double, kEmotionCount> product{};
  double sum = 0.0;
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    product[i] = f.at(i) * c.at(i) / prior.dist().at(i);
    sum += product[i];
  }
  // Smoothed cues are strictly positive, so a zero product signals a broken
  // prior or numeric underflow rather than a legitimate input.
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    raise(Errc::DegenerateProduct, "cue product sums to " + std::to_string(sum));
  }
  for (double& v : product) v /= sum;
  return EmotionDistribution::make(product);
}

SourceId fused_bci_id(const SourceId& face_source, const SourceId& context_source) {
  return SourceId(SourceKind::FusedBCI,
                  face_source.str() + "+" + context_source.str());
}

Corpus fuse_corpus(const Corpus& corpus, const SourceId& face_source,
                   const SourceId& context_source, const Prior& prior,
                   double epsilon) {
  if (!is_face_cue(face_source.kind)) {
    raise(Errc::InvalidSourceRole, face_source.str() + " cannot supply a face cue");
  }
  if (!is_context_cue(context_source.kind)) {
    raise(Errc::InvalidSourceRole,
          context_source.str() + " cannot supply a context cue");
  }
  for (const ClipRecord& clip : corpus) {
    clip.at(face_source);  // throws MissingSource with the clip id
    clip.at(context_source);
  }

  Corpus fused = corpus;
  const SourceId out_id = fused_bci_id(face_source, context_source);
  const auto n = static_cast<std::ptrdiff_t>(fused.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    ClipRecord& clip = fused[static_cast<std::size_t>(i)];
    clip.distributions.insert_or_assign(
        out_id,
        bci_fuse(clip.at(face_source), clip.at(context_source), prior, epsilon));
  }
  return fused;
}

}  // namespace emofuse
