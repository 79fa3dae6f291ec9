#include "emofuse/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>

namespace emofuse {
namespace {

constexpr std::array<std::string_view, kEmotionCount> kNames = {
    "joy", "neutral", "surprise", "anger", "disgust", "fear", "sadness"};
constexpr std::array<std::string_view, kEmotionCount> kDisplay = {
    "Joy", "Neutral", "Surprise", "Anger", "Disgust", "Fear", "Sadness"};
constexpr std::array<std::string_view, 4> kOutcomeCodes = {"CC", "DC", "CD", "DD"};
constexpr std::array<std::string_view, 10> kSourceCodes = {
    "facet",    "eac",      "lstm",       "human_cf",   "human_cb",
    "gpt3_ctx", "gpt4_ctx", "fused_bci",  "fused_gpt4", "fused_nni"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NegativeComponent: return "NegativeComponent";
    case Errc::SumOutOfRange: return "SumOutOfRange";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case Errc::DegenerateProduct: return "DegenerateProduct";
    case Errc::MissingSource: return "MissingSource";
    case Errc::InvalidSourceRole: return "InvalidSourceRole";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::OutcomeSetMismatch: return "OutcomeSetMismatch";
    case Errc::NonFiniteActivation: return "NonFiniteActivation";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::DivergedTraining: return "DivergedTraining";
    case Errc::DatasetTooSmall: return "DatasetTooSmall";
    case Errc::MissingEmotion: return "MissingEmotion";
    case Errc::DuplicateEmotion: return "DuplicateEmotion";
    case Errc::UnparsableNumber: return "UnparsableNumber";
    case Errc::CacheMiss: return "CacheMiss";
    case Errc::TransportError: return "TransportError";
    case Errc::RateLimited: return "RateLimited";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::DuplicateEntry: return "DuplicateEntry";
    case Errc::UnknownSourceKind: return "UnknownSourceKind";
    case Errc::UnknownOutcome: return "UnknownOutcome";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::UsageError: return "UsageError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

std::string_view emotion_name(Emotion e) {
  return kNames[static_cast<std::size_t>(e)];
}

std::string_view emotion_display(Emotion e) {
  return kDisplay[static_cast<std::size_t>(e)];
}

std::optional<Emotion> parse_emotion(std::string_view name) {
  const std::string needle = lower(name);
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    if (needle == kNames[i]) return kEmotions[i];
  }
  return std::nullopt;
}

std::string_view outcome_code(GameOutcome o) {
  return kOutcomeCodes[static_cast<std::size_t>(o)];
}

std::optional<GameOutcome> parse_outcome(std::string_view code) {
  std::string needle(code);
  std::transform(needle.begin(), needle.end(), needle.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::size_t i = 0; i < kOutcomes.size(); ++i) {
    if (needle == kOutcomeCodes[i]) return kOutcomes[i];
  }
  return std::nullopt;
}

EmotionDistribution EmotionDistribution::make(
    std::span<const double, kEmotionCount> raw) {
  double sum = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v)) raise(Errc::NonFiniteInput, "distribution component");
    if (v < 0.0) raise(Errc::NegativeComponent, "component " + std::to_string(v));
    sum += v;
  }
  if (sum < kMinRawSum || sum > kMaxRawSum) {
    raise(Errc::SumOutOfRange, "components sum to " + std::to_string(sum) +
                                   ", expected within [0.9, 1.1]");
  }
  std::array<double, kEmotionCount> probs{};
  for (std::size_t i = 0; i < kEmotionCount; ++i) probs[i] = raw[i] / sum;
  return EmotionDistribution(probs);
}

EmotionDistribution EmotionDistribution::make(
    const std::array<double, kEmotionCount>& raw) {
  return make(std::span<const double, kEmotionCount>(raw));
}

EmotionDistribution EmotionDistribution::uniform() {
  std::array<double, kEmotionCount> probs{};
  probs.fill(1.0 / 7.0);
  return EmotionDistribution(probs);
}

EmotionDistribution EmotionDistribution::one_hot(Emotion e) {
  std::array<double, kEmotionCount> probs{};
  probs[static_cast<std::size_t>(e)] = 1.0;
  return EmotionDistribution(probs);
}

EmotionDistribution EmotionDistribution::smoothed(double epsilon) const {
  if (!(epsilon > 0.0) || epsilon > 0.01) {
    raise(Errc::EpsilonOutOfRange,
          "epsilon " + std::to_string(epsilon) + " outside (0, 0.01]");
  }
  std::array<double, kEmotionCount> probs{};
  const double denom = 1.0 + 7.0 * epsilon;
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    probs[i] = (probs_[i] + epsilon) / denom;
  }
  return EmotionDistribution(probs);
}

Emotion EmotionDistribution::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kEmotionCount; ++i) {
    if (probs_[i] > probs_[best]) best = i;
  }
  return kEmotions[best];
}

EmotionDistribution make_distribution(std::span<const double, kEmotionCount> raw) {
  return EmotionDistribution::make(raw);
}

EmotionDistribution smooth(const EmotionDistribution& d, double epsilon) {
  return d.smoothed(epsilon);
}

Emotion argmax_label(const EmotionDistribution& d) { return d.argmax(); }

std::string distribution_to_json(const EmotionDistribution& d) {
  nlohmann::ordered_json obj;
  for (Emotion e : kEmotions) {
    obj[std::string(emotion_name(e))] = d[e];
  }
  return obj.dump();
}

EmotionDistribution distribution_from_json(std::string_view json_text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& ex) {
    raise(Errc::UnparsableNumber, std::string("bad distribution JSON: ") + ex.what());
  }
  if (!obj.is_object()) {
    raise(Errc::UnparsableNumber, "distribution JSON must be an object");
  }
  std::array<double, kEmotionCount> raw{};
  std::array<bool, kEmotionCount> seen{};
  for (const auto& [key, value] : obj.items()) {
    const auto emotion = parse_emotion(key);
    if (!emotion) continue;  // tolerate extra keys
    const auto idx = static_cast<std::size_t>(*emotion);
    if (seen[idx]) raise(Errc::DuplicateEmotion, key);
    if (!value.is_number()) raise(Errc::UnparsableNumber, key);
    raw[idx] = value.get<double>();
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    if (!seen[i]) raise(Errc::MissingEmotion, std::string(kNames[i]));
  }
  return EmotionDistribution::make(raw);
}

std::string_view source_kind_code(SourceKind kind) {
  return kSourceCodes[static_cast<std::size_t>(kind)];
}

std::optional<SourceKind> parse_source_kind(std::string_view code) {
  const std::string needle = lower(code);
  for (std::size_t i = 0; i < kSourceCodes.size(); ++i) {
    if (needle == kSourceCodes[i]) return static_cast<SourceKind>(i);
  }
  return std::nullopt;
}

bool is_face_cue(SourceKind kind) {
  switch (kind) {
    case SourceKind::FaceFACET:
    case SourceKind::FaceEAC:
    case SourceKind::FaceLSTM:
    case SourceKind::HumanContextFree:
      return true;
    default:
      return false;
  }
}

bool is_context_cue(SourceKind kind) {
  switch (kind) {
    case SourceKind::ContextGPT3:
    case SourceKind::ContextGPT4:
    case SourceKind::HumanContextBased:
      return true;
    default:
      return false;
  }
}

bool is_ground_truth(SourceKind kind) {
  return kind == SourceKind::HumanContextFree ||
         kind == SourceKind::HumanContextBased;
}

std::string SourceId::str() const {
  std::string out(source_kind_code(kind));
  if (!detail.empty()) {
    out += ':';
    out += detail;
  }
  return out;
}

SourceId SourceId::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view code =
      colon == std::string_view::npos ? text : text.substr(0, colon);
  const auto kind = parse_source_kind(code);
  if (!kind) raise(Errc::UnknownSourceKind, std::string(text));
  std::string detail;
  if (colon != std::string_view::npos) detail = std::string(text.substr(colon + 1));
  return SourceId(*kind, std::move(detail));
}

const EmotionDistribution& ClipRecord::at(const SourceId& source) const {
  const auto it = distributions.find(source);
  if (it == distributions.end()) {
    raise(Errc::MissingSource, "clip " + clip_id + " has no source " + source.str());
  }
  return it->second;
}

}  // namespace emofuse
