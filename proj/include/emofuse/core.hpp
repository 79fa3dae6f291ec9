#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emofuse/error.hpp"

namespace emofuse {

// Canonical emotion order. Index is part of the contract: serialization,
// prompt rendering and argmax tie-breaking all follow it.
enum class Emotion : std::uint8_t {
  Joy = 0,
  Neutral,
  Surprise,
  Anger,
  Disgust,
  Fear,
  Sadness,
};

inline constexpr std::size_t kEmotionCount = 7;

inline constexpr std::array<Emotion, kEmotionCount> kEmotions = {
    Emotion::Joy,     Emotion::Neutral, Emotion::Surprise, Emotion::Anger,
    Emotion::Disgust, Emotion::Fear,    Emotion::Sadness,
};

std::string_view emotion_name(Emotion e);     // lowercase, canonical
std::string_view emotion_display(Emotion e);  // capitalized, prompt style
std::optional<Emotion> parse_emotion(std::string_view name);  // case-insensitive

// Prisoner's-dilemma round outcome. First letter is Player A's move,
// second is Player B's; C = split, D = steal.
enum class GameOutcome : std::uint8_t { CC = 0, DC, CD, DD };

inline constexpr std::array<GameOutcome, 4> kOutcomes = {
    GameOutcome::CC, GameOutcome::DC, GameOutcome::CD, GameOutcome::DD};

std::string_view outcome_code(GameOutcome o);
std::optional<GameOutcome> parse_outcome(std::string_view code);  // case-insensitive

// A point on the 7-simplex. Immutable after construction; construction
// renormalizes raw values whose sum falls in [0.9, 1.1] and rejects
// anything else.
class EmotionDistribution {
 public:
  static constexpr double kMinRawSum = 0.9;
  static constexpr double kMaxRawSum = 1.1;

  static EmotionDistribution make(std::span<const double, kEmotionCount> raw);
  static EmotionDistribution make(const std::array<double, kEmotionCount>& raw);
  static EmotionDistribution uniform();
  static EmotionDistribution one_hot(Emotion e);

  double operator[](Emotion e) const { return probs_[static_cast<std::size_t>(e)]; }
  double at(std::size_t i) const { return probs_.at(i); }
  const std::array<double, kEmotionCount>& probs() const { return probs_; }

  // (p_i + eps) / (1 + 7*eps); eps must be in (0, 0.01].
  EmotionDistribution smoothed(double epsilon) const;

  // Highest-probability emotion, ties broken by canonical index.
  Emotion argmax() const;

  bool operator==(const EmotionDistribution&) const = default;

 private:
  explicit EmotionDistribution(const std::array<double, kEmotionCount>& p)
      : probs_(p) {}
  std::array<double, kEmotionCount> probs_;
};

EmotionDistribution make_distribution(std::span<const double, kEmotionCount> raw);
EmotionDistribution smooth(const EmotionDistribution& d, double epsilon);
Emotion argmax_label(const EmotionDistribution& d);

// Canonical JSON rendering: object keyed by the seven lowercase emotion
// names in canonical order, full-precision values.
std::string distribution_to_json(const EmotionDistribution& d);
EmotionDistribution distribution_from_json(std::string_view json_text);

// Which pipeline role a distribution may fill.
enum class SourceKind : std::uint8_t {
  FaceFACET = 0,
  FaceEAC,
  FaceLSTM,
  HumanContextFree,
  HumanContextBased,
  ContextGPT3,
  ContextGPT4,
  FusedBCI,
  FusedGPT4,
  FusedNNI,
};

std::string_view source_kind_code(SourceKind kind);
std::optional<SourceKind> parse_source_kind(std::string_view code);

bool is_face_cue(SourceKind kind);      // may supply P(e|f)
bool is_context_cue(SourceKind kind);   // may supply P(e|c)
bool is_ground_truth(SourceKind kind);  // may anchor an evaluation

// Identifies one distribution attached to a clip. `detail` disambiguates
// multiple outputs of the same kind (e.g. fused_bci "lstm+gpt4_ctx").
struct SourceId {
  SourceKind kind;
  std::string detail;

  SourceId(SourceKind k, std::string d = "") : kind(k), detail(std::move(d)) {}

  auto operator<=>(const SourceId&) const = default;

  // "kind" or "kind:detail".
  std::string str() const;
  static SourceId parse(std::string_view text);  // throws UnknownSourceKind
};

// One video clip's identity, outcome and attached distributions.
struct ClipRecord {
  std::string clip_id;
  GameOutcome outcome;
  std::map<SourceId, EmotionDistribution> distributions;

  bool has(const SourceId& source) const {
    return distributions.contains(source);
  }
  // Throws MissingSource naming the clip and source.
  const EmotionDistribution& at(const SourceId& source) const;
};

using Corpus = std::vector<ClipRecord>;

}  // namespace emofuse
