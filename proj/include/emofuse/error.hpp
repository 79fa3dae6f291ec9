#pragma once

#include <stdexcept>
#include <string>

namespace emofuse {

// Every failure the library can raise, by contract name. Tests match on the
// code, the CLI maps the category to its exit status.
enum class Errc {
  // distribution construction / simplex arithmetic
  NegativeComponent,
  SumOutOfRange,
  NonFiniteInput,
  EpsilonOutOfRange,
  // fusion
  DegenerateProduct,
  MissingSource,
  InvalidSourceRole,
  // metrics
  EmptyInput,
  LengthMismatch,
  EmptyCorpus,
  OutcomeSetMismatch,
  // neural integrator
  NonFiniteActivation,
  EmptyDataset,
  DivergedTraining,
  DatasetTooSmall,
  // llm prompt/response handling
  MissingEmotion,
  DuplicateEmotion,
  UnparsableNumber,
  CacheMiss,
  TransportError,
  RateLimited,
  // corpus files
  MalformedRow,
  DuplicateEntry,
  UnknownSourceKind,
  UnknownOutcome,
  // configuration / cli
  InvalidConfig,
  UsageError,
  IoError,
};

enum class ErrcCategory { Validation, Runtime, Cache };

constexpr ErrcCategory category(Errc code) {
  switch (code) {
    case Errc::DegenerateProduct:
    case Errc::NonFiniteActivation:
    case Errc::DivergedTraining:
    case Errc::TransportError:
    case Errc::RateLimited:
    case Errc::IoError:
      return ErrcCategory::Runtime;
    case Errc::CacheMiss:
      return ErrcCategory::Cache;
    default:
      return ErrcCategory::Validation;
  }
}

// Exit codes are a stable scripting contract.
constexpr int exit_code(ErrcCategory cat) {
  switch (cat) {
    case ErrcCategory::Validation: return 1;
    case ErrcCategory::Runtime: return 2;
    case ErrcCategory::Cache: return 3;
  }
  return 2;
}

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrcCategory category() const noexcept { return emofuse::category(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace emofuse
