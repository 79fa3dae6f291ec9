#include "emofuse/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "emofuse/sum.hpp"

namespace emofuse {
namespace {

constexpr double kLn2 = 0.6931471805599453;

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// Pads cells so the pipes line up; numeric columns right-aligned.
std::string markdown_table(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return "";
  const std::size_t cols = rows[0].size();
  std::vector<std::size_t> width(cols, 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < cols; ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << '|';
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string& cell = rows[r][c];
      const std::size_t pad = width[c] - cell.size();
      if (c == 0) {
        out << ' ' << cell << std::string(pad, ' ') << " |";
      } else {
        out << ' ' << std::string(pad, ' ') << cell << " |";
      }
    }
    out << '\n';
    if (r == 0) {
      out << '|';
      for (std::size_t c = 0; c < cols; ++c) {
        if (c == 0) {
          out << ' ' << std::string(std::max<std::size_t>(width[c], 1), '-') << " |";
        } else {
          out << ' ' << std::string(std::max<std::size_t>(width[c], 2) - 1, '-')
              << ": |";
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (const auto& row : counts_) {
    for (const std::uint64_t v : row) sum += v;
  }
  return sum;
}

double kld(const EmotionDistribution& truth, const EmotionDistribution& pred) {
  double total = 0.0;
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    const double t = truth.at(i);
    if (t > 0.0) total += t * std::log(t / pred.at(i));
  }
  // Gibbs guarantees >= 0; only rounding noise may dip below.
  if (total < 0.0 && total > -1e-12) total = 0.0;
  return total;
}

double rmse(const EmotionDistribution& a, const EmotionDistribution& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    const double diff = a.at(i) - b.at(i);
    acc += diff * diff;
  }
  return std::sqrt(acc / static_cast<double>(kEmotionCount));
}

double f1_weighted(std::span<const Emotion> truths, std::span<const Emotion> preds) {
  if (truths.size() != preds.size()) {
    raise(Errc::LengthMismatch, std::to_string(truths.size()) + " truths vs " +
                                    std::to_string(preds.size()) + " preds");
  }
  if (truths.empty()) raise(Errc::EmptyInput, "f1 over zero labels");

  std::array<std::size_t, kEmotionCount> tp{}, fp{}, support{};
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const auto t = static_cast<std::size_t>(truths[i]);
    const auto p = static_cast<std::size_t>(preds[i]);
    ++support[t];
    if (t == p) {
      ++tp[t];
    } else {
      ++fp[p];
    }
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < kEmotionCount; ++c) {
    if (support[c] == 0) continue;  // weight zero
    const double predicted = static_cast<double>(tp[c] + fp[c]);
    const double precision = predicted > 0.0 ? tp[c] / predicted : 0.0;
    const double recall = static_cast<double>(tp[c]) / support[c];
    const double f1 = precision + recall > 0.0
                          ? 2.0 * precision * recall / (precision + recall)
                          : 0.0;
    acc += f1 * static_cast<double>(support[c]);
  }
  return acc / static_cast<double>(truths.size());
}

ConfusionMatrix confusion(std::span<const Emotion> truths,
                          std::span<const Emotion> preds) {
  if (truths.size() != preds.size()) {
    raise(Errc::LengthMismatch, std::to_string(truths.size()) + " truths vs " +
                                    std::to_string(preds.size()) + " preds");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truths.size(); ++i) cm.add(truths[i], preds[i]);
  return cm;
}

EvalResult evaluate_pairs(std::span<const EvalPair> pairs,
                          const EvalOptions& options) {
  if (pairs.empty()) raise(Errc::EmptyCorpus, "no items to evaluate");
  const auto n = pairs.size();

  std::vector<double> klds(n), rmses(n);
  std::vector<Emotion> tlabels(n, Emotion::Joy), plabels(n, Emotion::Joy);

  const double scale = options.base == LogBase::Bits ? 1.0 / kLn2 : 1.0;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(n); ++idx) {
    const auto i = static_cast<std::size_t>(idx);
    const EvalPair& pair = pairs[i];
    if (options.direction == KldDirection::TruthGivenPred) {
      klds[i] = scale * kld(pair.truth, pair.pred.smoothed(options.pred_epsilon));
    } else {
      klds[i] = scale * kld(pair.pred, pair.truth.smoothed(options.pred_epsilon));
    }
    rmses[i] = rmse(pair.truth, pair.pred);
    tlabels[i] = pair.truth.argmax();
    plabels[i] = pair.pred.argmax();
  }

  EvalResult result;
  result.report.n_items = n;
  result.report.overall.kld = pairwise_mean(klds);
  result.report.overall.rmse = pairwise_mean(rmses);
  result.report.overall.f1 = f1_weighted(tlabels, plabels);
  for (std::size_t i = 0; i < n; ++i) result.confusion.add(tlabels[i], plabels[i]);

  for (const GameOutcome outcome : kOutcomes) {
    std::vector<double> okld, ormse;
    std::vector<Emotion> otruth, opred;
    for (std::size_t i = 0; i < n; ++i) {
      if (pairs[i].outcome != outcome) continue;
      okld.push_back(klds[i]);
      ormse.push_back(rmses[i]);
      otruth.push_back(tlabels[i]);
      opred.push_back(plabels[i]);
    }
    if (okld.empty()) continue;
    MetricTriple triple;
    triple.kld = pairwise_mean(okld);
    triple.rmse = pairwise_mean(ormse);
    triple.f1 = f1_weighted(otruth, opred);
    result.report.by_outcome.emplace(outcome, triple);
    result.report.n_by_outcome.emplace(outcome, okld.size());
  }
  return result;
}

EvalResult evaluate(const Corpus& corpus, const SourceId& truth_source,
                    const SourceId& pred_source, const EvalOptions& options) {
  if (corpus.empty()) raise(Errc::EmptyCorpus, "cannot evaluate an empty corpus");
  if (!is_ground_truth(truth_source.kind)) {
    raise(Errc::InvalidSourceRole,
          truth_source.str() + " cannot serve as ground truth");
  }
  std::vector<EvalPair> pairs;
  pairs.reserve(corpus.size());
  for (const ClipRecord& clip : corpus) {
    pairs.push_back(EvalPair{clip.outcome, clip.at(truth_source),
                             clip.at(pred_source)});
  }
  return evaluate_pairs(pairs, options);
}

std::map<GameOutcome, ImprovementDelta> improvement_delta(
    const MetricReport& report_face_only, const MetricReport& report_fused) {
  auto outcomes_of = [](const MetricReport& r) {
    std::vector<GameOutcome> keys;
    for (const auto& [outcome, triple] : r.by_outcome) keys.push_back(outcome);
    return keys;
  };
  if (outcomes_of(report_face_only) != outcomes_of(report_fused)) {
    raise(Errc::OutcomeSetMismatch,
          "face-only and fused reports cover different outcomes");
  }
  std::map<GameOutcome, ImprovementDelta> deltas;
  for (const auto& [outcome, face_triple] : report_face_only.by_outcome) {
    const MetricTriple& fused_triple = report_fused.by_outcome.at(outcome);
    deltas.emplace(outcome, ImprovementDelta{face_triple.kld - fused_triple.kld,
                                             face_triple.rmse - fused_triple.rmse});
  }
  return deltas;
}

std::string report_to_csv(const MetricReport& report) {
  std::ostringstream out;
  out << "scope,n,kld,rmse,f1_weighted\n";
  out << "overall," << report.n_items << ',' << format_double(report.overall.kld)
      << ',' << format_double(report.overall.rmse) << ','
      << format_double(report.overall.f1) << '\n';
  for (const GameOutcome outcome : kOutcomes) {
    const auto it = report.by_outcome.find(outcome);
    if (it == report.by_outcome.end()) continue;
    out << outcome_code(outcome) << ',' << report.n_by_outcome.at(outcome) << ','
        << format_double(it->second.kld) << ',' << format_double(it->second.rmse)
        << ',' << format_double(it->second.f1) << '\n';
  }
  return out.str();
}

std::string report_to_markdown(const MetricReport& report, std::string_view label) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{std::string(label), "Overall"};
  for (const GameOutcome outcome : kOutcomes) {
    if (report.by_outcome.contains(outcome)) {
      header.emplace_back(outcome_code(outcome));
    }
  }
  rows.push_back(header);

  auto metric_row = [&](const std::string& name, auto getter) {
    std::vector<std::string> row{name, fixed4(getter(report.overall))};
    for (const GameOutcome outcome : kOutcomes) {
      const auto it = report.by_outcome.find(outcome);
      if (it != report.by_outcome.end()) row.push_back(fixed4(getter(it->second)));
    }
    rows.push_back(row);
  };
  metric_row("KLD", [](const MetricTriple& t) { return t.kld; });
  metric_row("RMSE", [](const MetricTriple& t) { return t.rmse; });
  metric_row("F1", [](const MetricTriple& t) { return t.f1; });

  std::vector<std::string> counts{"n", std::to_string(report.n_items)};
  for (const GameOutcome outcome : kOutcomes) {
    const auto it = report.n_by_outcome.find(outcome);
    if (it != report.n_by_outcome.end()) counts.push_back(std::to_string(it->second));
  }
  rows.push_back(counts);
  return markdown_table(rows);
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
  std::ostringstream out;
  out << "truth";
  for (const Emotion e : kEmotions) out << ',' << emotion_name(e);
  out << '\n';
  for (const Emotion truth : kEmotions) {
    out << emotion_name(truth);
    for (const Emotion pred : kEmotions) out << ',' << cm.at(truth, pred);
    out << '\n';
  }
  return out.str();
}

std::string confusion_to_markdown(const ConfusionMatrix& cm) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"truth \\ pred"};
  for (const Emotion e : kEmotions) header.emplace_back(emotion_display(e));
  rows.push_back(header);
  for (const Emotion truth : kEmotions) {
    std::vector<std::string> row{std::string(emotion_display(truth))};
    for (const Emotion pred : kEmotions) {
      row.push_back(std::to_string(cm.at(truth, pred)));
    }
    rows.push_back(row);
  }
  return markdown_table(rows);
}

}  // namespace emofuse
