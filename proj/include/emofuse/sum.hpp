#pragma once

#include <cstddef>
#include <span>

namespace emofuse {

// Pairwise summation over a materialized array. The reduction tree depends
// only on the element count, so results are identical no matter how many
// threads produced the inputs.
inline double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    double acc = 0.0;
    for (const double v : values) acc += v;
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline double pairwise_mean(std::span<const double> values) {
  return values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
}

}  // namespace emofuse
