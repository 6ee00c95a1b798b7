#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "prenelab/core/error.hpp"
#include "prenelab/core/rational.hpp"

namespace prenelab {

struct SignTest {
  std::size_t wins = 0;
  std::size_t losses = 0;
  std::size_t ties = 0;
  /// One-sided P(X >= wins) for X ~ Binomial(wins + losses, 1/2); ties dropped.
  double p_value = 1.0;
};

/// Paired sign test of H1: first > second.
inline SignTest sign_test(std::span<const double> first, std::span<const double> second) {
  if (first.size() != second.size()) throw Error(Errc::InvalidArgument, "sign test needs paired samples");
  SignTest result;
  const std::size_t n = first.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (first[i] > second[i]) {
      ++result.wins;
    } else if (first[i] < second[i]) {
      ++result.losses;
    } else {
      ++result.ties;
    }
  }
  const std::size_t trials = result.wins + result.losses;
  BigInt tail = 0;
  BigInt binom = 1;  // C(trials, k)
  for (std::size_t k = 0; k <= trials; ++k) {
    if (k >= result.wins) tail += binom;
    binom = binom * (trials - k) / (k + 1);
  }
  result.p_value = to_double(Rational(tail, BigInt(1) << trials));
  return result;
}

inline double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

inline double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace prenelab
