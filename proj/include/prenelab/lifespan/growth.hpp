#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "prenelab/core/parallel.hpp"
#include "prenelab/lifespan/life_table.hpp"

namespace prenelab::lifespan {

enum class GrowthStatus { Ok, NoReproduction };

struct GrowthRate {
  double lambda_per_day = 0.0;
  /// Euler-Lotka sum minus one at the returned root.
  double residual = 0.0;
  GrowthStatus status = GrowthStatus::Ok;
};

namespace detail {

/// sum_{j=0}^{terms-1} x^j with x = lambda^-period, for lambda > 1.
inline double geometric_block(double log_lambda, Day period, std::optional<std::uint64_t> terms) {
  const double step = -static_cast<double>(period) * log_lambda;  // log x < 0
  if (!terms) return -1.0 / std::expm1(step);
  return std::expm1(static_cast<double>(*terms) * step) / std::expm1(step);
}

}  // namespace detail

/// f(lambda) = sum over birth ages a of lambda^-a. Decreasing in lambda,
/// +inf at lambda = 1 for an immortal schedule.
inline double euler_lotka_sum(const LifeTable& table, double lambda) {
  if (table.empty()) return 0.0;
  if (!table.is_periodic()) {
    double sum = 0.0;
    for (Day a : table.pattern()) sum += std::pow(lambda, -static_cast<double>(a));
    return sum;
  }
  if (lambda <= 1.0) {
    if (table.immortal()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(*table.birth_count());
  }
  const double log_lambda = std::log(lambda);
  double sum = 0.0;
  for (Day c : table.pattern()) {
    std::optional<std::uint64_t> terms;
    if (auto limit = table.age_limit()) {
      if (c > *limit) continue;
      terms = static_cast<std::uint64_t>((*limit - c) / table.period() + 1);
    }
    sum += std::pow(lambda, -static_cast<double>(c)) * detail::geometric_block(log_lambda, table.period(), terms);
  }
  return sum;
}

/// Bisection for the root of f(x) = target with f strictly decreasing on
/// [lo, hi], f(lo) > target >= f(hi). Runs until the bracket cannot shrink in
/// double precision. `observe(lo, hi)` sees every bracket.
template <typename F, typename Observer>
double bisect_decreasing(F&& f, double lo, double hi, double target, Observer&& observe) {
  observe(lo, hi);
  for (int iter = 0; iter < 4096; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (f(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    observe(lo, hi);
  }
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  return std::fabs(f_lo - target) < std::fabs(f_hi - target) ? lo : hi;
}

template <typename F>
double bisect_decreasing(F&& f, double lo, double hi, double target) {
  return bisect_decreasing(std::forward<F>(f), lo, hi, target, [](double, double) {});
}

/// Asymptotic per-day growth factor: the root lambda >= 1 of
/// sum_a lambda^-a = 1.
inline GrowthRate growth_rate(const LifeTable& table) {
  if (table.empty()) return GrowthRate{0.0, -1.0, GrowthStatus::NoReproduction};

  auto f = [&](double lambda) { return euler_lotka_sum(table, lambda); };
  const double at_one = f(1.0);
  if (at_one == 1.0) return GrowthRate{1.0, 0.0, GrowthStatus::Ok};

  double hi = 2.0;
  while (f(hi) > 1.0) hi *= 2.0;
  const double root = bisect_decreasing(f, 1.0, hi, 1.0);
  return GrowthRate{root, f(root) - 1.0, GrowthStatus::Ok};
}

struct SweepPoint {
  Rational gene_number;
  LifeTable table;
  GrowthRate rate;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  /// Indices of every point attaining the maximal lambda. Identical
  /// schedules give bit-identical lambdas, so ties are exact.
  std::vector<std::size_t> argmax;
};

inline SweepResult optimality_sweep(std::span<const Rational> grid, unsigned threads = worker_count()) {
  std::vector<std::optional<SweepPoint>> slots(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        const TreeSpecies species(grid[i]);
        LifeTable table = life_table(species);
        const GrowthRate rate = growth_rate(table);
        slots[i].emplace(SweepPoint{grid[i], std::move(table), rate});
      },
      threads);

  SweepResult result;
  result.points.reserve(grid.size());
  for (auto& slot : slots) result.points.push_back(std::move(*slot));

  double best = -1.0;
  for (const auto& p : result.points) best = std::max(best, p.rate.lambda_per_day);
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    if (result.points[i].rate.lambda_per_day == best) result.argmax.push_back(i);
  }
  return result;
}

/// census[i] / census[i - lag]; nullopt where the earlier value is zero.
inline std::vector<std::optional<double>> roi_series(std::span<const BigInt> census, std::size_t lag = 1) {
  std::vector<std::optional<double>> out;
  if (lag == 0) throw Error(Errc::InvalidArgument, "roi lag must be positive");
  for (std::size_t i = lag; i < census.size(); ++i) {
    if (census[i - lag] == 0) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(to_double(Rational(census[i], census[i - lag])));
    }
  }
  return out;
}

}  // namespace prenelab::lifespan
