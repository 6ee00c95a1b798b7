#pragma once

// Tree energy-allocation model: species, per-tree accounts and the derived
// reproduction schedule.
//
// Daily schedule for every tree alive in the morning:
//   1. births scheduled yesterday materialize with accounts (3, 0)
//   2. +g to survival, +(2 - g) to reproduction
//   3. while reproduction >= 3: withdraw 3 and schedule a birth for tomorrow
//   4. survival < 1: the tree dies after today's census; else survival -= 1
//   5. census
// A birth scheduled on the parent's last day still happens, so a birth age
// may equal death_age + 1.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "prenelab/core/error.hpp"
#include "prenelab/core/rational.hpp"

namespace prenelab::lifespan {

using Day = std::int64_t;

/// Mortal schedules up to this age are stored as explicit lists.
inline constexpr Day kExplicitSchedule = Day{1} << 20;
/// Longest reproduction period a life table will hold.
inline constexpr Day kMaxSchedule = Day{1} << 26;

class TreeSpecies {
 public:
  explicit TreeSpecies(Rational gene_number) : gene_number_(std::move(gene_number)) {
    if (gene_number_ < 0 || gene_number_ > 1) {
      throw Error(Errc::InvalidArgument, "gene-number must lie in [0, 1], got " + to_string(gene_number_));
    }
  }

  [[nodiscard]] const Rational& gene_number() const noexcept { return gene_number_; }
  [[nodiscard]] bool immortal() const { return gene_number_ == 1; }

  friend bool operator==(const TreeSpecies&, const TreeSpecies&) = default;

 private:
  Rational gene_number_;
};

struct Tree {
  std::size_t species = 0;  // index into the run's species list
  Rational survival{3};
  Rational reproduction{0};
  Day birth_day = 0;
};

/// Birth ages (days after the parent's birth at which a child materializes)
/// and the death age. Either an explicit list, or a pattern repeating with
/// `period`: ages are {c + k * period : c in pattern, k >= 0}, cut off at
/// death_age + 1 when the tree is mortal.
class LifeTable {
 public:
  static LifeTable finite(std::vector<Day> ages, Day death_age) {
    LifeTable t;
    t.ages_ = std::move(ages);
    t.death_age_ = death_age;
    t.validate();
    return t;
  }

  static LifeTable periodic(std::vector<Day> pattern, Day period, std::optional<Day> death_age) {
    LifeTable t;
    t.ages_ = std::move(pattern);
    t.period_ = period;
    t.death_age_ = death_age;
    t.validate();
    return t;
  }

  [[nodiscard]] bool immortal() const noexcept { return !death_age_.has_value(); }
  [[nodiscard]] std::optional<Day> death_age() const noexcept { return death_age_; }
  [[nodiscard]] bool is_periodic() const noexcept { return period_ > 0; }
  [[nodiscard]] Day period() const noexcept { return period_; }
  /// Explicit ages, or one period of the pattern.
  [[nodiscard]] const std::vector<Day>& pattern() const noexcept { return ages_; }

  [[nodiscard]] bool empty() const noexcept { return ages_.empty(); }

  /// Largest age a birth may occur at (death_age + 1), or nullopt if immortal.
  [[nodiscard]] std::optional<Day> age_limit() const {
    if (!death_age_) return std::nullopt;
    return *death_age_ + 1;
  }

  /// All birth ages <= limit, increasing.
  [[nodiscard]] std::vector<Day> ages_through(Day limit) const {
    std::vector<Day> out;
    if (auto cap = age_limit()) limit = std::min(limit, *cap);
    if (period_ == 0) {
      for (Day a : ages_) {
        if (a > limit) break;
        out.push_back(a);
      }
      return out;
    }
    for (Day base = 0; base < limit; base += period_) {
      for (Day c : ages_) {
        if (base + c > limit) return out;
        out.push_back(base + c);
      }
    }
    return out;
  }

  /// Every birth age; requires a mortal table.
  [[nodiscard]] std::vector<Day> birth_ages() const {
    if (immortal()) throw Error(Errc::InvalidArgument, "immortal life table has infinitely many births");
    return ages_through(*age_limit());
  }

  /// Number of births over a lifetime, nullopt if infinite.
  [[nodiscard]] std::optional<std::uint64_t> birth_count() const {
    if (immortal()) {
      if (ages_.empty()) return 0;
      return std::nullopt;
    }
    if (period_ == 0) return ages_.size();
    const Day limit = *age_limit();
    std::uint64_t count = 0;
    for (Day c : ages_) {
      if (c <= limit) count += static_cast<std::uint64_t>((limit - c) / period_ + 1);
    }
    return count;
  }

  /// Same schedule, ignoring representation.
  friend bool operator==(const LifeTable& a, const LifeTable& b) {
    if (a.death_age_ != b.death_age_) return false;
    if (!a.immortal()) {
      const Day limit = *a.age_limit();
      if (limit <= kExplicitSchedule) return a.ages_through(limit) == b.ages_through(limit);
    }
    const Day horizon = std::max<Day>(1, std::lcm(std::max<Day>(a.period_, 1), std::max<Day>(b.period_, 1)));
    return a.ages_through(horizon) == b.ages_through(horizon);
  }

 private:
  LifeTable() = default;

  void validate() const {
    if (period_ < 0) throw Error(Errc::InvalidArgument, "negative period");
    if (death_age_ && *death_age_ < 0) throw Error(Errc::InvalidArgument, "negative death age");
    if (!death_age_ && period_ == 0 && !ages_.empty()) {
      throw Error(Errc::InvalidArgument, "an immortal schedule needs a period");
    }
    Day prev = 0;
    for (Day a : ages_) {
      if (a <= prev) throw Error(Errc::InvalidArgument, "birth ages must be positive and strictly increasing");
      prev = a;
    }
    if (period_ > 0 && !ages_.empty() && ages_.back() > period_) {
      throw Error(Errc::InvalidArgument, "pattern ages must lie within one period");
    }
    if (period_ == 0 && death_age_ && !ages_.empty() && ages_.back() > *death_age_ + 1) {
      throw Error(Errc::InvalidArgument, "birth age beyond death_age + 1");
    }
  }

  std::vector<Day> ages_;
  Day period_ = 0;
  std::optional<Day> death_age_;
};

namespace detail {

inline Day checked_day(const BigInt& v) {
  if (v > kMaxSchedule * Day{64}) {
    throw Error(Errc::ScheduleTooLong, "schedule horizon " + v.str() + " days is too long to tabulate");
  }
  return static_cast<Day>(v);
}

}  // namespace detail

/// Closed-form solution of the daily rules for gene-number g = p/q.
///
/// Survival at the start of day k of life is 3 - k(1 - g), so the tree dies
/// on the first day with 3 - k(1 - g) + g < 1, i.e. death_age =
/// floor((2 + g)/(1 - g)) + 1. Reproduction gains (2 - g) < 3 per day, so at
/// most one birth is scheduled per day, and by the end of day k exactly
/// floor((k + 1)(2 - g)/3) have been scheduled. Writing (2 - g)/3 = m/n in
/// lowest terms, a child is born at age a iff floor(a m/n) > floor((a-1) m/n),
/// which repeats with period n.
inline LifeTable life_table(const TreeSpecies& species) {
  const Rational& g = species.gene_number();
  const BigInt p = numerator(g);
  const BigInt q = denominator(g);

  const Rational rate = (Rational(2) - g) / 3;
  const BigInt m = numerator(rate);
  const BigInt n = denominator(rate);

  auto born_at = [&](const BigInt& age) { return (age * m) / n > ((age - 1) * m) / n; };

  std::optional<Day> death_age;
  if (!species.immortal()) {
    death_age = detail::checked_day(BigInt((2 * q + p) / (q - p)) + 1);
  }

  if (death_age && *death_age + 1 <= kExplicitSchedule) {
    std::vector<Day> ages;
    for (Day a = 1; a <= *death_age + 1; ++a) {
      if (born_at(a)) ages.push_back(a);
    }
    return LifeTable::finite(std::move(ages), *death_age);
  }

  if (n > kMaxSchedule) {
    throw Error(Errc::ScheduleTooLong, "reproduction period " + n.str() + " days is too long to tabulate");
  }
  const Day period = static_cast<Day>(n);
  std::vector<Day> pattern;
  for (Day a = 1; a <= period; ++a) {
    if (born_at(a)) pattern.push_back(a);
  }
  return LifeTable::periodic(std::move(pattern), period, death_age);
}

/// Applies steps 2-4 of the daily schedule to one tree. Returns the number of
/// births scheduled for tomorrow and whether the tree dies after today.
struct DayOutcome {
  int births = 0;
  bool dies = false;
};

inline DayOutcome live_one_day(Tree& tree, const Rational& gene_number) {
  DayOutcome out;
  tree.survival += gene_number;
  tree.reproduction += Rational(2) - gene_number;
  while (tree.reproduction >= 3) {
    tree.reproduction -= 3;
    ++out.births;
  }
  if (tree.survival < 1) {
    out.dies = true;
  } else {
    tree.survival -= 1;
  }
  return out;
}

}  // namespace prenelab::lifespan
