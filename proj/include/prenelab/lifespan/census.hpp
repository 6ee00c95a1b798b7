#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prenelab/lifespan/life_table.hpp"

namespace prenelab::lifespan {

/// alive[s][d]: trees of species s counted on day d, for d in [0, days].
struct CensusTable {
  std::vector<TreeSpecies> species;
  std::vector<std::vector<BigInt>> alive;
  bool truncated = false;
  std::optional<Day> truncated_at;  // first day that could not be simulated

  [[nodiscard]] Day last_day() const {
    return alive.empty() ? -1 : static_cast<Day>(alive.front().size()) - 1;
  }

  friend bool operator==(const CensusTable&, const CensusTable&) = default;
};

/// Cohort recurrence: births(0) = 1 (the founder) and
/// births(d) = sum over birth ages a of births(d - a); a tree born on day b is
/// counted on days b .. b + death_age.
inline CensusTable simulate_census(std::span<const TreeSpecies> species, Day days) {
  if (days < 0) throw Error(Errc::InvalidArgument, "days must be non-negative");
  CensusTable table;
  table.species.assign(species.begin(), species.end());
  for (const auto& sp : species) {
    const LifeTable lt = life_table(sp);
    const std::vector<Day> ages = lt.ages_through(days);

    std::vector<BigInt> births(static_cast<std::size_t>(days) + 1);
    births[0] = 1;
    for (Day d = 1; d <= days; ++d) {
      BigInt sum = 0;
      for (Day a : ages) {
        if (a > d) break;
        sum += births[static_cast<std::size_t>(d - a)];
      }
      births[static_cast<std::size_t>(d)] = std::move(sum);
    }

    // prefix[d + 1] = births[0] + ... + births[d]
    std::vector<BigInt> prefix(births.size() + 1);
    for (std::size_t d = 0; d < births.size(); ++d) prefix[d + 1] = prefix[d] + births[d];

    std::vector<BigInt> alive(births.size());
    for (Day d = 0; d <= days; ++d) {
      Day first = 0;
      if (auto death = lt.death_age()) first = std::max<Day>(0, d - *death);
      alive[static_cast<std::size_t>(d)] =
          prefix[static_cast<std::size_t>(d) + 1] - prefix[static_cast<std::size_t>(first)];
    }
    table.alive.push_back(std::move(alive));
  }
  return table;
}

struct IndividualRun {
  CensusTable census;
  /// Trees counted in the last completed census, including any dying that day.
  std::vector<Tree> trees;
};

/// Tree-by-tree execution of the daily schedule with exact rational accounts.
/// If the population would exceed `cap` the run stops before that day and the
/// census is marked truncated.
inline IndividualRun simulate_individuals(std::span<const TreeSpecies> species, Day days,
                                          std::optional<std::size_t> cap = std::nullopt) {
  if (days < 0) throw Error(Errc::InvalidArgument, "days must be non-negative");
  IndividualRun run;
  run.census.species.assign(species.begin(), species.end());
  run.census.alive.assign(species.size(), {});

  std::vector<Tree> trees;
  std::vector<Tree> scheduled;
  for (std::size_t s = 0; s < species.size(); ++s) scheduled.push_back(Tree{s, 3, 0, 0});

  for (Day d = 0; d <= days; ++d) {
    if (cap && trees.size() + scheduled.size() > *cap) {
      run.census.truncated = true;
      run.census.truncated_at = d;
      break;
    }
    for (auto& t : scheduled) {
      t.birth_day = d;
      trees.push_back(std::move(t));
    }
    scheduled.clear();

    std::vector<char> dying(trees.size(), 0);
    for (std::size_t i = 0; i < trees.size(); ++i) {
      const DayOutcome outcome = live_one_day(trees[i], species[trees[i].species].gene_number());
      for (int b = 0; b < outcome.births; ++b) scheduled.push_back(Tree{trees[i].species, 3, 0, d + 1});
      dying[i] = outcome.dies ? 1 : 0;
    }

    std::vector<BigInt> counts(species.size(), 0);
    for (const auto& t : trees) counts[t.species] += 1;
    for (std::size_t s = 0; s < species.size(); ++s) run.census.alive[s].push_back(counts[s]);

    if (d == days) break;
    std::vector<Tree> survivors;
    survivors.reserve(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) {
      if (!dying[i]) survivors.push_back(std::move(trees[i]));
    }
    trees = std::move(survivors);
  }
  run.trees = std::move(trees);
  return run;
}

}  // namespace prenelab::lifespan
