#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "prenelab/core/parallel.hpp"
#include "prenelab/core/stats.hpp"
#include "prenelab/replicator/immune.hpp"

namespace prenelab::replicator {

enum class ProfileKind { HotCoat, Uniform };

inline std::string_view to_string(ProfileKind kind) {
  return kind == ProfileKind::HotCoat ? "hot_coat" : "uniform";
}

inline constexpr double kHivErrorRate = 1.0 / 2000.0;
inline constexpr double kHumanErrorRate = 1e-9;

struct EscapeConfig {
  std::size_t genome_length = 300;
  std::size_t coat_begin = 0;
  std::size_t coat_end = 30;
  std::size_t founders = 1;
  std::size_t offspring_per_day = 4;
  std::size_t capacity = 200;
  Day immune_delay = 3;
  double kill_probability = 0.5;
  Day horizon = 60;
  std::uint64_t master_seed = 0;
  std::size_t seeds = 100;
  ProfileKind profile = ProfileKind::HotCoat;
  double base_rate = kHivErrorRate;
  double coat_multiplier = 10.0;
  double uniform_rate = kHumanErrorRate;

  /// Throws InvalidConfig naming the first offending field.
  void validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
      throw Error(Errc::InvalidConfig, field + ": " + why);
    };
    if (genome_length == 0) fail("genome_length", "must be positive");
    if (coat_end > genome_length) fail("coat_end", "exceeds genome_length");
    if (coat_begin >= coat_end) fail("coat_begin", "coat region must be non-empty");
    if (founders == 0) fail("founders", "must be positive");
    if (capacity == 0) fail("capacity", "must be positive");
    if (founders > capacity) fail("founders", "exceeds capacity");
    if (offspring_per_day == 0) fail("offspring_per_day", "must be positive");
    if (immune_delay < 0) fail("immune_delay", "must be non-negative");
    if (!(kill_probability >= 0.0 && kill_probability <= 1.0)) fail("kill_probability", "must lie in [0, 1]");
    if (horizon < 0) fail("horizon", "must be non-negative");
    if (!(base_rate >= 0.0 && base_rate < 1.0)) fail("base_rate", "must lie in [0, 1)");
    if (!(coat_multiplier >= 0.0 && base_rate * coat_multiplier < 1.0)) {
      fail("coat_multiplier", "coat rate must lie in [0, 1)");
    }
    if (!(uniform_rate >= 0.0 && uniform_rate < 1.0)) fail("uniform_rate", "must lie in [0, 1)");
  }

  [[nodiscard]] std::shared_ptr<const RegionMap> region_map() const {
    std::vector<Region> regions{{std::string(kCoat), coat_begin, coat_end}};
    if (coat_end < genome_length) regions.push_back({"polymerase", coat_end, genome_length});
    return std::make_shared<const RegionMap>(genome_length, std::move(regions));
  }

  [[nodiscard]] MutationProfile mutation_profile(const RegionMap& regions) const {
    if (profile == ProfileKind::Uniform) return MutationProfile::uniform(genome_length, uniform_rate);
    return MutationProfile::region_multiplier(regions, base_rate, {{std::string(kCoat), coat_multiplier}});
  }
};

struct SeedReport {
  std::uint64_t seed_index = 0;
  std::optional<Day> extinction_day;
  std::size_t peak_population = 0;

  /// Extinction day, or horizon + 1 for lineages alive at the horizon.
  [[nodiscard]] Day survival(Day horizon) const { return extinction_day.value_or(horizon + 1); }
};

struct EscapeReport {
  EscapeConfig config;
  std::vector<SeedReport> seeds;

  [[nodiscard]] std::vector<double> survival_days() const {
    std::vector<double> out;
    for (const auto& s : seeds) out.push_back(static_cast<double>(s.survival(config.horizon)));
    return out;
  }
};

inline Genome random_genome(Rng& rng, std::size_t length, std::shared_ptr<const RegionMap> regions) {
  std::string seq(length, 'A');
  for (auto& c : seq) c = kAlphabet[static_cast<std::size_t>(uniform_below(rng, 4))];
  return Genome(std::move(seq), std::move(regions));
}

/// One host infection. Day 0 holds the founders; each later day runs
/// replication, the immune step and the capacity cull, until extinction or
/// the horizon. The founder sequence is drawn first from the seed's stream,
/// so runs that differ only in profile share founders.
inline SeedReport run_escape_seed(const EscapeConfig& config, std::uint64_t seed_index, const EventSink& sink = {}) {
  config.validate();
  const auto regions = config.region_map();
  const MutationProfile profile = config.mutation_profile(*regions);

  PopulationState state;
  state.capacity = config.capacity;
  state.immune = ImmuneParams{config.immune_delay, config.kill_probability};
  state.rng = derive_stream(config.master_seed, seed_index);
  const Genome founder = random_genome(state.rng, config.genome_length, regions);
  for (std::size_t i = 0; i < config.founders; ++i) state.add_founder(founder);

  SeedReport report{seed_index, std::nullopt, state.virions.size()};
  while (state.day < config.horizon) {
    ++state.day;
    replication_step(state, profile, config.offspring_per_day, sink);
    immune_step(state, sink);
    capacity_cull(state, sink);
    report.peak_population = std::max(report.peak_population, state.virions.size());
    if (state.virions.empty()) {
      report.extinction_day = state.day;
      break;
    }
  }
  return report;
}

inline EscapeReport run_escape_experiment(const EscapeConfig& config) {
  config.validate();
  EscapeReport report{config, std::vector<SeedReport>(config.seeds)};
  parallel_for(config.seeds, [&](std::size_t i) { report.seeds[i] = run_escape_seed(config, i); });
  return report;
}

struct EscapeComparison {
  double median_first = 0.0;
  double median_second = 0.0;
  SignTest sign;
};

/// Paired comparison of survival time: does `first` outlast `second`?
inline EscapeComparison compare_escape(const EscapeReport& first, const EscapeReport& second) {
  const auto a = first.survival_days();
  const auto b = second.survival_days();
  return EscapeComparison{median(a), median(b), sign_test(a, b)};
}

}  // namespace prenelab::replicator
