#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "prenelab/core/rng.hpp"
#include "prenelab/replicator/genome.hpp"

namespace prenelab::replicator {

/// Per-site substitution probabilities. Sites are also kept as maximal runs of
/// equal rate so replication costs O(mutations) rather than O(length).
class MutationProfile {
 public:
  struct Run {
    std::size_t begin;
    std::size_t end;
    double rate;
  };

  explicit MutationProfile(std::vector<double> rates) : rates_(std::move(rates)) {
    for (double r : rates_) {
      if (!(r >= 0.0 && r < 1.0)) throw Error(Errc::InvalidArgument, "site mutation rate must lie in [0, 1)");
    }
    for (std::size_t i = 0; i < rates_.size();) {
      std::size_t j = i + 1;
      while (j < rates_.size() && rates_[j] == rates_[i]) ++j;
      runs_.push_back(Run{i, j, rates_[i]});
      i = j;
    }
  }

  static MutationProfile uniform(std::size_t length, double rate) {
    return MutationProfile(std::vector<double>(length, rate));
  }

  /// `base` everywhere, times factor[name] inside each listed region.
  static MutationProfile region_multiplier(const RegionMap& regions, double base,
                                           const std::map<std::string, double>& factor) {
    std::vector<double> rates(regions.length(), base);
    for (const auto& [name, f] : factor) {
      const Region* r = regions.find(name);
      if (!r) throw Error(Errc::MissingRegion, "no region '" + name + "' for rate multiplier");
      for (std::size_t i = r->begin; i < r->end; ++i) rates[i] = base * f;
    }
    return MutationProfile(std::move(rates));
  }

  struct Tier {
    std::size_t end;  // exclusive
    double rate;
  };

  /// Consecutive tiers from the core (site 0) outward; rates must not
  /// decrease towards the boundary and the last tier must end at `length`.
  static MutationProfile shells(std::size_t length, const std::vector<Tier>& tiers) {
    std::vector<double> rates;
    rates.reserve(length);
    std::size_t begin = 0;
    double prev_rate = 0.0;
    for (const auto& tier : tiers) {
      if (tier.end < begin || tier.end > length) throw Error(Errc::InvalidArgument, "shell tiers out of order");
      if (tier.rate < prev_rate) throw Error(Errc::InvalidArgument, "shell rates must be non-decreasing outward");
      rates.insert(rates.end(), tier.end - begin, tier.rate);
      begin = tier.end;
      prev_rate = tier.rate;
    }
    if (begin != length) throw Error(Errc::InvalidArgument, "shell tiers must cover the whole genome");
    return MutationProfile(std::move(rates));
  }

  [[nodiscard]] std::size_t size() const noexcept { return rates_.size(); }
  [[nodiscard]] double rate(std::size_t site) const { return rates_.at(site); }
  [[nodiscard]] const std::vector<double>& rates() const noexcept { return rates_; }
  [[nodiscard]] const std::vector<Run>& runs() const noexcept { return runs_; }

 private:
  std::vector<double> rates_;
  std::vector<Run> runs_;
};

struct Replication {
  Genome genome;
  std::vector<std::size_t> mutated_sites;
};

/// Copies `parent`, substituting each site independently with its profile
/// probability. A substituted site takes one of the other three bases
/// uniformly at random.
inline Replication replicate(const Genome& parent, const MutationProfile& profile, Rng& rng) {
  if (profile.size() != parent.size()) {
    throw Error(Errc::ProfileLengthMismatch, "profile has " + std::to_string(profile.size()) +
                                                 " sites, genome has " + std::to_string(parent.size()));
  }
  Replication out{parent, {}};
  for (const auto& run : profile.runs()) {
    if (run.rate <= 0.0) continue;
    std::size_t site = run.begin;
    for (;;) {
      const std::uint64_t skip = geometric_failures(rng, run.rate);
      if (skip >= run.end - site) break;
      site += static_cast<std::size_t>(skip);
      const int current = base_index(out.genome.seq()[site]);
      int replacement = static_cast<int>(uniform_below(rng, 3));
      if (replacement >= current) ++replacement;
      out.genome.set_base(site, kAlphabet[static_cast<std::size_t>(replacement)]);
      out.mutated_sites.push_back(site);
      ++site;
    }
  }
  return out;
}

}  // namespace prenelab::replicator
