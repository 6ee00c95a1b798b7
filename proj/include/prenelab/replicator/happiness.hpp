#pragma once

#include <span>
#include <string>
#include <vector>

#include "prenelab/core/rng.hpp"
#include "prenelab/replicator/mutation.hpp"

namespace prenelab::replicator {

/// A region is 'happy' in an offspring when it came through unchanged,
/// i.e. the birth added one copy of it.
struct RegionHappiness {
  std::string region;
  std::size_t happy = 0;
  std::size_t offspring = 0;
};

inline std::vector<RegionHappiness> happiness(const Genome& parent, std::span<const Genome> offspring) {
  for (const auto& child : offspring) {
    if (!(child.regions() == parent.regions())) {
      throw Error(Errc::RegionMapMismatch, "offspring region map differs from the parent's");
    }
  }
  std::vector<RegionHappiness> out;
  for (const auto& region : parent.regions().regions()) {
    RegionHappiness row{region.name, 0, offspring.size()};
    const auto reference = parent.region_view(region);
    for (const auto& child : offspring) {
      if (child.region_view(region) == reference) ++row.happy;
    }
    out.push_back(std::move(row));
  }
  return out;
}

/// Breeds `count` offspring of `parent` and tallies them.
inline std::vector<RegionHappiness> happiness_table(const Genome& parent, const MutationProfile& profile,
                                                    std::size_t count, Rng& rng) {
  std::vector<Genome> children;
  children.reserve(count);
  for (std::size_t i = 0; i < count; ++i) children.push_back(replicate(parent, profile, rng).genome);
  return happiness(parent, children);
}

}  // namespace prenelab::replicator
