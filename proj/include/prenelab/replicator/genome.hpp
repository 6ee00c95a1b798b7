#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prenelab/core/error.hpp"

namespace prenelab::replicator {

inline constexpr std::array<char, 4> kAlphabet{'A', 'C', 'G', 'U'};

constexpr bool is_base(char c) noexcept { return c == 'A' || c == 'C' || c == 'G' || c == 'U'; }

constexpr int base_index(char c) noexcept {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'U': return 3;
    default: return -1;
  }
}

/// Half-open interval [begin, end) of sites.
struct Region {
  std::string name;
  std::size_t begin = 0;
  std::size_t end = 0;

  [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
  [[nodiscard]] bool contains(std::size_t site) const noexcept { return site >= begin && site < end; }

  friend bool operator==(const Region&, const Region&) = default;
};

/// Named, pairwise-disjoint regions over a sequence of fixed length.
class RegionMap {
 public:
  RegionMap(std::size_t length, std::vector<Region> regions) : length_(length), regions_(std::move(regions)) {
    std::vector<const Region*> sorted;
    for (const auto& r : regions_) {
      if (r.begin > r.end || r.end > length_) {
        throw Error(Errc::InvalidArgument, "region '" + r.name + "' is out of bounds");
      }
      sorted.push_back(&r);
    }
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->begin < b->begin; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i]->begin < sorted[i - 1]->end) {
        throw Error(Errc::InvalidArgument,
                    "regions '" + sorted[i - 1]->name + "' and '" + sorted[i]->name + "' overlap");
      }
    }
    for (std::size_t i = 0; i < regions_.size(); ++i) {
      for (std::size_t j = i + 1; j < regions_.size(); ++j) {
        if (regions_[i].name == regions_[j].name) {
          throw Error(Errc::InvalidArgument, "duplicate region name '" + regions_[i].name + "'");
        }
      }
    }
  }

  [[nodiscard]] std::size_t length() const noexcept { return length_; }
  [[nodiscard]] const std::vector<Region>& regions() const noexcept { return regions_; }

  [[nodiscard]] const Region* find(std::string_view name) const noexcept {
    for (const auto& r : regions_) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  friend bool operator==(const RegionMap&, const RegionMap&) = default;

 private:
  std::size_t length_;
  std::vector<Region> regions_;
};

inline constexpr std::string_view kCoat = "coat";

/// A sequence over {A, C, G, U} with a shared, immutable region map.
class Genome {
 public:
  Genome(std::string seq, std::shared_ptr<const RegionMap> regions)
      : seq_(std::move(seq)), regions_(std::move(regions)) {
    if (!regions_) regions_ = std::make_shared<const RegionMap>(seq_.size(), std::vector<Region>{});
    if (regions_->length() != seq_.size()) {
      throw Error(Errc::InvalidArgument, "region map length does not match sequence length");
    }
    for (char c : seq_) {
      if (!is_base(c)) throw Error(Errc::InvalidArgument, std::string("invalid base '") + c + "'");
    }
  }

  explicit Genome(std::string seq) : Genome(std::move(seq), nullptr) {}

  [[nodiscard]] const std::string& seq() const noexcept { return seq_; }
  [[nodiscard]] std::size_t size() const noexcept { return seq_.size(); }
  [[nodiscard]] const RegionMap& regions() const noexcept { return *regions_; }
  [[nodiscard]] const std::shared_ptr<const RegionMap>& region_map_ptr() const noexcept { return regions_; }

  [[nodiscard]] std::string_view region_view(const Region& r) const noexcept {
    return std::string_view(seq_).substr(r.begin, r.size());
  }

  [[nodiscard]] std::string_view region_view(std::string_view name) const {
    const Region* r = regions_->find(name);
    if (!r) throw Error(Errc::MissingRegion, "genome has no region '" + std::string(name) + "'");
    return region_view(*r);
  }

  /// Replaces the base at `site`; keeps the alphabet closed.
  void set_base(std::size_t site, char base) {
    if (!is_base(base)) throw Error(Errc::InvalidArgument, std::string("invalid base '") + base + "'");
    seq_.at(site) = base;
  }

  friend bool operator==(const Genome& a, const Genome& b) {
    return a.seq_ == b.seq_ && (a.regions_ == b.regions_ || *a.regions_ == *b.regions_);
  }

 private:
  std::string seq_;
  std::shared_ptr<const RegionMap> regions_;
};

/// The immune signature of a genome: its whole coat region.
inline std::string coat_signature(const Genome& genome) { return std::string(genome.region_view(kCoat)); }

}  // namespace prenelab::replicator
