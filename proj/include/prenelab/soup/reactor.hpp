#pragma once

// Well-mixed reactor of A/C/G/U monomers and linear polymers. Monomers attach
// to and detach from the tail end only. A free monomer doubles as a length-1
// seed so dimers can nucleate. P-polymers (contain the motif, do not end in
// AAA) chop the tail A off polymers ending in AAA.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "prenelab/core/error.hpp"
#include "prenelab/core/rng.hpp"

namespace prenelab::soup {

inline constexpr std::array<char, 4> kLetters{'A', 'C', 'G', 'U'};
inline constexpr std::string_view kDefaultMotif = "GAAG";

constexpr int letter_index(char c) noexcept {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'U': return 3;
    default: return -1;
  }
}

using Counts = std::array<std::uint64_t, 4>;

struct Rates {
  double k_on = 0.0;
  double k_off = 0.0;
  double k_cat = 0.0;

  friend bool operator==(const Rates&, const Rates&) = default;
};

inline bool ends_in_aaa(std::string_view seq) noexcept { return seq.size() >= 3 && seq.ends_with("AAA"); }

inline bool is_p_polymer(std::string_view seq, std::string_view motif) noexcept {
  return seq.size() >= 2 && seq.find(motif) != std::string_view::npos && !ends_in_aaa(seq);
}

struct ReactorState {
  Counts free{};
  /// Polymers of length >= 2; zero counts are never stored.
  std::map<std::string, std::uint64_t> species;
  Rates rates;
  std::string motif{kDefaultMotif};
  double time = 0.0;

  [[nodiscard]] bool is_catalyst(std::string_view seq) const noexcept { return is_p_polymer(seq, motif); }

  void add_polymer(const std::string& seq, std::uint64_t count = 1) {
    if (seq.size() < 2) throw Error(Errc::InvalidArgument, "polymers have length >= 2");
    for (char c : seq) {
      if (letter_index(c) < 0) throw Error(Errc::InvalidArgument, "polymer letters must be A, C, G or U");
    }
    if (count > 0) species[seq] += count;
  }

  void validate() const {
    if (!(rates.k_on >= 0.0 && rates.k_off >= 0.0 && rates.k_cat >= 0.0)) {
      throw Error(Errc::InvalidArgument, "rate constants must be non-negative");
    }
    if (motif.empty()) throw Error(Errc::InvalidArgument, "catalyst motif must be non-empty");
  }

  [[nodiscard]] std::uint64_t total_free() const noexcept { return free[0] + free[1] + free[2] + free[3]; }

  friend bool operator==(const ReactorState&, const ReactorState&) = default;
};

/// Per-letter totals over free monomers and polymers; conserved by every reaction.
inline Counts letter_totals(const ReactorState& state) {
  Counts totals = state.free;
  for (const auto& [seq, count] : state.species) {
    for (char c : seq) totals[static_cast<std::size_t>(letter_index(c))] += count;
  }
  return totals;
}

enum class ReactionKind { Extend, Detach, Catalyze };

/// Extend: `species` (a polymer, or a single letter for a free-monomer seed)
/// gains `letter` at its tail. Detach: `species` loses its tail letter.
/// Catalyze: `species` is the catalyst, `target` loses its tail A.
struct Reaction {
  ReactionKind kind{};
  std::string species;
  char letter = 0;
  std::string target;
  double propensity = 0.0;

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

/// Calls visit(kind, species, letter, target, propensity) for every reaction
/// with positive propensity, in a fixed canonical order.
template <typename Visit>
void for_each_reaction(const ReactorState& state, Visit&& visit) {
  const auto& r = state.rates;
  static const std::string kNone;
  if (r.k_on > 0.0) {
    for (std::size_t x = 0; x < 4; ++x) {
      if (state.free[x] == 0) continue;
      const std::string seed(1, kLetters[x]);
      for (std::size_t y = 0; y < 4; ++y) {
        const std::uint64_t partners = state.free[y] - (x == y ? 1 : 0);
        if (partners == 0) continue;
        visit(ReactionKind::Extend, seed, kLetters[y], kNone,
              r.k_on * static_cast<double>(state.free[x]) * static_cast<double>(partners));
      }
    }
    for (const auto& [seq, count] : state.species) {
      for (std::size_t y = 0; y < 4; ++y) {
        if (state.free[y] == 0) continue;
        visit(ReactionKind::Extend, seq, kLetters[y], kNone,
              r.k_on * static_cast<double>(count) * static_cast<double>(state.free[y]));
      }
    }
  }
  if (r.k_off > 0.0) {
    for (const auto& [seq, count] : state.species) {
      visit(ReactionKind::Detach, seq, char{0}, kNone, r.k_off * static_cast<double>(count));
    }
  }
  if (r.k_cat > 0.0) {
    std::vector<const std::pair<const std::string, std::uint64_t>*> targets;
    for (const auto& entry : state.species) {
      if (ends_in_aaa(entry.first)) targets.push_back(&entry);
    }
    if (!targets.empty()) {
      for (const auto& [cat, cat_count] : state.species) {
        if (!state.is_catalyst(cat)) continue;
        for (const auto* t : targets) {
          visit(ReactionKind::Catalyze, cat, char{0}, t->first,
                r.k_cat * static_cast<double>(cat_count) * static_cast<double>(t->second));
        }
      }
    }
  }
}

inline std::vector<Reaction> enumerate_reactions(const ReactorState& state) {
  std::vector<Reaction> out;
  for_each_reaction(state, [&](ReactionKind kind, const std::string& species, char letter, const std::string& target,
                               double propensity) {
    out.push_back(Reaction{kind, species, letter, target, propensity});
  });
  return out;
}

namespace detail {

inline void take_polymer(ReactorState& state, const std::string& seq) {
  auto it = state.species.find(seq);
  if (it == state.species.end() || it->second == 0) {
    throw Error(Errc::InvalidArgument, "no polymer '" + seq + "' to react");
  }
  if (--it->second == 0) state.species.erase(it);
}

inline void take_free(ReactorState& state, char letter) {
  auto& n = state.free[static_cast<std::size_t>(letter_index(letter))];
  if (n == 0) throw Error(Errc::InvalidArgument, std::string("no free ") + letter + " monomer");
  --n;
}

/// Puts a fragment back: length 1 is a free monomer, longer is a polymer.
inline void give(ReactorState& state, const std::string& seq) {
  if (seq.size() == 1) {
    ++state.free[static_cast<std::size_t>(letter_index(seq[0]))];
  } else {
    ++state.species[seq];
  }
}

}  // namespace detail

/// Whether the reactants are present, so `apply` would succeed.
inline bool feasible(const ReactorState& state, ReactionKind kind, const std::string& species, char letter,
                     const std::string& target) {
  auto polymer = [&](const std::string& seq) {
    auto it = state.species.find(seq);
    return it != state.species.end() && it->second > 0;
  };
  switch (kind) {
    case ReactionKind::Extend: {
      const int y = letter_index(letter);
      if (y < 0) return false;
      if (species.size() == 1) {
        const int x = letter_index(species[0]);
        if (x < 0) return false;
        return x == y ? state.free[static_cast<std::size_t>(x)] >= 2
                      : state.free[static_cast<std::size_t>(x)] >= 1 && state.free[static_cast<std::size_t>(y)] >= 1;
      }
      return polymer(species) && state.free[static_cast<std::size_t>(y)] >= 1;
    }
    case ReactionKind::Detach:
      return species.size() >= 2 && polymer(species);
    case ReactionKind::Catalyze:
      return state.is_catalyst(species) && polymer(species) && ends_in_aaa(target) && polymer(target);
  }
  return false;
}

/// Applies one reaction; throws without modifying `state` if infeasible.
inline void apply(ReactorState& state, ReactionKind kind, const std::string& species, char letter,
                  const std::string& target) {
  if (kind == ReactionKind::Catalyze && (!state.is_catalyst(species) || ends_in_aaa(species))) {
    throw Error(Errc::InvalidArgument, "'" + species + "' is not a P-polymer");
  }
  if (!feasible(state, kind, species, letter, target)) {
    throw Error(Errc::InvalidArgument, "reactants missing for reaction on '" + species + "'");
  }
  switch (kind) {
    case ReactionKind::Extend:
      if (species.size() == 1) {
        detail::take_free(state, species[0]);
      } else {
        detail::take_polymer(state, species);
      }
      detail::take_free(state, letter);
      detail::give(state, species + letter);
      break;
    case ReactionKind::Detach:
      detail::take_polymer(state, species);
      detail::give(state, species.substr(0, species.size() - 1));
      detail::give(state, species.substr(species.size() - 1));
      break;
    case ReactionKind::Catalyze:
      detail::take_polymer(state, target);
      detail::give(state, target.substr(0, target.size() - 1));
      ++state.free[0];
      break;
  }
}

inline void apply(ReactorState& state, const Reaction& reaction) {
  apply(state, reaction.kind, reaction.species, reaction.letter, reaction.target);
}

}  // namespace prenelab::soup
