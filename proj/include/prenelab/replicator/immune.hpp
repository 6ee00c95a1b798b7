#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "prenelab/core/rng.hpp"
#include "prenelab/replicator/mutation.hpp"

namespace prenelab::replicator {

using Day = std::int64_t;

/// Kill-on-sight signature for one exact coat sequence.
struct Poster {
  std::string signature;
  Day created_day = 0;
  Day activation_day = 0;
  double kill_probability = 0.0;

  [[nodiscard]] bool active(Day day) const noexcept { return day >= activation_day; }
};

struct Virion {
  std::uint64_t id = 0;
  std::uint64_t parent = 0;  // 0 for founders
  Genome genome;
  std::string coat;
};

struct ImmuneParams {
  Day delay = 3;
  double kill_probability = 0.5;
};

enum class EscapeEventKind { Birth, Poster, Kill, Cull };

struct EscapeEvent {
  EscapeEventKind kind{};
  Day day = 0;
  std::uint64_t id = 0;
  std::uint64_t parent = 0;
  std::vector<std::size_t> sites;
  std::string signature;
  Day activation_day = 0;
};

using EventSink = std::function<void(const EscapeEvent&)>;

struct PopulationState {
  std::vector<Virion> virions;
  Day day = 0;
  std::size_t capacity = 0;
  ImmuneParams immune;
  std::vector<Poster> posters;
  std::unordered_map<std::string, std::size_t> poster_by_signature;
  Rng rng;
  std::uint64_t next_id = 1;

  void add_founder(Genome genome) {
    std::string coat = coat_signature(genome);
    virions.push_back(Virion{next_id++, 0, std::move(genome), std::move(coat)});
  }
};

/// Every virion is replaced by `offspring` copies made with `profile`.
inline void replication_step(PopulationState& state, const MutationProfile& profile, std::size_t offspring,
                             const EventSink& sink = {}) {
  std::vector<Virion> next;
  next.reserve(state.virions.size() * offspring);
  for (const auto& parent : state.virions) {
    for (std::size_t k = 0; k < offspring; ++k) {
      Replication rep = replicate(parent.genome, profile, state.rng);
      Virion child{state.next_id++, parent.id, std::move(rep.genome), {}};
      child.coat = coat_signature(child.genome);
      if (sink) {
        sink(EscapeEvent{EscapeEventKind::Birth, state.day, child.id, parent.id, std::move(rep.mutated_sites), {}, 0});
      }
      next.push_back(std::move(child));
    }
  }
  state.virions = std::move(next);
}

/// New coats get a poster active from day + delay; each active poster then
/// kills each virion carrying its exact coat with its kill probability.
inline void immune_step(PopulationState& state, const EventSink& sink = {}) {
  for (const auto& v : state.virions) {
    if (state.poster_by_signature.contains(v.coat)) continue;
    Poster poster{v.coat, state.day, state.day + state.immune.delay, state.immune.kill_probability};
    if (sink) sink(EscapeEvent{EscapeEventKind::Poster, state.day, 0, 0, {}, poster.signature, poster.activation_day});
    state.poster_by_signature.emplace(v.coat, state.posters.size());
    state.posters.push_back(std::move(poster));
  }
  std::vector<Virion> survivors;
  survivors.reserve(state.virions.size());
  for (auto& v : state.virions) {
    const Poster& poster = state.posters[state.poster_by_signature.at(v.coat)];
    if (poster.active(state.day) && bernoulli(state.rng, poster.kill_probability)) {
      if (sink) sink(EscapeEvent{EscapeEventKind::Kill, state.day, v.id, v.parent, {}, poster.signature, 0});
      continue;
    }
    survivors.push_back(std::move(v));
  }
  state.virions = std::move(survivors);
}

/// Uniform random bottleneck down to capacity; survivors keep their order.
inline void capacity_cull(PopulationState& state, const EventSink& sink = {}) {
  if (state.virions.size() <= state.capacity) return;
  const auto keep = sample_without_replacement(state.rng, state.virions.size(), state.capacity);
  std::vector<Virion> kept;
  kept.reserve(keep.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < state.virions.size(); ++i) {
    if (k < keep.size() && keep[k] == i) {
      kept.push_back(std::move(state.virions[i]));
      ++k;
    } else if (sink) {
      sink(EscapeEvent{EscapeEventKind::Cull, state.day, state.virions[i].id, state.virions[i].parent, {}, {}, 0});
    }
  }
  state.virions = std::move(kept);
}

}  // namespace prenelab::replicator
