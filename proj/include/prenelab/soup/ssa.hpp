#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "prenelab/soup/reactor.hpp"

namespace prenelab::soup {

inline double total_propensity(const ReactorState& state) {
  double total = 0.0;
  for_each_reaction(state, [&](ReactionKind, const std::string&, char, const std::string&, double a) { total += a; });
  return total;
}

struct StepResult {
  ReactionKind kind{};
  double waiting_time = 0.0;
  double total_propensity = 0.0;
};

namespace detail {

/// Draws the next event; applies it only if it happens at or before
/// `horizon`, after calling before_apply(event_time). Returns nullopt (state
/// untouched) otherwise.
template <typename BeforeApply>
std::optional<StepResult> step_until(ReactorState& state, Rng& rng, double horizon, BeforeApply&& before_apply) {
  const double a0 = total_propensity(state);
  if (!(a0 > 0.0)) throw Error(Errc::Quiescent, "no reaction has positive propensity");
  const double dt = exponential(rng, a0);
  const double pick = uniform01(rng) * a0;
  if (state.time + dt > horizon) return std::nullopt;

  struct Chosen {
    ReactionKind kind;
    std::string species;
    char letter;
    std::string target;
  };
  std::optional<Chosen> chosen;
  std::optional<Chosen> last;
  double acc = 0.0;
  for_each_reaction(state, [&](ReactionKind kind, const std::string& species, char letter, const std::string& target,
                               double a) {
    if (chosen) return;
    acc += a;
    if (pick < acc) {
      chosen = Chosen{kind, species, letter, target};
    } else {
      last = Chosen{kind, species, letter, target};
    }
  });
  // Rounding can leave pick == acc after the final channel.
  if (!chosen) chosen = std::move(last);
  before_apply(state.time + dt);
  apply(state, chosen->kind, chosen->species, chosen->letter, chosen->target);
  state.time += dt;
  return StepResult{chosen->kind, dt, a0};
}

}  // namespace detail

/// One Gillespie direct-method event: exponential waiting time with rate a0,
/// reaction chosen with probability proportional to its propensity.
inline StepResult step(ReactorState& state, Rng& rng) {
  return *detail::step_until(state, rng, std::numeric_limits<double>::infinity(), [](double) {});
}

/// Fixed-step tau-leap: each channel fires Poisson(a * tau) times, applied in
/// canonical order and skipped once infeasible. Every firing is a whole
/// reaction, so mass is conserved exactly; only event counts are approximate.
inline std::size_t tau_leap_step(ReactorState& state, double tau, Rng& rng) {
  const auto reactions = enumerate_reactions(state);
  std::size_t fired = 0;
  for (const auto& r : reactions) {
    const std::uint64_t k = poisson(rng, r.propensity * tau);
    for (std::uint64_t i = 0; i < k && feasible(state, r.kind, r.species, r.letter, r.target); ++i) {
      apply(state, r);
      ++fired;
    }
  }
  state.time += tau;
  return fired;
}

struct Sample {
  double t = 0.0;
  Counts free{};
  std::size_t n_species = 0;
  std::uint64_t n_p = 0;
  std::uint64_t n_aaa_enders = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

inline Sample observe(const ReactorState& state, double t) {
  Sample s{t, state.free, state.species.size(), 0, 0};
  for (const auto& [seq, count] : state.species) {
    if (state.is_catalyst(seq)) s.n_p += count;
    if (ends_in_aaa(seq)) s.n_aaa_enders += count;
  }
  return s;
}

struct Trajectory {
  std::vector<Sample> samples;
  std::uint64_t events = 0;
  bool quiescent = false;
  ReactorState final_state;
};

/// Runs SSA to `horizon`, sampling on the grid 0, dt, 2dt, ... <= horizon.
/// `on_event` runs after every applied reaction.
template <typename OnEvent>
Trajectory run_ssa(ReactorState state, double horizon, double sample_dt, Rng& rng, OnEvent&& on_event) {
  state.validate();
  if (!(sample_dt > 0.0)) throw Error(Errc::InvalidArgument, "sample_dt must be positive");
  Trajectory traj;
  std::uint64_t next_sample = 0;
  auto grid = [&](std::uint64_t i) { return static_cast<double>(i) * sample_dt; };
  auto emit_until = [&](double t_exclusive) {
    while (grid(next_sample) <= horizon && grid(next_sample) < t_exclusive) {
      traj.samples.push_back(observe(state, grid(next_sample)));
      ++next_sample;
    }
  };
  for (;;) {
    if (!(total_propensity(state) > 0.0)) {
      traj.quiescent = true;
      break;
    }
    if (!detail::step_until(state, rng, horizon, emit_until)) break;
    ++traj.events;
    on_event(state);
  }
  emit_until(std::numeric_limits<double>::infinity());
  traj.final_state = std::move(state);
  return traj;
}

inline Trajectory run_ssa(ReactorState state, double horizon, double sample_dt, Rng& rng) {
  return run_ssa(std::move(state), horizon, sample_dt, rng, [](const ReactorState&) {});
}

}  // namespace prenelab::soup
