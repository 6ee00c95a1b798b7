#pragma once

#include <string>
#include <vector>

#include "prenelab/cli/config.hpp"
#include "prenelab/replicator/escape.hpp"
#include "prenelab/soup/experiment.hpp"

namespace prenelab::cli {

namespace detail {

inline std::vector<KeySpec> common_keys() {
  return {
      {"seed", ValueType::UInt, std::uint64_t{0}, {}, {}, {}},
      {"format", ValueType::String, std::string("csv"), {}, {}, {"csv", "jsonl"}},
      {"out", ValueType::String, std::string(), {}, {}, {}},
  };
}

inline Schema with_common(std::string command, std::vector<KeySpec> keys) {
  for (auto& k : common_keys()) keys.push_back(std::move(k));
  return Schema{std::move(command), std::move(keys)};
}

inline std::vector<Rational> rationals(std::initializer_list<Rational> xs) { return xs; }

}  // namespace detail

inline const Schema& lifespan_table_schema() {
  static const Schema s = detail::with_common(
      "lifespan table",
      {
          {"days", ValueType::UInt, std::uint64_t{30}, 0.0, 100000.0, {}},
          {"g", ValueType::RationalList, detail::rationals({Rational(1), Rational(1, 2)}), 0.0, 1.0, {}},
      });
  return s;
}

inline const Schema& lifespan_sweep_schema() {
  static const Schema s = detail::with_common(
      "lifespan sweep",
      {
          {"steps", ValueType::UInt, std::uint64_t{20}, 1.0, 100000.0, {}},
          {"g", ValueType::RationalList, std::vector<Rational>{}, 0.0, 1.0, {}},
      });
  return s;
}

inline const Schema& lifespan_growth_schema() {
  static const Schema s = detail::with_common(
      "lifespan growth",
      {
          {"g", ValueType::RationalList, detail::rationals({Rational(1, 2)}), 0.0, 1.0, {}},
          {"from_day", ValueType::UInt, std::uint64_t{60}, 0.0, 100000.0, {}},
          {"days", ValueType::UInt, std::uint64_t{80}, 1.0, 100000.0, {}},
      });
  return s;
}

inline const Schema& replicator_run_schema() {
  using replicator::EscapeConfig;
  static const EscapeConfig d;
  static const Schema s = detail::with_common(
      "replicator run",
      {
          {"genome_length", ValueType::UInt, std::uint64_t{d.genome_length}, 1.0, 1e7, {}},
          {"coat_begin", ValueType::UInt, std::uint64_t{d.coat_begin}, {}, {}, {}},
          {"coat_end", ValueType::UInt, std::uint64_t{d.coat_end}, 1.0, {}, {}},
          {"founders", ValueType::UInt, std::uint64_t{d.founders}, 1.0, {}, {}},
          {"offspring", ValueType::UInt, std::uint64_t{d.offspring_per_day}, 1.0, 1000.0, {}},
          {"capacity", ValueType::UInt, std::uint64_t{d.capacity}, 1.0, 1e7, {}},
          {"immune_delay", ValueType::UInt, static_cast<std::uint64_t>(d.immune_delay), {}, 1e6, {}},
          {"kill_probability", ValueType::Real, d.kill_probability, 0.0, 1.0, {}},
          {"days", ValueType::UInt, static_cast<std::uint64_t>(d.horizon), {}, 1e6, {}},
          {"seeds", ValueType::UInt, std::uint64_t{d.seeds}, 1.0, 1e6, {}},
          {"profiles", ValueType::StringList, std::vector<std::string>{"hot_coat", "uniform"}, {}, {},
           {"hot_coat", "uniform"}},
          {"base_rate", ValueType::Real, d.base_rate, 0.0, 1.0, {}},
          {"coat_multiplier", ValueType::Real, d.coat_multiplier, 0.0, {}, {}},
          {"uniform_rate", ValueType::Real, d.uniform_rate, 0.0, 1.0, {}},
          {"log_events", ValueType::String, std::string("false"), {}, {}, {"true", "false"}},
      });
  return s;
}

inline const Schema& replicator_happiness_schema() {
  static const Schema s = detail::with_common(
      "replicator happiness",
      {
          {"genome_length", ValueType::UInt, std::uint64_t{100}, 1.0, 1e7, {}},
          {"core_end", ValueType::UInt, std::uint64_t{50}, {}, {}, {}},
          {"core_rate", ValueType::Real, 0.0, 0.0, 1.0, {}},
          {"boundary_rate", ValueType::Real, 0.05, 0.0, 1.0, {}},
          {"offspring", ValueType::UInt, std::uint64_t{100}, 1.0, 1e7, {}},
      });
  return s;
}

inline const Schema& soup_run_schema() {
  static const Schema s = [] {
    const soup::CatalysisConfig d;
    std::vector<std::string> polymers;
    for (const auto& [seq, count] : d.initial_polymers) polymers.push_back(seq + ":" + std::to_string(count));
    return detail::with_common(
        "soup run",
        {
            {"mode", ValueType::String, std::string("series"), {}, {}, {"series", "experiment"}},
            {"arm", ValueType::String, std::string("treatment"), {}, {}, {"treatment", "control"}},
            {"replicate", ValueType::UInt, std::uint64_t{0}, {}, {}, {}},
            {"replicates", ValueType::UInt, std::uint64_t{d.replicates}, 1.0, 1e6, {}},
            {"free_a", ValueType::UInt, std::uint64_t{d.initial_free[0]}, {}, 1e9, {}},
            {"free_c", ValueType::UInt, std::uint64_t{d.initial_free[1]}, {}, 1e9, {}},
            {"free_g", ValueType::UInt, std::uint64_t{d.initial_free[2]}, {}, 1e9, {}},
            {"free_u", ValueType::UInt, std::uint64_t{d.initial_free[3]}, {}, 1e9, {}},
            {"polymers", ValueType::StringList, polymers, {}, {}, {}},
            {"motif", ValueType::String, d.motif, {}, {}, {}},
            {"k_on", ValueType::Real, d.rates.k_on, 0.0, {}, {}},
            {"k_off", ValueType::Real, d.rates.k_off, 0.0, {}, {}},
            {"k_cat", ValueType::Real, d.rates.k_cat, 0.0, {}, {}},
            {"horizon", ValueType::Real, d.horizon, 0.0, 1e9, {}},
            {"sample_dt", ValueType::Real, d.sample_dt, 1e-9, {}, {}},
        });
  }();
  return s;
}

inline const Schema& registry_ingest_schema() {
  static const Schema s = detail::with_common("registry ingest", {{"log", ValueType::String, std::string(), {}, {}, {}}});
  return s;
}

inline const Schema& registry_query_schema() {
  static const Schema s = detail::with_common(
      "registry query",
      {
          {"log", ValueType::String, std::string(), {}, {}, {}},
          {"what", ValueType::String, std::string("copies"), {}, {}, {"copies", "lineage", "longest_shared"}},
          {"content", ValueType::String, std::string(), {}, {}, {}},
          {"substrate", ValueType::String, std::string("computer"), {}, {}, {}},
          {"at", ValueType::Int, std::int64_t{-1}, -1.0, {}, {}},
      });
  return s;
}

/// Every leaf command, in help order.
inline std::vector<const Schema*> all_schemas() {
  return {&lifespan_table_schema(), &lifespan_sweep_schema(),  &lifespan_growth_schema(),
          &replicator_run_schema(), &replicator_happiness_schema(), &soup_run_schema(),
          &registry_ingest_schema(), &registry_query_schema()};
}

}  // namespace prenelab::cli
