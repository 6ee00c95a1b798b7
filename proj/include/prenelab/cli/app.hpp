#pragma once

// In-process command-line driver. run_cli() is what the prenelab binary
// calls; tests call it directly with string streams.
//
// Exit codes: 0 success, 1 IO or input-data error, 2 usage or config error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "prenelab/cli/config.hpp"
#include "prenelab/cli/schemas.hpp"
#include "prenelab/core/base64.hpp"
#include "prenelab/core/rng.hpp"
#include "prenelab/lifespan/census.hpp"
#include "prenelab/lifespan/growth.hpp"
#include "prenelab/registry/jsonl.hpp"
#include "prenelab/registry/shared.hpp"
#include "prenelab/replicator/escape.hpp"
#include "prenelab/replicator/happiness.hpp"
#include "prenelab/soup/experiment.hpp"

#ifndef PRENELAB_VERSION
#define PRENELAB_VERSION "0.1.0"
#endif

namespace prenelab::cli {

inline constexpr std::string_view kToolName = "prenelab";
inline constexpr std::string_view kToolVersion = PRENELAB_VERSION;

/// Raised for bad flags or values; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for unreadable or malformed inputs and unwritable outputs; exit 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// What a command reports besides its artifact.
struct RunContext {
  const RunConfig& config;
  std::ostream& out;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

namespace detail {

using nlohmann::ordered_json;

inline bool jsonl(const RunConfig& c) { return c.get<std::string>("format") == "jsonl"; }

inline std::string fmt_double(double x) { return fmt::format("{}", x); }

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string read_file(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + what + " '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + what + " '" + path + "'");
  return buf.str();
}

inline std::vector<lifespan::TreeSpecies> species_list(const RunConfig& c) {
  const auto& gs = c.get<std::vector<Rational>>("g");
  if (gs.empty()) throw UsageError("g: list at least one gene-number");
  std::vector<lifespan::TreeSpecies> out;
  for (const auto& g : gs) out.emplace_back(g);
  return out;
}

// ---------------------------------------------------------------- lifespan

inline void lifespan_table(RunContext& ctx) {
  const auto species = species_list(ctx.config);
  const auto days = static_cast<lifespan::Day>(ctx.config.get<std::uint64_t>("days"));
  const auto census = lifespan::simulate_census(species, days);
  const bool as_json = jsonl(ctx.config);
  if (!as_json) ctx.out << "day,species_g,alive\n";
  for (lifespan::Day d = 0; d <= days; ++d) {
    for (std::size_t s = 0; s < species.size(); ++s) {
      const auto g = prenelab::to_string(species[s].gene_number());
      const auto alive = census.alive[s][static_cast<std::size_t>(d)].str();
      if (as_json) {
        ctx.out << ordered_json{{"day", d}, {"species_g", g}, {"alive", alive}}.dump() << '\n';
      } else {
        ctx.out << d << ',' << g << ',' << alive << '\n';
      }
    }
  }
}

inline std::string format_ages(const lifespan::LifeTable& table) {
  std::vector<std::string> parts;
  if (!table.immortal() && !table.is_periodic()) {
    for (auto a : table.birth_ages()) parts.push_back(std::to_string(a));
    return join(parts, ";");
  }
  for (auto a : table.ages_through(2 * table.period())) parts.push_back(std::to_string(a));
  if (table.immortal() || *table.age_limit() > 2 * table.period()) parts.emplace_back("...");
  return join(parts, ";");
}

inline void lifespan_sweep(RunContext& ctx) {
  std::vector<Rational> grid = ctx.config.get<std::vector<Rational>>("g");
  if (grid.empty()) {
    const auto steps = ctx.config.get<std::uint64_t>("steps");
    for (std::uint64_t i = 0; i <= steps; ++i) grid.emplace_back(Rational(BigInt(i), BigInt(steps)));
  }
  const auto result = lifespan::optimality_sweep(grid);
  std::vector<bool> best(result.points.size(), false);
  for (auto i : result.argmax) best[i] = true;

  const bool as_json = jsonl(ctx.config);
  if (!as_json) ctx.out << "g_num,g_den,lambda,birth_ages,death_age\n";
  ordered_json argmax = ordered_json::array();
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    const auto num = numerator(p.gene_number).str();
    const auto den = denominator(p.gene_number).str();
    const auto death = p.table.death_age();
    if (best[i]) argmax.push_back(prenelab::to_string(p.gene_number));
    if (as_json) {
      ctx.out << ordered_json{{"g_num", num},
                              {"g_den", den},
                              {"lambda", p.rate.lambda_per_day},
                              {"birth_ages", format_ages(p.table)},
                              {"death_age", death ? ordered_json(*death) : ordered_json(nullptr)}}
                     .dump()
              << '\n';
    } else {
      ctx.out << num << ',' << den << ',' << fmt_double(p.rate.lambda_per_day) << ',' << format_ages(p.table) << ','
              << (death ? std::to_string(*death) : std::string("inf")) << '\n';
    }
  }
  ctx.summary["argmax"] = argmax;
}

inline void lifespan_growth(RunContext& ctx) {
  const auto species = species_list(ctx.config);
  const auto from = static_cast<lifespan::Day>(ctx.config.get<std::uint64_t>("from_day"));
  const auto to = static_cast<lifespan::Day>(ctx.config.get<std::uint64_t>("days"));
  if (from >= to) throw UsageError("from_day: must be less than days");
  const auto census = lifespan::simulate_census(species, to);

  const bool as_json = jsonl(ctx.config);
  if (!as_json) ctx.out << "g,lambda,census_ratio,relative_error\n";
  for (std::size_t s = 0; s < species.size(); ++s) {
    const auto rate = lifespan::growth_rate(lifespan::life_table(species[s]));
    const auto& a = census.alive[s];
    std::optional<double> ratio;
    if (a[static_cast<std::size_t>(from)] != 0) {
      const double total = to_double(Rational(a[static_cast<std::size_t>(to)], a[static_cast<std::size_t>(from)]));
      ratio = std::pow(total, 1.0 / static_cast<double>(to - from));
    }
    std::optional<double> rel;
    if (ratio && rate.lambda_per_day > 0.0) rel = std::abs(*ratio - rate.lambda_per_day) / rate.lambda_per_day;
    const auto g = prenelab::to_string(species[s].gene_number());
    if (as_json) {
      auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
      ctx.out << ordered_json{{"g", g},
                              {"lambda", rate.lambda_per_day},
                              {"census_ratio", opt(ratio)},
                              {"relative_error", opt(rel)}}
                     .dump()
              << '\n';
    } else {
      auto opt = [](const std::optional<double>& v) { return v ? fmt_double(*v) : std::string("NA"); };
      ctx.out << g << ',' << fmt_double(rate.lambda_per_day) << ',' << opt(ratio) << ',' << opt(rel) << '\n';
    }
  }
}

// -------------------------------------------------------------- replicator

inline replicator::EscapeConfig escape_config(const RunConfig& c) {
  replicator::EscapeConfig e;
  e.genome_length = c.get<std::uint64_t>("genome_length");
  e.coat_begin = c.get<std::uint64_t>("coat_begin");
  e.coat_end = c.get<std::uint64_t>("coat_end");
  e.founders = c.get<std::uint64_t>("founders");
  e.offspring_per_day = c.get<std::uint64_t>("offspring");
  e.capacity = c.get<std::uint64_t>("capacity");
  e.immune_delay = static_cast<replicator::Day>(c.get<std::uint64_t>("immune_delay"));
  e.kill_probability = c.get<double>("kill_probability");
  e.horizon = static_cast<replicator::Day>(c.get<std::uint64_t>("days"));
  e.master_seed = c.get<std::uint64_t>("seed");
  e.seeds = c.get<std::uint64_t>("seeds");
  e.base_rate = c.get<double>("base_rate");
  e.coat_multiplier = c.get<double>("coat_multiplier");
  e.uniform_rate = c.get<double>("uniform_rate");
  return e;
}

inline ordered_json escape_event_json(const replicator::EscapeEvent& ev, std::string_view profile,
                                      std::uint64_t seed) {
  using replicator::EscapeEventKind;
  ordered_json j;
  switch (ev.kind) {
    case EscapeEventKind::Birth: j["kind"] = "birth"; break;
    case EscapeEventKind::Poster: j["kind"] = "poster"; break;
    case EscapeEventKind::Kill: j["kind"] = "kill"; break;
    case EscapeEventKind::Cull: j["kind"] = "cull"; break;
  }
  j["profile"] = profile;
  j["seed"] = seed;
  j["day"] = ev.day;
  switch (ev.kind) {
    case EscapeEventKind::Birth:
      j["id"] = ev.id;
      j["parent"] = ev.parent;
      j["sites"] = ev.sites;
      break;
    case EscapeEventKind::Poster:
      j["signature"] = ev.signature;
      j["activation_day"] = ev.activation_day;
      break;
    case EscapeEventKind::Kill:
      j["id"] = ev.id;
      j["signature"] = ev.signature;
      break;
    case EscapeEventKind::Cull: j["id"] = ev.id; break;
  }
  return j;
}

inline void replicator_run(RunContext& ctx) {
  const auto base = escape_config(ctx.config);
  const auto& profiles = ctx.config.get<std::vector<std::string>>("profiles");
  if (profiles.empty()) throw UsageError("profiles: list at least one profile");
  try {
    base.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const bool as_json = jsonl(ctx.config);
  const bool log_events = ctx.config.get<std::string>("log_events") == "true";
  if (log_events && !as_json) throw UsageError("log_events: event logs need format = jsonl");

  std::vector<replicator::EscapeReport> reports;
  if (!as_json) ctx.out << "seed,profile,extinction_day,peak_pop\n";
  for (const auto& name : profiles) {
    auto config = base;
    config.profile = name == "uniform" ? replicator::ProfileKind::Uniform : replicator::ProfileKind::HotCoat;
    replicator::EscapeReport report;
    if (log_events) {
      // Sequential so the event stream has a fixed order.
      report.config = config;
      for (std::uint64_t i = 0; i < config.seeds; ++i) {
        replicator::EventSink sink = [&](const replicator::EscapeEvent& ev) {
          ctx.out << escape_event_json(ev, name, i).dump() << '\n';
        };
        report.seeds.push_back(replicator::run_escape_seed(config, i, sink));
      }
    } else {
      report = replicator::run_escape_experiment(config);
    }
    for (const auto& s : report.seeds) {
      if (as_json) {
        ctx.out << ordered_json{{"kind", "summary"},
                                {"profile", name},
                                {"seed", s.seed_index},
                                {"extinction_day", s.extinction_day ? ordered_json(*s.extinction_day)
                                                                    : ordered_json(nullptr)},
                                {"peak_pop", s.peak_population}}
                       .dump()
                << '\n';
      } else {
        ctx.out << s.seed_index << ',' << name << ','
                << (s.extinction_day ? std::to_string(*s.extinction_day) : std::string("NA")) << ','
                << s.peak_population << '\n';
      }
    }
    ordered_json& entry = ctx.summary["profiles"][name];
    const auto days = report.survival_days();
    entry["median_survival"] = median(days);
    std::size_t extinct = 0;
    for (const auto& s : report.seeds) extinct += s.extinction_day ? 1 : 0;
    entry["extinct"] = extinct;
    reports.push_back(std::move(report));
  }
  if (reports.size() == 2) {
    const auto cmp = replicator::compare_escape(reports[0], reports[1]);
    ctx.summary["sign_test"] = {{"first", profiles[0]},
                                {"second", profiles[1]},
                                {"wins", cmp.sign.wins},
                                {"losses", cmp.sign.losses},
                                {"ties", cmp.sign.ties},
                                {"p_value", cmp.sign.p_value}};
  }
}

inline void replicator_happiness(RunContext& ctx) {
  const auto& c = ctx.config;
  const auto length = c.get<std::uint64_t>("genome_length");
  const auto core_end = c.get<std::uint64_t>("core_end");
  if (core_end == 0 || core_end >= length) throw UsageError("core_end: must lie strictly inside the genome");
  if (c.get<double>("core_rate") > c.get<double>("boundary_rate")) {
    throw UsageError("core_rate: must not exceed boundary_rate");
  }
  auto regions = std::make_shared<const replicator::RegionMap>(
      length, std::vector<replicator::Region>{{"core", 0, core_end}, {"boundary", core_end, length}});
  const auto profile = replicator::MutationProfile::shells(
      length, {{core_end, c.get<double>("core_rate")}, {length, c.get<double>("boundary_rate")}});
  Rng rng = derive_stream(c.get<std::uint64_t>("seed"), 0);
  const auto parent = replicator::random_genome(rng, length, regions);
  const auto table = replicator::happiness_table(parent, profile, c.get<std::uint64_t>("offspring"), rng);
  const bool as_json = jsonl(c);
  if (!as_json) ctx.out << "region,happy,offspring\n";
  for (const auto& row : table) {
    if (as_json) {
      ctx.out << ordered_json{{"region", row.region}, {"happy", row.happy}, {"offspring", row.offspring}}.dump()
              << '\n';
    } else {
      ctx.out << row.region << ',' << row.happy << ',' << row.offspring << '\n';
    }
  }
}

// -------------------------------------------------------------------- soup

inline soup::CatalysisConfig catalysis_config(const RunConfig& c) {
  soup::CatalysisConfig s;
  s.initial_free = {c.get<std::uint64_t>("free_a"), c.get<std::uint64_t>("free_c"), c.get<std::uint64_t>("free_g"),
                    c.get<std::uint64_t>("free_u")};
  s.initial_polymers.clear();
  for (const auto& item : c.get<std::vector<std::string>>("polymers")) {
    const auto colon = item.find(':');
    std::optional<std::uint64_t> count;
    if (colon != std::string::npos) count = cli::detail::parse_integer<std::uint64_t>(item.substr(colon + 1));
    if (!count) throw UsageError("polymers: expected SEQUENCE:COUNT, got '" + item + "'");
    s.initial_polymers.emplace_back(item.substr(0, colon), *count);
  }
  s.motif = c.get<std::string>("motif");
  s.rates = {c.get<double>("k_on"), c.get<double>("k_off"), c.get<double>("k_cat")};
  s.horizon = c.get<double>("horizon");
  s.sample_dt = c.get<double>("sample_dt");
  s.replicates = c.get<std::uint64_t>("replicates");
  s.master_seed = c.get<std::uint64_t>("seed");
  try {
    s.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return s;
}

inline void soup_run(RunContext& ctx) {
  const auto config = catalysis_config(ctx.config);
  const bool as_json = jsonl(ctx.config);
  if (ctx.config.get<std::string>("mode") == "series") {
    const bool treatment = ctx.config.get<std::string>("arm") == "treatment";
    Rng rng = derive_stream(config.master_seed, ctx.config.get<std::uint64_t>("replicate"));
    const auto traj =
        soup::run_ssa(config.initial_state(treatment ? config.rates.k_cat : 0.0), config.horizon, config.sample_dt, rng);
    if (!as_json) ctx.out << "t,free_A,free_C,free_G,free_U,n_species,n_P,n_AAA_enders\n";
    for (const auto& s : traj.samples) {
      if (as_json) {
        ctx.out << ordered_json{{"t", s.t},           {"free_A", s.free[0]},       {"free_C", s.free[1]},
                                {"free_G", s.free[2]}, {"free_U", s.free[3]},       {"n_species", s.n_species},
                                {"n_P", s.n_p},        {"n_AAA_enders", s.n_aaa_enders}}
                       .dump()
                << '\n';
      } else {
        ctx.out << fmt_double(s.t) << ',' << s.free[0] << ',' << s.free[1] << ',' << s.free[2] << ',' << s.free[3]
                << ',' << s.n_species << ',' << s.n_p << ',' << s.n_aaa_enders << '\n';
      }
    }
    ctx.summary["events"] = traj.events;
    ctx.summary["quiescent"] = traj.quiescent;
    return;
  }
  const auto report = soup::run_catalysis_experiment(config);
  if (!as_json) ctx.out << "replicate,treatment_free_A,control_free_A,treatment_events,control_events\n";
  for (std::size_t i = 0; i < report.replicates.size(); ++i) {
    const auto& r = report.replicates[i];
    const auto ta = r.treatment.terminal().free[0];
    const auto ca = r.control.terminal().free[0];
    if (as_json) {
      ctx.out << ordered_json{{"replicate", i},
                              {"treatment_free_A", ta},
                              {"control_free_A", ca},
                              {"treatment_events", r.treatment.trajectory.events},
                              {"control_events", r.control.trajectory.events}}
                     .dump()
              << '\n';
    } else {
      ctx.out << i << ',' << ta << ',' << ca << ',' << r.treatment.trajectory.events << ','
              << r.control.trajectory.events << '\n';
    }
  }
  ctx.summary["sign_test"] = {{"wins", report.free_a_sign.wins},
                              {"losses", report.free_a_sign.losses},
                              {"ties", report.free_a_sign.ties},
                              {"p_value", report.free_a_sign.p_value}};
  ctx.summary["mean_treatment_free_A"] = report.mean_treatment_free_a;
  ctx.summary["mean_control_free_A"] = report.mean_control_free_a;
}

// ---------------------------------------------------------------- registry

inline registry::World load_world(const RunConfig& c) {
  const auto& path = c.get<std::string>("log");
  if (path.empty()) throw UsageError("log: give the event log path");
  const auto text = read_file(path, "event log");
  try {
    const auto events = registry::parse_jsonl(text);
    return registry::World::replay(events);
  } catch (const Error& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline void registry_ingest(RunContext& ctx) {
  const auto world = load_world(ctx.config);
  if (jsonl(ctx.config)) {
    registry::write_jsonl(ctx.out, world.log());
  } else {
    ctx.out << "id,substrate,created_at,destroyed_at,source,content_b64\n";
    for (const auto& o : world.objects()) {
      ctx.out << o.id << ',' << to_string(o.substrate) << ',' << o.created_at << ','
              << (o.destroyed_at ? std::to_string(*o.destroyed_at) : std::string("NA")) << ','
              << (o.source ? std::to_string(*o.source) : std::string("NA")) << ',' << base64_encode(o.content)
              << '\n';
    }
  }
  std::size_t alive = 0;
  for (const auto& o : world.objects()) alive += o.alive_at(world.now()) ? 1 : 0;
  ctx.summary["events"] = world.now();
  ctx.summary["objects"] = world.objects().size();
  ctx.summary["alive"] = alive;
  ctx.summary["faithful"] = registry::is_faithful(world.log());
}

inline void registry_query(RunContext& ctx) {
  const auto& c = ctx.config;
  const auto world = load_world(c);
  const auto at = c.get<std::int64_t>("at");
  if (at > static_cast<std::int64_t>(world.now())) {
    throw UsageError("at: the log has only " + std::to_string(world.now()) + " events");
  }
  const auto substrate = registry::parse_substrate(c.get<std::string>("substrate"));
  if (!substrate) throw UsageError("substrate: unknown substrate '" + c.get<std::string>("substrate") + "'");
  const auto prene = registry::Prene::of("query", c.get<std::string>("content"), *substrate);
  const bool as_json = jsonl(c);
  const std::string& what = c.get<std::string>("what");

  if (what == "copies") {
    if (!as_json) ctx.out << "t,copy_number,gene,meme,turene,extinct\n";
    const registry::EventIndex first = at < 0 ? 0 : static_cast<registry::EventIndex>(at);
    const registry::EventIndex last = at < 0 ? world.now() : first;
    for (auto t = first; t <= last; ++t) {
      const auto n = world.copy_number(prene, t);
      const auto cls = world.classify(prene, t);
      if (as_json) {
        ctx.out << ordered_json{{"t", t},           {"copy_number", n},         {"gene", cls.gene},
                                {"meme", cls.meme}, {"turene", cls.turene},     {"extinct", cls.extinct}}
                       .dump()
                << '\n';
      } else {
        ctx.out << t << ',' << n << ',' << cls.gene << ',' << cls.meme << ',' << cls.turene << ',' << cls.extinct
                << '\n';
      }
    }
  } else if (what == "lineage") {
    const auto lineage = world.lineage(prene);
    std::map<registry::ObjectId, registry::ObjectId> parent;
    for (const auto& [src, copy] : lineage.edges) parent[copy] = src;
    if (!as_json) ctx.out << "id,source\n";
    for (auto id : lineage.nodes) {
      const auto it = parent.find(id);
      if (as_json) {
        ctx.out << ordered_json{{"id", id}, {"source", it == parent.end() ? ordered_json(nullptr) : ordered_json(it->second)}}
                       .dump()
                << '\n';
      } else {
        ctx.out << id << ',' << (it == parent.end() ? std::string("NA") : std::to_string(it->second)) << '\n';
      }
    }
  } else {
    const registry::EventIndex t = at < 0 ? world.now() : static_cast<registry::EventIndex>(at);
    std::vector<std::string> contents;
    for (const auto& o : world.objects()) {
      if (o.alive_at(t)) contents.push_back(registry::normalize(o.content, o.substrate));
    }
    const std::string shared = contents.empty() ? std::string() : registry::longest_shared(contents);
    if (as_json) {
      ctx.out << ordered_json{{"t", t}, {"objects", contents.size()}, {"length", shared.size()},
                              {"longest_shared_b64", base64_encode(shared)}}
                     .dump()
              << '\n';
    } else {
      ctx.out << "t,objects,length,longest_shared_b64\n"
              << t << ',' << contents.size() << ',' << shared.size() << ',' << base64_encode(shared) << '\n';
    }
  }
}

// ---------------------------------------------------------------- dispatch

struct Leaf {
  const Schema* schema;
  std::function<void(RunContext&)> run;
  bool takes_log = false;
};

inline std::map<std::string, Leaf> leaves() {
  return {
      {"lifespan table", {&lifespan_table_schema(), lifespan_table}},
      {"lifespan sweep", {&lifespan_sweep_schema(), lifespan_sweep}},
      {"lifespan growth", {&lifespan_growth_schema(), lifespan_growth}},
      {"replicator run", {&replicator_run_schema(), replicator_run}},
      {"replicator happiness", {&replicator_happiness_schema(), replicator_happiness}},
      {"soup run", {&soup_run_schema(), soup_run}},
      {"registry ingest", {&registry_ingest_schema(), registry_ingest, true}},
      {"registry query", {&registry_query_schema(), registry_query, true}},
  };
}

/// Flag values captured for one leaf.
struct LeafFlags {
  std::map<std::string, std::string> values;  // flag name without dashes -> text
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  std::string report_path;
  std::vector<std::string> sets;
  std::string log_path;
  CLI::Option* config_opt = nullptr;
  CLI::Option* report_opt = nullptr;
  CLI::Option* log_opt = nullptr;
};

inline const std::vector<std::pair<std::string, std::string>>& value_flags() {
  static const std::vector<std::pair<std::string, std::string>> flags{
      {"seed", "master seed (u64)"},
      {"days", "days to simulate"},
      {"g", "gene-number(s), e.g. 1/2 or 1,1/2"},
      {"out", "artifact path (default: stdout)"},
      {"format", "csv or jsonl"},
      {"content", "query content (registry query)"},
      {"substrate", "query substrate (registry query)"},
      {"at", "query time, -1 for every time (registry query)"},
  };
  return flags;
}

inline void apply_flags(RunConfig& config, const LeafFlags& flags, const std::string& command) {
  const Schema& schema = config.schema();
  if (flags.config_opt->count() > 0) {
    const auto text = read_file(flags.config_path, "config file");
    try {
      config = parse_config(text, schema);
    } catch (const ConfigError& e) {
      throw UsageError(flags.config_path + ": " + e.what());
    }
  }
  for (const auto& item : flags.sets) {
    const auto eq = item.find('=');
    const std::string key(cli::detail::trim(std::string_view(item).substr(0, eq)));
    const KeySpec* spec = eq == std::string::npos ? nullptr : schema.find(key);
    if (!spec) throw UsageError("--set: '" + item + "' does not name a key of " + command);
    try {
      config.set(key, parse_value(*spec, cli::detail::trim(std::string_view(item).substr(eq + 1)), 0));
    } catch (const ConfigError& e) {
      throw UsageError("--set " + key + ": " + e.detail());
    }
  }
  for (const auto& [name, opt] : flags.options) {
    if (opt->count() == 0) continue;
    const KeySpec* spec = schema.find(name);
    if (!spec) throw UsageError("--" + name + " is not accepted by '" + command + "'");
    try {
      config.set(name, parse_value(*spec, cli::detail::trim(flags.values.at(name)), 0));
    } catch (const ConfigError& e) {
      throw UsageError("--" + name + ": " + e.detail());
    }
  }
  if (flags.log_opt && flags.log_opt->count() > 0) config.set("log", flags.log_path);
}

inline nlohmann::ordered_json config_json(const RunConfig& config) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& spec : config.schema().keys) j[spec.name] = format_value(config.values().at(spec.name));
  return j;
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Population and replicator simulations", std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  const auto leaves = detail::leaves();
  std::map<std::string, detail::LeafFlags> flags;
  std::map<std::string, CLI::App*> leaf_apps;
  std::map<std::string, CLI::App*> groups;
  for (const auto& [command, leaf] : leaves) {
    const auto space = command.find(' ');
    const std::string group = command.substr(0, space);
    const std::string name = command.substr(space + 1);
    if (!groups.contains(group)) {
      groups[group] = app.add_subcommand(group, group + " commands");
      groups[group]->require_subcommand(1);
    }
    CLI::App* sub = groups[group]->add_subcommand(name, command);
    leaf_apps[command] = sub;
    auto& f = flags[command];
    for (const auto& [flag, help] : detail::value_flags()) {
      const bool registry_only = flag == "content" || flag == "substrate" || flag == "at";
      if (registry_only && command != "registry query") continue;
      f.options[flag] = sub->add_option("--" + flag, f.values[flag], help);
    }
    f.config_opt = sub->add_option("--config", f.config_path, "scenario config file");
    f.report_opt = sub->add_option("--report", f.report_path, "run report path");
    sub->add_option("--set", f.sets, "override one config key: key=value")->allow_extra_args(false);
    if (leaf.takes_log) f.log_opt = sub->add_option("log", f.log_path, "JSONL event log");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::string command;
  for (const auto& [name, sub] : leaf_apps) {
    if (sub->parsed()) command = name;
  }
  const auto start = std::chrono::steady_clock::now();
  const detail::Leaf& leaf = leaves.at(command);
  try {
    RunConfig config(*leaf.schema);
    detail::apply_flags(config, flags.at(command), command);

    const auto& out_path = config.get<std::string>("out");
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path, std::ios::binary | std::ios::trunc);
      if (!file) throw IoError("cannot write '" + out_path + "'");
    }
    RunContext ctx{config, out_path.empty() ? out : static_cast<std::ostream&>(file)};
    try {
      leaf.run(ctx);
    } catch (const Error& e) {
      if (e.code() == Errc::InvalidConfig || e.code() == Errc::InvalidArgument) throw UsageError(e.what());
      throw;
    }
    ctx.out.flush();
    if (!ctx.out) throw IoError("error writing '" + (out_path.empty() ? std::string("stdout") : out_path) + "'");

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::ordered_json report;
    report["tool"] = kToolName;
    report["version"] = kToolVersion;
    report["command"] = command;
    report["argv"] = args;
    report["config"] = detail::config_json(config);
    report["rng"] = kRngAlgorithm;
    report["seed"] = config.get<std::uint64_t>("seed");
    report["wall_time_s"] = wall;
    std::string report_path = flags.at(command).report_path;
    if (report_path.empty() && !out_path.empty()) report_path = out_path + ".report.json";
    report["artifacts"] = nlohmann::ordered_json::array();
    if (!out_path.empty()) report["artifacts"].push_back(out_path);
    if (!report_path.empty()) report["artifacts"].push_back(report_path);
    report["summary"] = ctx.summary;
    if (report_path.empty()) {
      err << report.dump() << '\n';
    } else {
      std::ofstream rf(report_path, std::ios::binary | std::ios::trunc);
      rf << report.dump(2) << '\n';
      if (!rf) throw IoError("cannot write '" + report_path + "'");
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace prenelab::cli
