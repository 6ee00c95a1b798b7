// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "prenelab/cli/app.hpp"
#include "prenelab/prenelab.hpp"
#include "registry_oracle.hpp"

using namespace prenelab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> check;
};

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ------------------------------------------------------------------ oracles

/// Root of x^3 = x^2 + x + 1 in [1, 2] by plain bisection.
double tribonacci_root() {
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid - mid * mid - mid - 1.0 < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Rational random_gene_number(Rng& rng) {
  const auto q = static_cast<long long>(1 + uniform_below(rng, 60));
  const auto p = static_cast<long long>(uniform_below(rng, static_cast<std::uint64_t>(q) + 1));
  return Rational(p, q);
}

// ---------------------------------------------------------------- criteria

Outcome census_table() {
  Outcome o;
  const auto r = invoke({"lifespan", "table", "--days", "30"});
  o.require(r.code == 0, "exit code " + std::to_string(r.code));
  std::istringstream golden(slurp(fs::path(PRENELAB_GOLDEN_DIR) / "census_days_0_30.csv"));
  std::string line;
  std::getline(golden, line);
  std::string expected = "day,species_g,alive\n";
  int values = 0;
  while (std::getline(golden, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    expected += line.substr(0, a) + ",1," + line.substr(a + 1, b - a - 1) + "\n";
    expected += line.substr(0, a) + ",1/2," + line.substr(b + 1) + "\n";
    values += 2;
  }
  o.require(values == 62, "golden table has " + std::to_string(values) + " values");
  o.require(r.out.find("\n7,1,4\n7,1/2,7\n") != std::string::npos, "day 7 row");
  o.require(r.out.find("\n30,1,1024\n30,1/2,11536\n") != std::string::npos, "day 30 row");
  o.require(r.out == expected, "table differs from the reference values");
  if (o.ok) o.detail = "62/62 values exact";
  return o;
}

Outcome day_hundred() {
  Outcome o;
  const std::vector<lifespan::TreeSpecies> species{lifespan::TreeSpecies(Rational(1)),
                                                   lifespan::TreeSpecies(Rational(1, 2))};
  const auto census = lifespan::simulate_census(species, 100);
  const BigInt& immortal = census.alive[0][100];
  const BigInt& mortal = census.alive[1][100];
  o.require(immortal == BigInt(1) << 33, "immortal count " + immortal.str());
  o.require(immortal * 1000 < immortal + mortal, "immortal share not below 1/1000");
  o.detail = "immortal " + immortal.str() + " / total " + BigInt(immortal + mortal).str();
  return o;
}

Outcome optimality() {
  Outcome o;
  std::vector<Rational> grid;
  for (int i = 0; i <= 20; ++i) grid.emplace_back(i, 20);
  const auto sweep = lifespan::optimality_sweep(grid);
  bool half = false;
  std::vector<std::string> best;
  for (auto i : sweep.argmax) {
    half = half || sweep.points[i].gene_number == Rational(1, 2);
    best.push_back(prenelab::to_string(sweep.points[i].gene_number));
  }
  o.require(half, "1/2 not in argmax");

  const double oracle = std::sqrt(tribonacci_root());
  const double lambda = sweep.points[10].rate.lambda_per_day;
  o.require(std::abs(lambda - oracle) <= 1e-9, fmt::format("lambda(1/2) = {} vs oracle {}", lambda, oracle));

  const std::vector<lifespan::TreeSpecies> species{lifespan::TreeSpecies(Rational(1, 2))};
  const auto census = lifespan::simulate_census(species, 80);
  const double ratio = std::pow(to_double(Rational(census.alive[0][80], census.alive[0][60])), 1.0 / 20.0);
  const double rel = std::abs(ratio - lambda) / lambda;
  o.require(rel <= 1e-3, fmt::format("census ratio {} rel err {}", ratio, rel));
  if (o.ok) {
    o.detail = fmt::format("argmax {{{}}}; lambda(1/2) = {:.16g}, |d oracle| = {:.1e}, census rel err {:.1e}",
                           fmt::join(best, ", "), lambda, std::abs(lambda - oracle), rel);
  }
  return o;
}

Outcome cohort_equivalence() {
  Outcome o;
  Rng rng(20240601);
  for (int trial = 0; trial < 50 && o.ok; ++trial) {
    const Rational g = random_gene_number(rng);
    const auto days = static_cast<lifespan::Day>(uniform_below(rng, 26));
    const std::vector<lifespan::TreeSpecies> species{lifespan::TreeSpecies(g)};
    const auto cohort = lifespan::simulate_census(species, days);
    const auto individuals = lifespan::simulate_individuals(species, days);
    o.require(cohort == individuals.census, "g = " + prenelab::to_string(g) + ", days = " + std::to_string(days));
  }
  if (o.ok) o.detail = "50/50 random (g, days <= 25) agree exactly";
  return o;
}

Outcome replicator_statistics() {
  Outcome o;
  const std::size_t length = 10000;
  const double p = 1.0 / 2000.0;
  Rng rng(8);
  std::string seq(length, 'A');
  for (auto& c : seq) c = "ACGU"[uniform_below(rng, 4)];
  const replicator::Genome parent(seq);
  const auto profile = replicator::MutationProfile::uniform(length, p);
  const int reps = 10000;
  int mutants = 0;
  for (int i = 0; i < reps; ++i) mutants += replicator::replicate(parent, profile, rng).mutated_sites.empty() ? 0 : 1;
  const double fraction = static_cast<double>(mutants) / reps;
  const double expected = 1.0 - std::pow(1.0 - p, static_cast<double>(length));
  o.require(std::abs(fraction - expected) <= 0.005, fmt::format("mutant fraction {} vs {}", fraction, expected));

  replicator::EscapeConfig hot;
  hot.seeds = 100;
  hot.kill_probability = 0.9;
  replicator::EscapeConfig faithful = hot;
  faithful.profile = replicator::ProfileKind::Uniform;
  const auto cmp =
      replicator::compare_escape(replicator::run_escape_experiment(hot), replicator::run_escape_experiment(faithful));
  o.require(cmp.median_first > cmp.median_second,
            fmt::format("median survival {} vs {}", cmp.median_first, cmp.median_second));
  o.require(cmp.sign.p_value < 0.01, fmt::format("sign test p = {}", cmp.sign.p_value));
  if (o.ok) {
    o.detail = fmt::format("mutant fraction {:.4f} (expected {:.4f}, tol 0.005); median survival {} vs {} days, "
                           "sign test {}/{} p = {:.1e}",
                           fraction, expected, cmp.median_first, cmp.median_second, cmp.sign.wins, cmp.sign.losses,
                           cmp.sign.p_value);
  }
  return o;
}

Outcome soup_statistics() {
  Outcome o;
  soup::CatalysisConfig config;
  auto state = config.initial_state(config.rates.k_cat);
  const auto totals = soup::letter_totals(state);
  Rng rng(1);
  std::size_t violations = 0;
  for (int i = 0; i < 100000; ++i) {
    (void)soup::step(state, rng);
    if (soup::letter_totals(state) != totals) ++violations;
  }
  o.require(violations == 0, std::to_string(violations) + " mass violations");

  config.replicates = 30;
  const auto report = soup::run_catalysis_experiment(config);
  o.require(report.free_a_sign.wins > report.free_a_sign.losses, "catalysis does not raise free A");
  o.require(report.free_a_sign.p_value < 0.05, fmt::format("sign test p = {}", report.free_a_sign.p_value));
  if (o.ok) {
    o.detail = fmt::format("0 violations in 1e5 events; free A {:.1f} vs {:.1f}, sign test {}/{} p = {:.1e}",
                           report.mean_treatment_free_a, report.mean_control_free_a, report.free_a_sign.wins,
                           report.free_a_sign.losses, report.free_a_sign.p_value);
  }
  return o;
}

Outcome registry_properties() {
  using namespace prenelab::oracle;
  Outcome o;
  Rng rng(77);
  std::size_t queries = 0;
  for (int trial = 0; trial < 200 && o.ok; ++trial) {
    const auto log = random_log(rng, 50, false);
    const auto w = World::replay(log);
    std::set<std::string> patterns{"absent"};
    for (const auto& obj : w.objects()) patterns.insert(normalize(obj.content, obj.substrate));
    for (const auto& pattern : patterns) {
      const Prene prene("p", pattern);
      for (EventIndex t = 0; t <= w.now(); ++t) {
        const auto n = brute_count(log, t, pattern);
        const auto c = w.classify(prene, t);
        const Classification expected{brute_count(log, t, pattern, SubstrateKind::NucleicAcid) > 0,
                                      brute_count(log, t, pattern, SubstrateKind::Brain) > 0,
                                      brute_count(log, t, pattern, SubstrateKind::Computer) > 0, n == 0};
        o.require(w.copy_number(prene, t) == n && w.extinct(prene, t) == (n == 0) && c == expected,
                  fmt::format("log {} t {}", trial, t));
        ++queries;
      }
    }
  }
  std::size_t faithful_logs = 0;
  for (int trial = 0; trial < 200 && o.ok; ++trial) {
    const auto log = random_log(rng, 50, true);
    o.require(is_faithful(log), "generator produced an unfaithful log");
    ++faithful_logs;
    const auto w = World::replay(log);
    std::set<std::string> patterns;
    for (const auto& obj : w.objects()) patterns.insert(obj.content);
    for (const auto& pattern : patterns) {
      const Prene prene("p", pattern);
      bool seen = false, gone = false;
      for (EventIndex t = 0; t <= w.now(); ++t) {
        const bool extinct = w.extinct(prene, t);
        seen = seen || !extinct;
        gone = gone || (seen && extinct);
        o.require(!gone || extinct, fmt::format("faithful log {} recovers at t {}", trial, t));
      }
    }
  }
  for (int trial = 0; trial < 500 && o.ok; ++trial) {
    std::vector<std::string> xs(1 + uniform_below(rng, 4));
    const std::string alphabet = uniform_below(rng, 2) ? "ab" : "ACGU";
    for (auto& x : xs) x = random_content(rng, alphabet, 64);
    o.require(registry::longest_shared(xs) == brute_longest_shared(xs), fmt::format("longest_shared case {}", trial));
  }
  if (o.ok) {
    o.detail = fmt::format("{} brute-force queries on 200 logs; {} faithful logs monotone; 500 longest_shared cases",
                           queries, faithful_logs);
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "prenelab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    Rng rng(3);
    std::ofstream(dir / "log.jsonl", std::ios::binary) << registry::to_jsonl(oracle::random_log(rng, 60, false));
  }
  const std::string log = (dir / "log.jsonl").string();
  const std::string log_content = registry::World::replay(registry::parse_jsonl(slurp(log))).objects().front().content;

  const std::vector<std::vector<std::string>> commands{
      {"lifespan", "table", "--days", "100"},
      {"lifespan", "sweep"},
      {"lifespan", "growth", "--set", "g=0,1/2,2/5,1"},
      {"replicator", "run", "--seed", "7", "--set", "seeds=10", "--set", "log_events=true", "--format", "jsonl"},
      {"replicator", "run", "--seed", "7", "--set", "kill_probability=0.9"},
      {"replicator", "happiness", "--seed", "5"},
      {"soup", "run", "--seed", "11"},
      {"soup", "run", "--seed", "11", "--set", "mode=experiment", "--set", "replicates=8"},
      {"registry", "ingest", log},
      {"registry", "ingest", log, "--format", "jsonl"},
      {"registry", "query", log, "--content", log_content},
      {"registry", "query", log, "--set", "what=lineage", "--content", log_content},
      {"registry", "query", log, "--set", "what=longest_shared", "--format", "jsonl"},
  };
  auto stable_report = [](const std::string& text) {
    auto j = nlohmann::json::parse(text);
    j.erase("wall_time_s");
    return j.dump();
  };
  std::size_t i = 0;
  for (const auto& base : commands) {
    std::vector<std::string> bytes;
    std::vector<std::string> reports;
    for (int rerun = 0; rerun < 2; ++rerun) {
      auto args = base;
      const auto out = (dir / fmt::format("run{}.out", i)).string();
      const auto rep = (dir / fmt::format("run{}.report.json", i)).string();
      args.insert(args.end(), {"--out", out, "--report", rep});
      const auto r = invoke(args);
      o.require(r.code == 0, fmt::format("'{}' exited {}: {}", fmt::join(base, " "), r.code, r.err));
      bytes.push_back(slurp(out));
      if (r.code == 0) reports.push_back(stable_report(slurp(rep)));
      // stdout capture must match the file artifact too
      if (rerun == 1) o.require(invoke(base).out == bytes.back(), fmt::format("'{}' stdout differs", fmt::join(base, " ")));
    }
    o.require(!bytes[0].empty() && bytes[0] == bytes[1], fmt::format("'{}' not byte-identical", fmt::join(base, " ")));
    o.require(reports.size() == 2 && reports[0] == reports[1],
              fmt::format("'{}' report differs", fmt::join(base, " ")));
    ++i;
  }
  fs::remove_all(dir);
  if (o.ok) o.detail = fmt::format("{} command lines x 2 runs byte-identical (files, stdout, reports)", commands.size());
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "census table through day 30", 1.0, census_table},
      {2, "day-100 immortal share", 1.0, day_hundred},
      {3, "optimal gene-number and growth rate", 5.0, optimality},
      {4, "cohort vs individual census", 30.0, cohort_equivalence},
      {5, "replicator mutation and escape", 60.0, replicator_statistics},
      {6, "soup mass conservation and catalysis", 60.0, soup_statistics},
      {7, "registry oracles", 30.0, registry_properties},
      {8, "byte-identical reruns", 120.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.budget_s) {
      o.ok = false;
      o.detail += fmt::format(" (over budget {} s)", c.budget_s);
    }
    failures += o.ok ? 0 : 1;
    std::printf("%s %d %s [%.3f s, budget %g s]: %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.budget_s, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
