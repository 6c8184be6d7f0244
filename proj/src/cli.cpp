#include "fitevo/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "fitevo/analytics.hpp"
#include "fitevo/config.hpp"
#include "fitevo/errors.hpp"
#include "fitevo/report.hpp"
#include "fitevo/verification.hpp"

namespace fitevo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw ConfigError("cannot create output directory " + dir_.string() +
                        (ec ? ": " + ec.message() : ""));
    }
  }

  /// Opens `name` for writing and records it in the manifest.
  std::ofstream open(const std::string& name) {
    const fs::path path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    manifest_.push_back(path.string());
    return os;
  }

  void write(const std::string& name, const std::string& text) {
    std::ofstream os = open(name);
    os << text;
    if (!os) throw ConfigError("cannot write " + (dir_ / name).string());
  }

  const std::vector<std::string>& manifest() const { return manifest_; }

 private:
  fs::path dir_;
  std::vector<std::string> manifest_;
};

std::string replica_tag(std::size_t r) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "r%03zu", r);
  return buf;
}

void write_simulation(const ModelConfig& cfg, OutputDir& dir) {
  const Aggregate agg = replicate(cfg.sim, true);
  for (std::size_t r = 0; r < agg.records.size(); ++r) {
    const TrajectoryRecord& rec = agg.records[r];
    {
      std::ofstream os = dir.open("trajectory_" + replica_tag(r) + ".csv");
      write_trajectory_csv(rec, os);
    }
    for (const Snapshot& s : rec.snapshots) {
      std::ofstream os =
          dir.open("snapshot_" + replica_tag(r) + "_n" + std::to_string(s.step) + ".csv");
      write_snapshot_csv(s, os);
    }
  }
  dir.write("aggregate.json", aggregate_report(cfg, agg).dump() + "\n");
}

void print_manifest(const OutputDir& dir, std::ostream& out) {
  for (const std::string& path : dir.manifest()) out << path << "\n";
}

std::string exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct ScenarioOptions {
  std::string preset;
  std::optional<std::string> p;
  std::optional<std::string> q;
  std::optional<std::int64_t> horizon;
  std::optional<int> replicas;
  std::optional<int> k_max;
  std::uint64_t seed = 1;
  std::string out;
};

json table_measure() {
  return {{"atoms", {{0.5, 0.5}}}, {"uniform_pieces", {{0.0, 1.0, 0.5}}}};
}

/// Observables around f_c: [0,f_c), [0,f_c], {f_c}, (f_c,1].
json critical_observables(const json& measure, const json& increments) {
  const ExtendedReal fc = critical_fitness(parse_measure(measure), parse_increments(increments));
  const std::string f = exact(fc.value());
  return json::array({{{"name", "below"}, {"set", "[0," + f + ")"}},
                      {{"name", "upto"}, {"set", "[0," + f + "]"}},
                      {{"name", "atfc"}, {"set", "{" + f + "}"}},
                      {{"name", "above"}, {"set", "(" + f + ",1]"}}});
}

json scenario_config(const ScenarioOptions& o) {
  auto number = [](const std::optional<std::string>& s, const char* name, double fallback) {
    return s ? parse_number(json(*s), name) : fallback;
  };
  json cfg;
  if (o.preset == "gms-table") {
    const double p = number(o.p, "--p", 2.0 / 3);
    if (!(p > 0.5 && p < 1.0)) throw ConfigError("gms-table: --p must lie in (1/2, 1)");
    cfg["measure"] = table_measure();
    cfg["increments"] = {{"kind", "gms"}, {"p", p}};
    cfg["horizon"] = 200'000;
  } else if (o.preset == "markov-table") {
    const double p = number(o.p, "--p", 0.75);
    const double q = number(o.q, "--q", 0.5);
    if (!(0.0 < q && q < p && p < 1.0)) {
      throw ConfigError("markov-table: need 0 < q < p < 1");
    }
    cfg["measure"] = table_measure();
    cfg["increments"] = {{"kind", "markov"}, {"p", p}, {"q", q}};
    cfg["horizon"] = 200'000;
  } else if (o.preset == "bp-demo") {
    cfg["measure"] = {{"uniform_pieces", {{0.0, 1.0, 1.0}}}};
    cfg["increments"] = {{"kind", "bp"}, {"x", {{"deterministic", 2}}}};
    cfg["horizon"] = 2'000;
    cfg["replicas"] = 20;
    cfg["observables"] = {{"A", "[0,0.75]"}};
  } else if (o.preset == "heavy-tail") {
    cfg["measure"] = {{"uniform_pieces", {{0.0, 1.0, 1.0}}}};
    cfg["increments"] = {{"kind", "bp"}, {"x", {{"zeta", 2}}}};
    cfg["horizon"] = 100'000;
    cfg["replicas"] = 10;
    cfg["observables"] = {{"A", "[0,0.3]"}};
  } else if (o.preset == "counterexample") {
    cfg["measure"] = {{"uniform_pieces", {{0.0, 1.0, 1.0}}}};
    cfg["increments"] = {{"kind", "counterexample"}, {"k_max", o.k_max.value_or(5)}};
    cfg["horizon"] = 20'000;
    cfg["observables"] = {{"A", "[0,0.3]"}};
  } else {
    throw ConfigError("unknown scenario \"" + o.preset +
                      "\" (gms-table, markov-table, bp-demo, heavy-tail, counterexample)");
  }
  if (o.preset == "gms-table" || o.preset == "markov-table") {
    cfg["observables"] = critical_observables(cfg["measure"], cfg["increments"]);
  }
  if (o.horizon) cfg["horizon"] = *o.horizon;
  if (o.replicas) cfg["replicas"] = *o.replicas;
  cfg["seed"] = o.seed;
  cfg["snapshot_times"] = {cfg["horizon"]};
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Batch birth / least-fit removal population model: theory and simulation",
               "fitevo");
  app.require_subcommand(1);

  std::string analyze_path;
  auto* analyze = app.add_subcommand("analyze", "Print the theory report for a config as JSON");
  analyze->add_option("config", analyze_path, "Model config (JSON)")->required();

  std::string sim_path;
  std::string sim_out;
  std::int64_t thin = 1;
  auto* simulate = app.add_subcommand("simulate", "Run replicas and write CSV/JSON output");
  simulate->add_option("config", sim_path, "Model config (JSON)")->required();
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_option("--thin", thin, "Record every k-th step in the full phase")
      ->check(CLI::PositiveNumber);

  std::string suite;
  std::uint64_t verify_seed = kDefaultVerifySeed;
  auto* verify = app.add_subcommand("verify", "Run an acceptance suite");
  verify->add_option("--suite", suite, "tables|duality|shape|kill|recurrence|bp|heavy-tail|"
                                       "determinism|counterexample|all")
      ->required();
  verify->add_option("--seed", verify_seed, "Base seed for randomized suites");

  ScenarioOptions so;
  std::int64_t horizon = 0;
  int replicas = 0;
  int k_max = 0;
  std::string p;
  std::string q;
  auto* scenario = app.add_subcommand("scenario", "Write and run a preset model");
  scenario->add_option("preset", so.preset,
                       "gms-table|markov-table|bp-demo|heavy-tail|counterexample")
      ->required();
  auto* p_opt = scenario->add_option("--p", p, "Stretch parameter p (e.g. 2/3)");
  auto* q_opt = scenario->add_option("--q", q, "Markov parameter q");
  auto* h_opt = scenario->add_option("--horizon", horizon, "Number of steps");
  auto* r_opt = scenario->add_option("--replicas", replicas, "Number of replicas");
  auto* k_opt = scenario->add_option("--k-max", k_max, "Counterexample block count");
  scenario->add_option("--seed", so.seed, "Base seed");
  scenario->add_option("--out", so.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze) {
      out << analysis_report(load_config(analyze_path)).dump(2) << "\n";
      return kExitOk;
    }
    if (*simulate) {
      ModelConfig cfg = load_config(sim_path);
      cfg.sim.recording.stride = thin;
      OutputDir dir(sim_out);
      write_simulation(cfg, dir);
      print_manifest(dir, out);
      return kExitOk;
    }
    if (*verify) {
      const std::vector<int> ids = suite_criteria(suite);
      int failed = 0;
      for (int id : ids) {
        const CriterionResult r = run_criterion(id, verify_seed);
        out << format_result(r) << std::flush;
        if (r.gating && !r.passed()) ++failed;
      }
      out << (failed == 0 ? "PASS" : "FAIL") << " suite " << suite << ": "
          << ids.size() - failed << "/" << ids.size() << " criteria passed\n";
      return failed == 0 ? kExitOk : kExitVerificationFailed;
    }
    if (*scenario) {
      if (*p_opt) so.p = p;
      if (*q_opt) so.q = q;
      if (*h_opt) so.horizon = horizon;
      if (*r_opt) so.replicas = replicas;
      if (*k_opt) so.k_max = k_max;
      const json cfg_json = scenario_config(so);
      const ModelConfig cfg = parse_config(cfg_json);
      OutputDir dir(so.out);
      dir.write("config.json", cfg_json.dump(2) + "\n");
      dir.write("analysis.json", analysis_report(cfg).dump(2) + "\n");
      write_simulation(cfg, dir);
      print_manifest(dir, out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fitevo
