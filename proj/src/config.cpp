#include "fitevo/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <set>

#include "fitevo/errors.hpp"

namespace fitevo {

using nlohmann::json;

namespace {

double parse_decimal(std::string_view s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(where + ": not a number: \"" + std::string(s) + "\"");
  }
  return v;
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(where + ": missing key \"" + key + "\"");
  }
  return j.at(key);
}

std::int64_t parse_integer(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  double v = parse_number(j, where);
  if (v != static_cast<double>(static_cast<std::int64_t>(v))) {
    throw ConfigError(where + ": expected an integer");
  }
  return static_cast<std::int64_t>(v);
}

FitnessBatch parse_batch(const json& j, const std::string& where) {
  if (j == "iid") return FitnessBatch::kIid;
  if (j == "constant") return FitnessBatch::kConstant;
  throw ConfigError(where + ": expected \"iid\" or \"constant\"");
}

std::vector<Observable> parse_observables(const json& j) {
  std::vector<Observable> out;
  auto add = [&](const std::string& name, const json& set) {
    if (!set.is_string()) throw ConfigError("observables." + name + ": expected a set string");
    try {
      out.push_back({name, BorelSet::parse(set.get<std::string>())});
    } catch (const Error& e) {
      throw ConfigError("observables." + name + ": " + e.what());
    }
  };
  if (j.is_object()) {
    for (const auto& [name, set] : j.items()) add(name, set);
  } else if (j.is_array()) {
    for (const auto& entry : j) {
      add(require(entry, "name", "observables").get<std::string>(),
          require(entry, "set", "observables"));
    }
  } else {
    throw ConfigError("observables: expected an object or an array");
  }
  return out;
}

std::vector<std::int64_t> parse_steps(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<std::int64_t> out;
  for (const auto& v : j) out.push_back(parse_integer(v, where));
  return out;
}

}  // namespace

double parse_number(const json& value, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw ConfigError(where + ": expected a number");
  const std::string s = value.get<std::string>();
  if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s, where);
  const double num = parse_decimal(std::string_view(s).substr(0, slash), where);
  const double den = parse_decimal(std::string_view(s).substr(slash + 1), where);
  if (den == 0.0) throw ConfigError(where + ": zero denominator");
  return num / den;
}

FitnessMeasure parse_measure(const json& j) {
  if (!j.is_object()) throw ConfigError("measure: expected an object");
  std::vector<Atom> atoms;
  std::vector<UniformPiece> pieces;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2) {
        throw ConfigError("measure.atoms: entries are [location, mass]");
      }
      atoms.push_back({parse_number(a[0], "measure.atoms"),
                       parse_number(a[1], "measure.atoms")});
    }
  }
  if (j.contains("uniform_pieces")) {
    for (const auto& p : j.at("uniform_pieces")) {
      if (!p.is_array() || p.size() != 3) {
        throw ConfigError("measure.uniform_pieces: entries are [lo, hi, weight]");
      }
      pieces.push_back({parse_number(p[0], "measure.uniform_pieces"),
                        parse_number(p[1], "measure.uniform_pieces"),
                        parse_number(p[2], "measure.uniform_pieces")});
    }
  }
  try {
    return FitnessMeasure(std::move(atoms), std::move(pieces));
  } catch (const Error& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  }
}

DiscreteLaw parse_discrete_law(const json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) {
    throw ConfigError(where + ": expected exactly one of deterministic, geometric, "
                              "pmf, table, zeta");
  }
  const auto it = j.begin();
  const std::string key = it.key();
  const json& v = it.value();
  if (key == "deterministic") return DiscreteLaw::deterministic(parse_integer(v, where));
  if (key == "geometric") return DiscreteLaw::geometric(parse_number(v, where));
  if (key == "zeta") return DiscreteLaw::zeta(parse_number(v, where));
  if (key == "pmf") {
    std::vector<double> pmf;
    for (const auto& p : v) pmf.push_back(parse_number(p, where + ".pmf"));
    return DiscreteLaw::from_pmf(pmf);
  }
  if (key == "table") {
    std::vector<Count> values;
    std::vector<double> probs;
    for (const auto& row : v) {
      if (!row.is_array() || row.size() != 2) {
        throw ConfigError(where + ".table: entries are [value, probability]");
      }
      values.push_back(parse_integer(row[0], where + ".table"));
      probs.push_back(parse_number(row[1], where + ".table"));
    }
    return DiscreteLaw::table(std::move(values), std::move(probs));
  }
  throw ConfigError(where + ": unknown law \"" + key + "\"");
}

IncrementLaw parse_increments(const json& j, int* counterexample_k_max) {
  const std::string kind = require(j, "kind", "increments").get<std::string>();
  const FitnessBatch batch = j.contains("fitness_batch")
                                 ? parse_batch(j.at("fitness_batch"), "increments.fitness_batch")
                                 : FitnessBatch::kIid;
  try {
    if (kind == "gms") {
      return IncrementLaw::gms(parse_number(require(j, "p", "increments"), "increments.p"),
                               batch);
    }
    if (kind == "markov") {
      return IncrementLaw::markov(parse_number(require(j, "p", "increments"), "increments.p"),
                                  parse_number(require(j, "q", "increments"), "increments.q"),
                                  batch);
    }
    if (kind == "bp") {
      return IncrementLaw::branching(
          parse_discrete_law(require(j, "x", "increments"), "increments.x"), batch);
    }
    if (kind == "product") {
      return IncrementLaw::product(
          parse_discrete_law(require(j, "x", "increments"), "increments.x"),
          parse_discrete_law(require(j, "y", "increments"), "increments.y"), batch);
    }
    if (kind == "joint") {
      std::vector<JointEntry> table;
      for (const auto& row : require(j, "table", "increments")) {
        if (!row.is_array() || row.size() != 3) {
          throw ConfigError("increments.table: entries are [x, y, probability]");
        }
        table.push_back({parse_integer(row[0], "increments.table"),
                         parse_integer(row[1], "increments.table"),
                         parse_number(row[2], "increments.table")});
      }
      return IncrementLaw::joint(std::move(table), batch);
    }
    if (kind == "counterexample") {
      const int k_max = static_cast<int>(
          parse_integer(require(j, "k_max", "increments"), "increments.k_max"));
      if (counterexample_k_max) *counterexample_k_max = k_max;
      return build_counterexample_law(k_max).law;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("increments (" + kind + "): " + e.what());
  }
  throw ConfigError("increments: unknown kind \"" + kind + "\"");
}

namespace {

ModelConfig parse_config_unchecked(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> known = {
      "measure", "increments", "fitness_batch", "horizon", "seed", "replicas",
      "observables", "snapshot_times", "record_times", "recording", "analysis"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("config: unknown key \"" + key + "\"");
  }

  int k_max = 0;
  IncrementLaw law = parse_increments(require(j, "increments", "config"), &k_max);
  const FitnessMeasure measure =
      j.contains("measure") ? parse_measure(j.at("measure")) : FitnessMeasure::uniform();
  if (j.contains("fitness_batch")) {
    const FitnessBatch top = parse_batch(j.at("fitness_batch"), "fitness_batch");
    const auto& inc = j.at("increments");
    if (inc.contains("fitness_batch") &&
        parse_batch(inc.at("fitness_batch"), "increments.fitness_batch") != top) {
      throw ConfigError("fitness_batch: conflicting values at top level and in increments");
    }
    if (k_max == 0) law = law.with_fitness_batch(top);
  }

  ModelConfig cfg{SimConfig(measure, law)};
  cfg.counterexample_k_max = k_max;
  SimConfig& sim = cfg.sim;
  if (j.contains("horizon")) sim.horizon = parse_integer(j.at("horizon"), "horizon");
  else sim.horizon = 10'000;
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("seed: expected a non-negative integer");
    }
    sim.seed = s.get<std::uint64_t>();
  }
  if (j.contains("replicas")) {
    sim.replicas = static_cast<int>(parse_integer(j.at("replicas"), "replicas"));
  }
  if (j.contains("observables")) sim.observables = parse_observables(j.at("observables"));
  if (j.contains("snapshot_times")) {
    sim.snapshot_times = parse_steps(j.at("snapshot_times"), "snapshot_times");
  }
  if (j.contains("record_times")) {
    sim.record_times = parse_steps(j.at("record_times"), "record_times");
  }
  if (j.contains("recording")) {
    const auto& r = j.at("recording");
    if (r.contains("full_until")) {
      sim.recording.full_until = parse_integer(r.at("full_until"), "recording.full_until");
    }
    if (r.contains("stride")) {
      sim.recording.stride = parse_integer(r.at("stride"), "recording.stride");
    }
    if (r.contains("growth")) {
      sim.recording.growth = parse_number(r.at("growth"), "recording.growth");
    }
  }
  if (j.contains("analysis")) {
    const auto& a = j.at("analysis");
    if (a.contains("cdf_samples")) {
      cfg.cdf_samples = static_cast<int>(parse_integer(a.at("cdf_samples"), "analysis.cdf_samples"));
      if (cfg.cdf_samples < 2) throw ConfigError("analysis.cdf_samples: must be >= 2");
    }
  }
  try {
    sim.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace

ModelConfig parse_config(const json& j) {
  try {
    return parse_config_unchecked(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json measure_to_json(const FitnessMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms()) atoms.push_back({a.location, a.mass});
  json pieces = json::array();
  for (const auto& p : m.pieces()) pieces.push_back({p.lo, p.hi, p.weight});
  return {{"atoms", atoms}, {"uniform_pieces", pieces}};
}

}  // namespace fitevo
