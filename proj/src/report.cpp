#include "fitevo/report.hpp"

#include <numeric>

#include "fitevo/analytics.hpp"

namespace fitevo {

using nlohmann::json;

json to_json(const ExtendedReal& x) {
  if (x.is_finite()) return x.value();
  return to_string(x);
}

namespace {

json recurrence_entry(const FitnessMeasure& m, const IncrementLaw& law, double f,
                      bool include_f, json& undefined, const std::string& field) {
  json out;
  out["interval"] = BorelSet::left(f, include_f).to_string();
  try {
    const RecurrenceClass rc = classify_left_interval(m, law, f, include_f);
    out["class"] = to_string(rc.tag);
    out["drift"] = to_json(rc.drift);
  } catch (const Error& e) {
    out["class"] = nullptr;
    out["drift"] = nullptr;
    undefined.push_back({{"field", field}, {"reason", e.what()}});
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

json analysis_report(const ModelConfig& cfg) {
  const FitnessMeasure& m = cfg.sim.measure;
  const IncrementLaw& law = cfg.sim.law;
  json undefined = json::array();
  auto flag = [&](const std::string& field, const std::string& reason) {
    undefined.push_back({{"field", field}, {"reason", reason}});
  };

  json r;
  r["model"] = {{"increments", law.describe()},
                {"fitness_batch",
                 law.fitness_batch() == FitnessBatch::kIid ? "iid" : "constant"},
                {"measure", measure_to_json(m)},
                {"truncated_mass", law.truncated_mass()}};
  r["mean_x"] = to_json(law.mean_x());
  r["mean_y"] = to_json(law.mean_y());
  r["ratio"] = to_json(birth_death_ratio(law));

  const ExtendedReal fc = critical_fitness(m, law);
  r["f_c"] = to_json(fc);
  if (fc.is_finite()) {
    const double f = fc.value();
    const double F = m.cdf(f);
    const double F_left = m.cdf_left(f);
    r["F_at_fc"] = F;
    r["F_left_at_fc"] = F_left;
    r["drift_at_fc"] = to_json(drift(law, F));
    r["drift_left_at_fc"] = to_json(drift(law, F_left));
    r["recurrence"] = {
        {"closed", recurrence_entry(m, law, f, true, undefined, "recurrence.closed")},
        {"left_open", recurrence_entry(m, law, f, false, undefined, "recurrence.left_open")}};
  } else {
    const std::string why = "f_c = +inf: E[Y] >= E[X], every fitness level dies out";
    for (const char* field : {"F_at_fc", "F_left_at_fc", "drift_at_fc", "drift_left_at_fc",
                              "recurrence"}) {
      r[field] = nullptr;
      flag(field, why);
    }
  }

  const Outcome<ShapeLaw> shape = ShapeLaw::build(m, law);
  if (shape.defined()) {
    const ShapeLaw& s = shape.value();
    json samples = json::array();
    const int n = cfg.cdf_samples;
    for (int i = 0; i < n; ++i) {
      const double f = static_cast<double>(i) / (n - 1);
      samples.push_back({f, s.cdf(f)});
    }
    r["shape"] = {{"atom_at_fc", s.atom_at_fc()},
                  {"continuous_factor", s.continuous_factor()},
                  {"cdf_samples", samples}};
  } else {
    r["shape"] = {{"atom_at_fc", nullptr}, {"continuous_factor", nullptr},
                  {"cdf_samples", nullptr}};
    flag("shape", shape.reason());
  }

  const Outcome<KillDynamics> kills = kill_dynamics(m, law);
  if (kills.defined()) {
    const KillDynamics& k = kills.value();
    r["kill_report"] = {{"rate_below_fc", k.rate_below_fc},
                        {"rate_at_fc", k.rate_at_fc},
                        {"rate_above_fc", k.rate_above_fc},
                        {"kills_above_fc_bounded", k.kills_above_fc_bounded},
                        {"rate_at_or_above_fc_positive", k.rate_at_or_above_fc_positive}};
  } else {
    r["kill_report"] = nullptr;
    flag("kill_report", kills.reason());
  }

  if (!law.deaths_are_unit()) {
    r["bp_extinction"] = nullptr;
    flag("bp_extinction", "branching-process reduction needs Y = 1");
  } else if (!fc.is_finite()) {
    r["bp_extinction"] = nullptr;
    flag("bp_extinction", "f_c = +inf");
  } else {
    json bp;
    for (const bool left_open : {false, true}) {
      const char* key = left_open ? "left_open" : "closed";
      try {
        bp[key] = bp_fixed_point(m, law, fc.value(), left_open);
      } catch (const Error& e) {
        bp[key] = nullptr;
        flag(std::string("bp_extinction.") + key, e.what());
      }
    }
    r["bp_extinction"] = bp;
  }

  r["undefined"] = undefined;
  return r;
}

json aggregate_report(const ModelConfig& cfg, const Aggregate& agg) {
  json r;
  r["increments"] = cfg.sim.law.describe();
  r["measure"] = measure_to_json(cfg.sim.measure);
  r["horizon"] = cfg.sim.horizon;
  r["seed"] = cfg.sim.seed;
  r["replicas"] = agg.replicas;
  r["truncated_mass"] = cfg.sim.law.truncated_mass();
  json names = json::array();
  for (const Observable& o : cfg.sim.observables) {
    names.push_back({{"name", o.name}, {"set", o.set.to_string()}});
  }
  r["observables"] = names;
  r["steps"] = agg.steps;
  json series;
  for (const auto& [name, s] : agg.series) {
    series[name] = {{"mean", s.mean}, {"std", s.stddev}, {"min", s.min}, {"max", s.max}};
  }
  r["series"] = series;
  r["final_z_over_n"] = agg.final_z_over_n;
  r["mean_final_z_over_n"] = mean_of(agg.final_z_over_n);
  if (agg.final_sup_distance.empty()) {
    r["final_sup_distance"] = nullptr;
    r["mean_final_sup_distance"] = nullptr;
  } else {
    r["final_sup_distance"] = agg.final_sup_distance;
    r["mean_final_sup_distance"] = mean_of(agg.final_sup_distance);
  }
  return r;
}

}  // namespace fitevo
