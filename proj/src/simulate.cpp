#include "fitevo/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <set>
#include <thread>

#include "fitevo/errors.hpp"

namespace fitevo {

void SimConfig::validate() const {
  if (horizon < 2 || horizon % 2 != 0) {
    throw InvalidInput("horizon must be even and >= 2");
  }
  if (replicas < 1) throw InvalidInput("replicas must be >= 1");
  if (recording.stride < 1) throw InvalidInput("recording stride must be >= 1");
  if (!(recording.growth > 1.0)) throw InvalidInput("recording growth must be > 1");
  std::set<std::string> names;
  for (const Observable& o : observables) {
    if (o.name.empty()) throw InvalidInput("observable name is empty");
    if (!names.insert(o.name).second) {
      throw InvalidInput("duplicate observable name '" + o.name + "'");
    }
  }
  for (std::int64_t t : snapshot_times) {
    if (t < 0 || t > horizon) throw InvalidInput("snapshot time outside [0, horizon]");
  }
  for (std::int64_t t : record_times) {
    if (t < 0 || t > horizon) throw InvalidInput("record time outside [0, horizon]");
  }
}

Cycle draw_cycle(const FitnessMeasure& m, const IncrementLaw& law, Rng& rng) {
  Cycle c;
  const StretchPair xy = law.sample_pair(rng);
  c.births = xy.x;
  c.deaths = xy.y;
  if (xy.x <= 0) return c;
  if (law.fitness_batch() == FitnessBatch::kConstant) {
    c.batch.push_back({m.sample(rng), xy.x});
    return c;
  }
  c.batch.reserve(static_cast<std::size_t>(xy.x));
  for (Count i = 0; i < xy.x; ++i) c.batch.push_back({m.sample(rng), 1});
  return c;
}

std::vector<Cycle> draw_cycles(const FitnessMeasure& m, const IncrementLaw& law,
                               std::int64_t count, Rng& rng) {
  std::vector<Cycle> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(draw_cycle(m, law, rng));
  return out;
}

std::vector<std::int64_t> recorded_steps(std::int64_t horizon,
                                         const RecordingPolicy& policy,
                                         std::span<const std::int64_t> extra) {
  std::vector<std::int64_t> out;
  const std::int64_t full = std::min(horizon, policy.full_until);
  for (std::int64_t n = 0; n <= full; n += policy.stride) out.push_back(n);
  if (horizon > policy.full_until) {
    double g = 1.0;
    while (g <= static_cast<double>(horizon)) {
      const auto n = static_cast<std::int64_t>(std::ceil(g));
      if (n > policy.full_until && n <= horizon) out.push_back(n);
      g *= policy.growth;
    }
  }
  out.push_back(horizon);
  out.insert(out.end(), extra.begin(), extra.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Simulator::Simulator(std::vector<Observable> observables,
                     std::vector<std::int64_t> record_at,
                     std::vector<std::int64_t> snapshot_at)
    : observables_(std::move(observables)),
      record_at_(std::move(record_at)),
      snapshot_at_(std::move(snapshot_at)),
      births_(observables_.size(), 0),
      kills_(observables_.size(), 0),
      tau_(observables_.size(), 0) {
  std::sort(snapshot_at_.begin(), snapshot_at_.end());
  snapshot_at_.erase(std::unique(snapshot_at_.begin(), snapshot_at_.end()),
                     snapshot_at_.end());
  for (const Observable& o : observables_) {
    record_.observable_names.push_back(o.name);
  }
  maybe_record();
}

void Simulator::advance(const Cycle& cycle) {
  population_.birth_step(std::span<const FitnessCount>(cycle.batch));
  draws_ += cycle.births;
  for (std::size_t k = 0; k < observables_.size(); ++k) {
    const BorelSet& set = observables_[k].set;
    for (const FitnessCount& e : cycle.batch) {
      if (set.contains(e.fitness)) births_[k] += e.count;
    }
  }
  maybe_record();

  const KillReport report = population_.death_step(cycle.deaths);
  draws_ += cycle.deaths;
  for (std::size_t k = 0; k < observables_.size(); ++k) {
    const BorelSet& set = observables_[k].set;
    for (const FitnessCount& e : report.removed) {
      if (set.contains(e.fitness)) kills_[k] += e.count;
    }
    if (births_[k] == kills_[k]) ++tau_[k];
  }
  maybe_record();
}

void Simulator::maybe_record() {
  const std::int64_t n = population_.step();
  while (next_record_ < record_at_.size() && record_at_[next_record_] < n) {
    ++next_record_;
  }
  if (next_record_ < record_at_.size() && record_at_[next_record_] == n) {
    TrajectoryRow row;
    row.n = n;
    row.z = population_.total();
    row.big_n = draws_;
    for (std::size_t k = 0; k < observables_.size(); ++k) {
      row.z_obs.push_back(observed(k));
      row.k_obs.push_back(kills_[k]);
      row.tau_obs.push_back(tau_[k]);
    }
    record_.rows.push_back(std::move(row));
    ++next_record_;
  }
  while (next_snapshot_ < snapshot_at_.size() && snapshot_at_[next_snapshot_] < n) {
    ++next_snapshot_;
  }
  if (next_snapshot_ < snapshot_at_.size() && snapshot_at_[next_snapshot_] == n) {
    record_.snapshots.push_back({n, population_.total(), population_.entries()});
    ++next_snapshot_;
  }
}

TrajectoryRecord Simulator::take_record() { return std::move(record_); }

RunOutput run_detailed(const SimConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  std::vector<std::int64_t> forced = cfg.snapshot_times;
  forced.insert(forced.end(), cfg.record_times.begin(), cfg.record_times.end());
  Simulator sim(cfg.observables, recorded_steps(cfg.horizon, cfg.recording, forced),
                cfg.snapshot_times);
  const std::int64_t cycles = cfg.horizon / 2;
  for (std::int64_t i = 0; i < cycles; ++i) {
    sim.advance(draw_cycle(cfg.measure, cfg.law, rng));
  }
  RunOutput out{sim.take_record(), sim.population()};
  out.record.seed = seed;
  out.record.truncated_mass = cfg.law.truncated_mass();
  return out;
}

TrajectoryRecord run(const SimConfig& cfg) {
  return run_detailed(cfg, cfg.seed).record;
}

void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& os) {
  os << "n,Z,N";
  for (const std::string& name : record.observable_names) {
    os << ",Z_" << name << ",K_" << name << ",tau_" << name;
  }
  os << "\n";
  for (const TrajectoryRow& row : record.rows) {
    os << row.n << "," << row.z << "," << row.big_n;
    for (std::size_t k = 0; k < row.z_obs.size(); ++k) {
      os << "," << row.z_obs[k] << "," << row.k_obs[k] << "," << row.tau_obs[k];
    }
    os << "\n";
  }
}

void write_snapshot_csv(const Snapshot& snapshot, std::ostream& os) {
  os << "# step=" << snapshot.step << " total=" << snapshot.total << "\n";
  char buf[64];
  for (const FitnessCount& e : snapshot.entries) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), e.fitness);
    os.write(buf, end - buf);
    os << "," << e.count << "\n";
  }
}

QueueTrajectory queue_from_cycles(std::span<const Cycle> cycles,
                                  const BorelSet& left_interval) {
  QueueTrajectory out;
  out.queue.reserve(cycles.size() + 1);
  out.walk.reserve(cycles.size() + 1);
  Count queue = 0;
  Count walk = 0;
  out.queue.push_back(queue);
  out.walk.push_back(walk);
  for (const Cycle& c : cycles) {
    Count arrivals = 0;
    for (const FitnessCount& e : c.batch) {
      if (left_interval.contains(e.fitness)) arrivals += e.count;
    }
    const Count step = arrivals - c.deaths;
    queue += std::max(-queue, step);
    walk += step;
    out.queue.push_back(queue);
    out.walk.push_back(walk);
  }
  return out;
}

QueueTrajectory run_queue(const FitnessMeasure& m, const IncrementLaw& law,
                          double f, bool include_f, std::int64_t horizon,
                          std::uint64_t seed) {
  const BorelSet left = BorelSet::left(f, include_f);
  if (!(m.mass(left) > 0.0)) throw DomainError("left interval has zero mu-mass");
  Rng rng(seed);
  const std::vector<Cycle> cycles = draw_cycles(m, law, horizon / 2, rng);
  return queue_from_cycles(cycles, left);
}

std::vector<Count> population_counts_from_cycles(std::span<const Cycle> cycles,
                                                 const BorelSet& set) {
  std::vector<Count> out;
  out.reserve(cycles.size() + 1);
  Population pop;
  out.push_back(0);
  for (const Cycle& c : cycles) {
    pop.birth_step(std::span<const FitnessCount>(c.batch));
    pop.death_step(c.deaths);
    out.push_back(pop.count_in(set));
  }
  return out;
}

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FITNESS_EVO_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const auto workers =
      static_cast<std::size_t>(std::min<std::size_t>(worker_threads(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        if (failed) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

SeriesStats stats_over(const std::vector<std::vector<double>>& per_replica) {
  SeriesStats s;
  const std::size_t steps = per_replica.front().size();
  const double r = static_cast<double>(per_replica.size());
  for (std::size_t i = 0; i < steps; ++i) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& series : per_replica) {
      sum += series[i];
      lo = std::min(lo, series[i]);
      hi = std::max(hi, series[i]);
    }
    const double mean = sum / r;
    double ss = 0.0;
    for (const auto& series : per_replica) ss += (series[i] - mean) * (series[i] - mean);
    s.mean.push_back(mean);
    s.stddev.push_back(per_replica.size() > 1 ? std::sqrt(ss / (r - 1.0)) : 0.0);
    s.min.push_back(lo);
    s.max.push_back(hi);
  }
  return s;
}

}  // namespace

Aggregate replicate(const SimConfig& cfg, bool keep_records) {
  cfg.validate();
  const auto replicas = static_cast<std::size_t>(cfg.replicas);
  std::vector<TrajectoryRecord> records(replicas);
  std::vector<double> sup(replicas, 0.0);
  std::vector<double> z_over_n(replicas, 0.0);

  std::optional<TargetCdf> target;
  auto shape = ShapeLaw::build(cfg.measure, cfg.law);
  if (shape.defined()) {
    target = TargetCdf::of(shape.value());
  } else if (!cfg.law.mean_x().is_finite()) {
    target = TargetCdf::of(cfg.measure);
  }

  parallel_for(replicas, [&](std::size_t r) {
    const std::uint64_t seed = cfg.seed_mode == SeedMode::kIdentical
                                   ? cfg.seed
                                   : replica_seed(cfg.seed, r);
    RunOutput out = run_detailed(cfg, seed);
    const Population& pop = out.population;
    z_over_n[r] = static_cast<double>(pop.total()) / static_cast<double>(cfg.horizon);
    if (target && pop.total() > 0) {
      const std::vector<CdfStep> cdf = pop.empirical_cdf();
      sup[r] = sup_distance(cdf, *target);
    }
    records[r] = std::move(out.record);
  });

  Aggregate agg;
  agg.replicas = cfg.replicas;
  for (const TrajectoryRow& row : records.front().rows) agg.steps.push_back(row.n);
  auto collect = [&](const std::string& key, auto&& extract) {
    std::vector<std::vector<double>> per;
    per.reserve(replicas);
    for (const TrajectoryRecord& rec : records) {
      std::vector<double> v;
      v.reserve(rec.rows.size());
      for (const TrajectoryRow& row : rec.rows) v.push_back(extract(row));
      per.push_back(std::move(v));
    }
    agg.series.emplace(key, stats_over(per));
  };
  collect("Z", [](const TrajectoryRow& row) { return static_cast<double>(row.z); });
  collect("N", [](const TrajectoryRow& row) { return static_cast<double>(row.big_n); });
  for (std::size_t k = 0; k < cfg.observables.size(); ++k) {
    const std::string& name = cfg.observables[k].name;
    collect("Z_" + name, [k](const TrajectoryRow& row) {
      return static_cast<double>(row.z_obs[k]);
    });
    collect("K_" + name, [k](const TrajectoryRow& row) {
      return static_cast<double>(row.k_obs[k]);
    });
    collect("tau_" + name, [k](const TrajectoryRow& row) {
      return static_cast<double>(row.tau_obs[k]);
    });
  }
  if (target) agg.final_sup_distance = std::move(sup);
  agg.final_z_over_n = std::move(z_over_n);
  if (keep_records) agg.records = std::move(records);
  return agg;
}

TargetCdf TargetCdf::of(const ShapeLaw& shape) {
  return {[shape](double f) { return shape.cdf(f); },
          [shape](double f) { return shape.cdf_left(f); }, shape.breakpoints()};
}

TargetCdf TargetCdf::of(const FitnessMeasure& m) {
  return {[m](double f) { return m.cdf(f); },
          [m](double f) { return m.cdf_left(f); }, m.breakpoints()};
}

double sup_distance(std::span<const CdfStep> snapshot, const TargetCdf& target) {
  std::vector<double> candidates = target.breakpoints;
  candidates.push_back(0.0);
  candidates.push_back(1.0);
  for (const CdfStep& s : snapshot) candidates.push_back(s.fitness);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  double best = 0.0;
  std::size_t j = 0;  // snapshot steps with fitness < c
  double below = 0.0;
  for (double c : candidates) {
    while (j < snapshot.size() && snapshot[j].fitness < c) {
      below = snapshot[j].cumulative;
      ++j;
    }
    const double at = (j < snapshot.size() && snapshot[j].fitness == c)
                          ? snapshot[j].cumulative
                          : below;
    best = std::max(best, std::abs(at - target.value(c)));
    if (c > 0.0) best = std::max(best, std::abs(below - target.left_limit(c)));
  }
  return best;
}

Outcome<double> sup_distance(std::span<const CdfStep> snapshot,
                             const FitnessMeasure& m, const IncrementLaw& law) {
  if (snapshot.empty()) throw EmptyPopulationError("empty snapshot");
  auto shape = ShapeLaw::build(m, law);
  if (!shape.defined()) return Outcome<double>::undefined(shape.reason());
  return Outcome<double>::ok(sup_distance(snapshot, TargetCdf::of(shape.value())));
}

double bp_hit_frequency(const FitnessMeasure& m, const IncrementLaw& law,
                        double f, std::int64_t horizon, int replicas,
                        std::uint64_t seed) {
  const BorelSet left = BorelSet::left(f, true);
  if (!(m.mass(left) > 0.0)) throw DomainError("[0,f] has zero mu-mass");
  if (replicas < 1) throw InvalidInput("replicas must be >= 1");
  std::vector<char> hit(static_cast<std::size_t>(replicas), 0);
  parallel_for(hit.size(), [&](std::size_t r) {
    Rng rng(replica_seed(seed, r));
    double start = m.sample(rng);
    while (!left.contains(start)) start = m.sample(rng);
    Population pop;
    const FitnessCount first{start, 1};
    pop.birth_step(std::span<const FitnessCount>(&first, 1));
    // The first cycle only contributes its death count.
    Cycle c = draw_cycle(m, law, rng);
    pop.death_step(c.deaths);
    while (pop.step() + 1 <= horizon) {
      c = draw_cycle(m, law, rng);
      pop.birth_step(std::span<const FitnessCount>(c.batch));
      if (pop.count_in(left) == 0) {
        hit[r] = 1;
        return;
      }
      if (pop.step() + 1 > horizon) break;
      pop.death_step(c.deaths);
    }
  });
  const auto hits = std::count(hit.begin(), hit.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(replicas);
}

CounterexampleLaw build_counterexample_law(int k_max) {
  if (k_max < 1) throw InvalidInput("k_max must be >= 1");
  CounterexampleLaw cx;
  cx.k_max = k_max;
  for (int i = 0; i <= k_max + 1; ++i) {
    cx.thresholds.push_back(static_cast<std::int64_t>(i) * (i + 1) / 2);
  }
  // tau_k: smallest nondecreasing integer with
  // P(T_k <= tau_k) * P(H <= n_{k+1} | H > n_k) >= 1 - 2^-k, where
  // T_k ~ G(2^-n_k) and the conditional probability is 1 - 2^-(k+1).
  std::int64_t prev_tau = 1;
  __int128 product = 1;  // prod_{j<=k} tau_j
  __int128 factorial = 1;
  const __int128 limit = std::numeric_limits<Count>::max();
  for (int k = 0; k <= k_max; ++k) {
    const double target = (1.0 - std::ldexp(1.0, -k)) / (1.0 - std::ldexp(1.0, -(k + 1)));
    std::int64_t tau = 1;
    const double p = std::ldexp(1.0, -static_cast<int>(cx.thresholds[k]));
    if (p < 1.0) {
      tau = static_cast<std::int64_t>(std::ceil(std::log1p(-target) / std::log1p(-p)));
      // Guard the floating-point ceiling against a one-off miss.
      while (1.0 - std::exp(static_cast<double>(tau) * std::log1p(-p)) < target) ++tau;
    }
    tau = std::max(tau, prev_tau);
    prev_tau = tau;
    cx.tau.push_back(tau);
    factorial *= (k + 1);
    product *= tau;
    const __int128 g = factorial * product;
    if (g > limit || factorial > limit || product > limit) {
      throw Error("counterexample g overflows 64-bit counts at k = " +
                  std::to_string(k) + "; largest feasible k_max is " +
                  std::to_string(k - 1));
    }
    cx.block_values.push_back(static_cast<Count>(g));
  }
  std::vector<double> probs;
  for (int k = 0; k <= k_max; ++k) {
    const double lo = std::ldexp(1.0, -static_cast<int>(cx.thresholds[k]));
    const double hi = k == k_max
                          ? 0.0
                          : std::ldexp(1.0, -static_cast<int>(cx.thresholds[k + 1]));
    probs.push_back(lo - hi);
  }
  cx.truncated_mass = std::ldexp(1.0, -static_cast<int>(cx.thresholds[k_max + 1]));
  cx.law = IncrementLaw::branching(DiscreteLaw::table(cx.block_values, probs),
                                   FitnessBatch::kConstant);
  return cx;
}

CounterexampleDemo run_counterexample(const CounterexampleLaw& cx,
                                      const FitnessMeasure& m,
                                      const BorelSet& set, std::int64_t horizon,
                                      std::uint64_t seed) {
  Rng rng(seed);
  Simulator sim({{"A", set}}, {}, {});
  CounterexampleDemo demo;
  demo.seed = seed;
  for (std::int64_t i = 0; i < horizon / 2; ++i) {
    sim.advance(draw_cycle(m, cx.law, rng));
    const Count total = sim.population().total();
    if (total == 0) continue;
    const double frac = static_cast<double>(sim.observed(0)) / static_cast<double>(total);
    if (frac > demo.max_fraction) {
      demo.max_fraction = frac;
      demo.max_step = sim.population().step();
      demo.min_fraction_after = 1.0;
    } else {
      demo.min_fraction_after = std::min(demo.min_fraction_after, frac);
    }
  }
  return demo;
}

}  // namespace fitevo
