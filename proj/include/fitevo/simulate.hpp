#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fitevo/analytics.hpp"
#include "fitevo/borel_set.hpp"
#include "fitevo/increments.hpp"
#include "fitevo/measure.hpp"
#include "fitevo/population.hpp"

namespace fitevo {

struct Observable {
  std::string name;
  BorelSet set;
};

/// Which steps get a trajectory row.
struct RecordingPolicy {
  /// Every `stride`-th step is recorded up to this step...
  std::int64_t full_until = 10'000;
  std::int64_t stride = 1;
  /// ...then only steps ceil(growth^k).
  double growth = 1.01;
};

enum class SeedMode {
  kDerived,    // replica r uses replica_seed(seed, r)
  kIdentical,  // every replica uses `seed` (testing aid)
};

struct SimConfig {
  SimConfig(FitnessMeasure m, IncrementLaw l)
      : measure(std::move(m)), law(std::move(l)) {}

  FitnessMeasure measure;
  IncrementLaw law;
  /// Number of steps; even and >= 2.
  std::int64_t horizon = 2;
  std::vector<Observable> observables;
  std::vector<std::int64_t> snapshot_times;
  /// Extra steps that must get a trajectory row.
  std::vector<std::int64_t> record_times;
  std::uint64_t seed = 1;
  int replicas = 1;
  SeedMode seed_mode = SeedMode::kDerived;
  RecordingPolicy recording;

  /// Throws InvalidInput on a bad horizon, replica count or duplicate names.
  void validate() const;
};

/// One odd/even step pair: X births with their fitness, then Y deaths.
struct Cycle {
  Count births = 0;
  Count deaths = 0;
  std::vector<FitnessCount> batch;
};

/// Draws one cycle: the (X, Y) pair first, then the fitness values.
Cycle draw_cycle(const FitnessMeasure& m, const IncrementLaw& law, Rng& rng);
std::vector<Cycle> draw_cycles(const FitnessMeasure& m, const IncrementLaw& law,
                               std::int64_t count, Rng& rng);

struct TrajectoryRow {
  std::int64_t n = 0;
  Count z = 0;
  /// Cumulative X + Y drawn up to step n.
  Count big_n = 0;
  std::vector<Count> z_obs;
  std::vector<Count> k_obs;
  std::vector<std::int64_t> tau_obs;
};

struct Snapshot {
  std::int64_t step = 0;
  Count total = 0;
  std::vector<FitnessCount> entries;
};

struct TrajectoryRecord {
  std::vector<std::string> observable_names;
  std::vector<TrajectoryRow> rows;
  std::vector<Snapshot> snapshots;
  std::uint64_t seed = 0;
  double truncated_mass = 0.0;
};

/// Steps that receive a row for this horizon and policy (always includes 0,
/// the horizon and every snapshot time).
std::vector<std::int64_t> recorded_steps(std::int64_t horizon,
                                         const RecordingPolicy& policy,
                                         std::span<const std::int64_t> extra);

/// Drives a Population cycle by cycle and keeps per-observable counters.
///
/// Z_n(A) is tracked incrementally as births into A minus kills in A, so
/// recording costs O(batch size * observables) per step rather than a scan.
class Simulator {
 public:
  Simulator(std::vector<Observable> observables,
            std::vector<std::int64_t> record_at,
            std::vector<std::int64_t> snapshot_at);

  void advance(const Cycle& cycle);

  const Population& population() const { return population_; }
  Count observed(std::size_t k) const { return births_[k] - kills_[k]; }
  Count killed(std::size_t k) const { return kills_[k]; }
  std::int64_t empty_epochs(std::size_t k) const { return tau_[k]; }
  Count cumulative_draws() const { return draws_; }

  TrajectoryRecord take_record();

 private:
  void maybe_record();

  Population population_;
  std::vector<Observable> observables_;
  std::vector<std::int64_t> record_at_;
  std::vector<std::int64_t> snapshot_at_;
  std::size_t next_record_ = 0;
  std::size_t next_snapshot_ = 0;
  std::vector<Count> births_;
  std::vector<Count> kills_;
  std::vector<std::int64_t> tau_;
  Count draws_ = 0;
  TrajectoryRecord record_;
};

struct RunOutput {
  TrajectoryRecord record;
  Population population;
};

/// One seeded run; bit-identical for identical configs.
RunOutput run_detailed(const SimConfig& cfg, std::uint64_t seed);
TrajectoryRecord run(const SimConfig& cfg);

/// "n,Z,N" then Z_<name>,K_<name>,tau_<name> per observable.
void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& os);
/// "# step=<n> total=<Z>" then one "fitness,count" row per distinct fitness.
void write_snapshot_csv(const Snapshot& snapshot, std::ostream& os);

/// Reduced dynamics of a left interval I, next to the free walk
/// S_n = sum (X~_i - Y_i), both indexed by cycle n = 0..cycles.
struct QueueTrajectory {
  std::vector<Count> queue;
  std::vector<Count> walk;
};

QueueTrajectory queue_from_cycles(std::span<const Cycle> cycles,
                                  const BorelSet& left_interval);
/// Draws horizon/2 cycles from `seed` and reduces them. Throws DomainError
/// when mu(I) = 0.
QueueTrajectory run_queue(const FitnessMeasure& m, const IncrementLaw& law,
                          double f, bool include_f, std::int64_t horizon,
                          std::uint64_t seed);
/// Z_{2n}(set) for n = 0..cycles from the full population engine.
std::vector<Count> population_counts_from_cycles(std::span<const Cycle> cycles,
                                                 const BorelSet& set);

struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> min;
  std::vector<double> max;
};

struct Aggregate {
  std::vector<std::int64_t> steps;
  int replicas = 0;
  /// Keys: "Z", "N", then Z_<name>, K_<name>, tau_<name>.
  std::map<std::string, SeriesStats> series;
  /// Per-replica sup distance of the final empirical CDF to the limit CDF
  /// (empty when the limit shape is undefined).
  std::vector<double> final_sup_distance;
  std::vector<double> final_z_over_n;
  std::vector<TrajectoryRecord> records;
};

/// Runs cfg.replicas seeded replicas in parallel and aggregates per step.
Aggregate replicate(const SimConfig& cfg, bool keep_records = false);

/// Replica parallelism: FITNESS_EVO_THREADS if set, else hardware threads.
unsigned worker_threads();
/// Calls fn(i) for i in [0, count) on up to worker_threads() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// A right-continuous CDF with known discontinuity/kink points.
struct TargetCdf {
  std::function<double(double)> value;
  std::function<double(double)> left_limit;
  std::vector<double> breakpoints;

  static TargetCdf of(const ShapeLaw& shape);
  static TargetCdf of(const FitnessMeasure& m);
};

/// Exact sup over [0,1] of |S(f) - G(f)|, checking both one-sided limits at
/// every jump of the step function S and every breakpoint of G.
double sup_distance(std::span<const CdfStep> snapshot, const TargetCdf& target);
Outcome<double> sup_distance(std::span<const CdfStep> snapshot,
                             const FitnessMeasure& m, const IncrementLaw& law);

/// Monte Carlo hit-zero frequency for Z([0,f]) at odd steps, started from a
/// single species in [0,f] at step 1, up to `horizon` steps.
double bp_hit_frequency(const FitnessMeasure& m, const IncrementLaw& law,
                        double f, std::int64_t horizon, int replicas,
                        std::uint64_t seed);

/// Dependent-fitness construction with heavy, rare birth bursts.
struct CounterexampleLaw {
  IncrementLaw law;
  int k_max = 0;
  /// n_i = i(i+1)/2 for i = 0..k_max+1.
  std::vector<std::int64_t> thresholds;
  /// tau_k for k = 0..k_max.
  std::vector<std::int64_t> tau;
  /// g on block (n_k, n_{k+1}] for k = 0..k_max.
  std::vector<Count> block_values;
  /// P(H > n_{k_max+1}), folded into the last block.
  double truncated_mass = 0.0;
};

/// Throws InvalidInput for k_max < 1 and Error (naming the largest feasible
/// k_max) when g overflows 64-bit counts.
CounterexampleLaw build_counterexample_law(int k_max);

struct CounterexampleDemo {
  std::uint64_t seed = 0;
  double max_fraction = 0.0;
  std::int64_t max_step = 0;
  /// Smallest Z_n(A)/Z_n seen after max_step.
  double min_fraction_after = 1.0;
};

/// Tracks Z_n(A)/Z_n at every even step of one run.
CounterexampleDemo run_counterexample(const CounterexampleLaw& cx,
                                      const FitnessMeasure& m,
                                      const BorelSet& set, std::int64_t horizon,
                                      std::uint64_t seed);

}  // namespace fitevo
