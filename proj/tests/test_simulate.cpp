#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fitevo/errors.hpp"
#include "fitevo/simulate.hpp"

using namespace fitevo;

namespace {

const FitnessMeasure kHalf = FitnessMeasure::atom_plus_uniform(0.5);

// Brute-force sup over a fine grid plus both sides of every jump.
double grid_sup(std::span<const CdfStep> snap, const TargetCdf& target,
                int grid) {
  auto step_at = [&](double f) {
    double v = 0.0;
    for (const CdfStep& s : snap) {
      if (s.fitness <= f) v = s.cumulative;
    }
    return v;
  };
  double best = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double f = static_cast<double>(i) / grid;
    best = std::max(best, std::abs(step_at(f) - target.value(f)));
  }
  for (const CdfStep& s : snap) {
    const double below = std::nextafter(s.fitness, 0.0);
    best = std::max(best, std::abs(step_at(below) - target.value(below)));
  }
  return best;
}

}  // namespace

TEST_CASE("unit births and deaths alternate deterministically") {
  SimConfig cfg(FitnessMeasure::dirac(0.5),
                IncrementLaw::product(DiscreteLaw::deterministic(1),
                                      DiscreteLaw::deterministic(1)));
  cfg.horizon = 4;
  const TrajectoryRecord rec = run(cfg);
  std::vector<Count> z;
  for (const TrajectoryRow& row : rec.rows) z.push_back(row.z);
  CHECK(z == std::vector<Count>{0, 1, 0, 1, 0});
}

TEST_CASE("gms(2/3) growth and timescale at horizon 2e5") {
  SimConfig cfg(kHalf, IncrementLaw::gms(2.0 / 3.0));
  cfg.horizon = 200'000;
  cfg.seed = 17;
  const TrajectoryRecord rec = run(cfg);
  const TrajectoryRow& last = rec.rows.back();
  REQUIRE(last.n == cfg.horizon);
  const double zn = static_cast<double>(last.z) / static_cast<double>(last.n);
  const double nn = static_cast<double>(last.big_n) / static_cast<double>(last.n);
  CHECK(zn >= 0.735);
  CHECK(zn <= 0.765);
  CHECK(nn >= 2.2);
  CHECK(nn <= 2.3);
}

TEST_CASE("config validation") {
  SimConfig cfg(kHalf, IncrementLaw::gms(0.7));
  cfg.horizon = 7;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.horizon = 10;
  cfg.observables = {{"a", BorelSet::unit()}, {"a", BorelSet::empty()}};
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.observables.clear();
  cfg.replicas = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("recorded steps: full phase, geometric thinning, forced steps") {
  RecordingPolicy policy;
  const std::vector<std::int64_t> extra = {12'345};
  const auto steps = recorded_steps(200'000, policy, extra);
  CHECK(steps.front() == 0);
  CHECK(steps.back() == 200'000);
  CHECK(std::binary_search(steps.begin(), steps.end(), 10'000));
  CHECK(std::binary_search(steps.begin(), steps.end(), 12'345));
  CHECK(steps.size() < 10'001 + 400);
  CHECK(std::is_sorted(steps.begin(), steps.end()));
  policy.stride = 10;
  const auto thin = recorded_steps(100, policy, {});
  CHECK(thin.size() == 11);
}

TEST_CASE("determinism, conservation and tau accounting") {
  SimConfig cfg(kHalf, IncrementLaw::gms(0.6));
  cfg.horizon = 6'000;
  cfg.seed = 5;
  cfg.observables = {{"low", BorelSet::left(0.5, false)},
                     {"atom", BorelSet::singleton(0.5)},
                     {"high", BorelSet::interval(0.5, 1.0, false, true)}};
  cfg.snapshot_times = {1'000, 6'000};
  const TrajectoryRecord a = run(cfg);
  const TrajectoryRecord b = run(cfg);
  std::ostringstream sa;
  std::ostringstream sb;
  write_trajectory_csv(a, sa);
  write_trajectory_csv(b, sb);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("n,Z,N,Z_low,K_low,tau_low,Z_atom,K_atom,tau_atom,Z_high,K_high,tau_high\n", 0) == 0);
  REQUIRE(a.snapshots.size() == 2);
  CHECK(a.snapshots[0].step == 1'000);

  // Recompute births per observable and tau from the same random stream.
  Rng rng(cfg.seed);
  std::vector<Count> births(3, 0);
  std::vector<std::int64_t> tau(3, 0);
  std::vector<Count> prev_k(3, 0);
  Population pop;
  std::size_t row = 1;
  for (std::int64_t cycle = 0; cycle < cfg.horizon / 2; ++cycle) {
    const Cycle c = draw_cycle(cfg.measure, cfg.law, rng);
    pop.birth_step(std::span<const FitnessCount>(c.batch));
    for (std::size_t k = 0; k < 3; ++k) {
      for (const FitnessCount& e : c.batch) {
        if (cfg.observables[k].set.contains(e.fitness)) births[k] += e.count;
      }
    }
    REQUIRE(a.rows[row].n == pop.step());
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(a.rows[row].z_obs[k] + a.rows[row].k_obs[k] == births[k]);
      CHECK(a.rows[row].z_obs[k] == pop.count_in(cfg.observables[k].set));
    }
    ++row;
    pop.death_step(c.deaths);
    for (std::size_t k = 0; k < 3; ++k) {
      if (pop.count_in(cfg.observables[k].set) == 0) ++tau[k];
      CHECK(a.rows[row].tau_obs[k] == tau[k]);
      CHECK(a.rows[row].k_obs[k] >= prev_k[k]);
      CHECK(a.rows[row].z_obs[k] + a.rows[row].k_obs[k] == births[k]);
      prev_k[k] = a.rows[row].k_obs[k];
    }
    ++row;
  }
}

TEST_CASE("queue recursion equals the reflected free walk") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const double f = 0.05 * static_cast<double>(seed);
    const QueueTrajectory q =
        run_queue(kHalf, IncrementLaw::markov(0.7, 0.3), f, seed % 2 == 0, 4'000, seed);
    Count running_min = 0;
    for (std::size_t n = 0; n < q.queue.size(); ++n) {
      running_min = std::min(running_min, q.walk[n]);
      REQUIRE(q.queue[n] == q.walk[n] - running_min);
    }
  }
  CHECK_THROWS_AS(run_queue(FitnessMeasure::dirac(0.5), IncrementLaw::gms(0.6), 0.2,
                            true, 100, 1),
                  DomainError);
}

TEST_CASE("shared stream: full population matches the queue") {
  Rng rng(77);
  const IncrementLaw law = IncrementLaw::gms(0.55);
  const std::vector<Cycle> cycles = draw_cycles(kHalf, law, 5'000, rng);
  for (double f : {0.2, 0.5, 0.8}) {
    for (bool include : {true, false}) {
      const BorelSet left = BorelSet::left(f, include);
      const QueueTrajectory q = queue_from_cycles(cycles, left);
      CHECK(population_counts_from_cycles(cycles, left) == q.queue);
    }
  }
}

TEST_CASE("null-recurrent queue returns to zero") {
  const QueueTrajectory q =
      run_queue(kHalf, IncrementLaw::gms(4.0 / 7.0), 0.5, true, 100'000, 2024);
  const auto zeros = std::count(q.queue.begin() + 1, q.queue.end(), 0);
  CHECK(zeros >= 1);
}

TEST_CASE("unit arrivals and deaths give a flat walk") {
  const QueueTrajectory q = run_queue(
      FitnessMeasure::dirac(0.3),
      IncrementLaw::product(DiscreteLaw::deterministic(1), DiscreteLaw::deterministic(1)),
      0.5, true, 200, 3);
  for (std::size_t n = 0; n < q.walk.size(); ++n) {
    CHECK(q.walk[n] == 0);
    CHECK(q.queue[n] == 0);
  }
}

TEST_CASE("replicas with identical seeds have zero spread") {
  SimConfig cfg(kHalf, IncrementLaw::gms(0.7));
  cfg.horizon = 2'000;
  cfg.replicas = 2;
  cfg.seed_mode = SeedMode::kIdentical;
  cfg.observables = {{"low", BorelSet::left(0.5, true)}};
  const Aggregate agg = replicate(cfg);
  for (const auto& [name, s] : agg.series) {
    for (double sd : s.stddev) CHECK(sd == 0.0);
  }
  REQUIRE(agg.final_sup_distance.size() == 2);
  CHECK(agg.final_sup_distance[0] == agg.final_sup_distance[1]);

  cfg.seed_mode = SeedMode::kDerived;
  const Aggregate varied = replicate(cfg);
  CHECK(varied.series.at("Z").stddev.back() > 0.0);
  CHECK(varied.series.at("Z").mean.size() == varied.steps.size());
}

TEST_CASE("sup distance") {
  const ShapeLaw shape = ShapeLaw::build(kHalf, IncrementLaw::gms(0.8)).value();
  const TargetCdf target = TargetCdf::of(shape);
  // Step function sampled from the target at its own atoms is exact there.
  const std::vector<CdfStep> atom_only = {{0.5, 1.0}};
  const double d = sup_distance(atom_only, target);
  CHECK(d == doctest::Approx(grid_sup(atom_only, target, 10'000)).epsilon(1e-9));
  CHECK(d == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const TargetCdf point = TargetCdf::of(FitnessMeasure::dirac(0.4));
  const std::vector<CdfStep> exact = {{0.4, 1.0}};
  CHECK(sup_distance(exact, point) < 1e-12);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CdfStep> snap;
    double acc = 0.0;
    const int k = 1 + static_cast<int>(rng() % 15);
    std::vector<double> xs;
    for (int i = 0; i < k; ++i) xs.push_back(uniform01(rng));
    std::sort(xs.begin(), xs.end());
    for (int i = 0; i < k; ++i) {
      acc = static_cast<double>(i + 1) / k;
      snap.push_back({xs[i], acc});
    }
    CHECK(sup_distance(snap, target) ==
          doctest::Approx(grid_sup(snap, target, 20'000)).epsilon(1e-3));
  }
  CHECK_FALSE(sup_distance(exact, kHalf, IncrementLaw::gms(0.4)).defined());
}

TEST_CASE("transient run: late counts above f_c only grow and tau freezes") {
  SimConfig cfg(kHalf, IncrementLaw::gms(2.0 / 3.0));
  cfg.horizon = 100'000;
  cfg.seed = 11;
  cfg.observables = {{"I", BorelSet::left(0.5, true)},
                     {"J", BorelSet::interval(0.6, 1.0, false, true)}};
  const TrajectoryRecord rec = run(cfg);
  Count prev_j = -1;
  std::int64_t tau_half = -1;
  for (const TrajectoryRow& row : rec.rows) {
    if (row.n >= cfg.horizon * 9 / 10) {
      CHECK(row.z_obs[1] >= prev_j);
      prev_j = row.z_obs[1];
    }
    if (row.n >= cfg.horizon / 2) {
      if (tau_half < 0) tau_half = row.tau_obs[0];
      CHECK(row.tau_obs[0] == tau_half);
    }
  }
}

TEST_CASE("branching hit frequency is near the fixed point") {
  const double freq = bp_hit_frequency(
      FitnessMeasure::uniform(), IncrementLaw::branching(DiscreteLaw::deterministic(2)),
      0.75, 2'000, 3'000, 9);
  // q = 1/9, sd of the estimate is about 0.0057.
  CHECK(freq > 0.08);
  CHECK(freq < 0.14);
}

TEST_CASE("counterexample construction") {
  const CounterexampleLaw one = build_counterexample_law(1);
  CHECK(one.thresholds == std::vector<std::int64_t>{0, 1, 3});
  CHECK(one.tau == std::vector<std::int64_t>{1, 2});
  CHECK(one.block_values == std::vector<Count>{1, 4});
  CHECK(one.law.fitness_batch() == FitnessBatch::kConstant);
  CHECK(one.law.deaths_are_unit());
  const auto* table = std::get_if<FiniteTable>(&one.law.law_x().variant());
  REQUIRE(table != nullptr);
  CHECK(table->probabilities[0] == doctest::Approx(0.5));
  CHECK(table->probabilities[1] == doctest::Approx(0.5));
  CHECK(one.truncated_mass == doctest::Approx(0.125));

  const CounterexampleLaw five = build_counterexample_law(5);
  for (std::size_t k = 1; k < five.tau.size(); ++k) {
    CHECK(five.tau[k] >= five.tau[k - 1]);
    // The defining bound holds for the chosen tau_k.
    const double p = std::ldexp(1.0, -static_cast<int>(five.thresholds[k]));
    const double reach = 1.0 - std::pow(1.0 - p, static_cast<double>(five.tau[k]));
    const double stay = 1.0 - std::ldexp(1.0, -static_cast<int>(k + 1));
    CHECK(reach * stay >= 1.0 - std::ldexp(1.0, -static_cast<int>(k)));
  }
  try {
    build_counterexample_law(6);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("largest feasible k_max is 5") != std::string::npos);
  }
  CHECK_THROWS_AS(build_counterexample_law(0), InvalidInput);
}

TEST_CASE("batch-constant fitness gives one fitness per birth batch") {
  const IncrementLaw law = IncrementLaw::branching(DiscreteLaw::deterministic(4),
                                                   FitnessBatch::kConstant);
  Rng rng(1);
  const Cycle c = draw_cycle(FitnessMeasure::uniform(), law, rng);
  REQUIRE(c.batch.size() == 1);
  CHECK(c.batch[0].count == 4);
}
