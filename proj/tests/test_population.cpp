#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fitevo/errors.hpp"
#include "fitevo/measure.hpp"
#include "fitevo/population.hpp"

using namespace fitevo;

namespace {

Population make(std::initializer_list<FitnessCount> entries) {
  Population pop;
  std::vector<FitnessCount> batch(entries);
  pop.birth_step(std::span<const FitnessCount>(batch));
  return pop;
}

// Reference: remove the y smallest from a plain ordered map.
std::vector<FitnessCount> naive_remove(std::map<double, Count>& store, Count y) {
  std::vector<FitnessCount> removed;
  while (y > 0 && !store.empty()) {
    auto it = store.begin();
    const Count take = std::min(y, it->second);
    removed.push_back({it->first, take});
    it->second -= take;
    y -= take;
    if (it->second == 0) store.erase(it);
  }
  return removed;
}

}  // namespace

TEST_CASE("birth step inserts and merges counts") {
  Population pop;
  const std::vector<double> batch = {0.5, 0.5, 0.9};
  pop.birth_step(batch);
  CHECK(pop.total() == 3);
  CHECK(pop.step() == 1);
  CHECK(pop.entries() == std::vector<FitnessCount>{{0.5, 2}, {0.9, 1}});

  Population p2 = make({{0.2, 1}});
  p2.death_step(0);
  const std::vector<double> one = {0.2};
  p2.birth_step(one);
  CHECK(p2.entries() == std::vector<FitnessCount>{{0.2, 2}});

  Population p3 = make({{0.4, 2}});
  p3.death_step(0);
  p3.birth_step(std::vector<double>{});
  CHECK(p3.step() == 3);
  CHECK(p3.total() == 2);
}

TEST_CASE("death step removes the least fit with a partial boundary") {
  Population pop = make({{0.2, 3}, {0.5, 2}, {0.9, 1}});
  const KillReport r = pop.death_step(4);
  CHECK(pop.entries() == std::vector<FitnessCount>{{0.5, 1}, {0.9, 1}});
  CHECK(r.removed == std::vector<FitnessCount>{{0.2, 3}, {0.5, 1}});
  CHECK(r.boundary_removed == 1);
  CHECK(r.shortfall == 0);
  CHECK(pop.step() == 2);
}

TEST_CASE("death step with exhaustion records a shortfall") {
  Population pop = make({{0.3, 2}});
  const KillReport r = pop.death_step(5);
  CHECK(pop.total() == 0);
  CHECK(r.shortfall == 3);
  CHECK(r.removed_total() + r.shortfall == r.requested);
}

TEST_CASE("death step at an exact key boundary drains the key") {
  Population pop = make({{0.2, 3}, {0.5, 2}});
  const KillReport r = pop.death_step(3);
  CHECK(pop.entries() == std::vector<FitnessCount>{{0.5, 2}});
  CHECK(r.removed == std::vector<FitnessCount>{{0.2, 3}});
  CHECK(r.boundary_removed == 0);
}

TEST_CASE("odd/even protocol is enforced") {
  Population pop;
  CHECK_THROWS_AS(pop.death_step(1), SequencingError);
  pop.birth_step(std::vector<double>{0.1});
  CHECK_THROWS_AS(pop.birth_step(std::vector<double>{0.1}), SequencingError);
}

TEST_CASE("count_in respects endpoint flags") {
  Population pop = make({{0.5, 2}, {0.9, 1}});
  CHECK(pop.count_in(BorelSet::interval(0.5, 1.0, false, true)) == 1);
  CHECK(pop.count_in(BorelSet::closed(0.5, 1.0)) == 3);
  CHECK(pop.count_in(BorelSet::empty()) == 0);
  CHECK(pop.count_in(BorelSet::parse("{0.5}U[0.8,0.95]")) == 3);
}

TEST_CASE("empirical cdf") {
  Population pop = make({{0.5, 1}, {0.9, 1}});
  const auto cdf = pop.empirical_cdf();
  REQUIRE(cdf.size() == 2);
  CHECK(cdf[0].fitness == 0.5);
  CHECK(cdf[0].cumulative == 0.5);
  CHECK(cdf[1].cumulative == 1.0);
  Population single = make({{0.3, 4}});
  CHECK(single.empirical_cdf().size() == 1);
  CHECK(single.empirical_cdf()[0].cumulative == 1.0);
  CHECK_THROWS_AS(Population().empirical_cdf(), EmptyPopulationError);
}

TEST_CASE("snapshot format") {
  Population pop = make({{0.25, 2}, {0.75, 1}});
  std::ostringstream os;
  pop.write_snapshot(os);
  CHECK(os.str() == "# step=1 total=3\n0.25,2\n0.75,1\n");
}

TEST_CASE("random operation sequences agree with a naive ordered map") {
  const FitnessMeasure m({{0.25, 0.2}, {0.5, 0.3}}, {{0.0, 1.0, 0.5}});
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    Population pop;
    std::map<double, Count> ref;
    Count births = 0;
    Count removed = 0;
    for (int cycle = 0; cycle < 400; ++cycle) {
      const int x = static_cast<int>(rng() % 7);
      std::vector<double> batch;
      for (int i = 0; i < x; ++i) batch.push_back(m.sample(rng));
      pop.birth_step(batch);
      for (double f : batch) ++ref[f];
      births += x;

      const Count y = static_cast<Count>(rng() % 8);
      const Count before = pop.total();
      const KillReport r = pop.death_step(y);
      const auto expect = naive_remove(ref, y);
      REQUIRE(r.removed == expect);
      removed += r.removed_total();
      CHECK(r.removed_total() + r.shortfall == r.requested);
      CHECK(r.shortfall == std::max<Count>(0, y - before));

      // Every removed fitness lies at or below every survivor.
      if (!r.removed.empty() && pop.total() > 0) {
        CHECK(r.removed.back().fitness <= pop.entries().front().fitness);
      }
      // Nothing below x+ survives a non-exhausting removal.
      if (r.shortfall == 0 && !r.removed.empty()) {
        CHECK(pop.count_in(BorelSet::left(r.removed.back().fitness, false)) == 0);
      }
      CHECK(pop.total() == births - removed);
      std::vector<FitnessCount> ref_entries;
      for (const auto& [k, v] : ref) ref_entries.push_back({k, v});
      REQUIRE(pop.entries() == ref_entries);
      CHECK(pop.distinct_fitness_count() == ref.size());
      for (double f : {0.1, 0.25, 0.5, 0.77}) {
        Count naive = 0;
        for (const auto& [k, v] : ref) naive += k <= f ? v : 0;
        CHECK(pop.count_in(BorelSet::left(f, true)) == naive);
      }
    }
  }
}

TEST_CASE("left-interval counts follow the reflected walk") {
  // Z_{2n}([0,f]) = S_n - min_{i<=n} S_i for every realized sequence.
  const FitnessMeasure m = FitnessMeasure::atom_plus_uniform(0.4);
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    Rng rng(seed);
    const double f = uniform01(rng);
    const BorelSet left = BorelSet::left(f, true);
    Population pop;
    Count walk = 0;
    Count running_min = 0;
    for (int cycle = 0; cycle < 2000; ++cycle) {
      std::vector<double> batch(rng() % 5);
      Count arrivals = 0;
      for (double& b : batch) {
        b = m.sample(rng);
        arrivals += left.contains(b);
      }
      const Count y = static_cast<Count>(rng() % 4);
      pop.birth_step(batch);
      pop.death_step(y);
      walk += arrivals - y;
      running_min = std::min(running_min, walk);
      REQUIRE(pop.count_in(left) == walk - running_min);
    }
  }
}
