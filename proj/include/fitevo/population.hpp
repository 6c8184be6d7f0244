#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fitevo/borel_set.hpp"
#include "fitevo/increments.hpp"

namespace fitevo {

struct FitnessCount {
  double fitness = 0.0;
  Count count = 0;
  friend bool operator==(const FitnessCount&, const FitnessCount&) = default;
};

/// Ordered multiset of fitness values with per-key counts.
///
/// A treap keyed by fitness whose nodes also carry the subtree count sum, so
/// prefix counts, insertion and locating the k-th smallest individual are all
/// O(log keys). Removing the y least fit costs O(log keys + keys drained).
class FitnessStore {
 public:
  void add(double key, Count count);
  Count total() const { return root_ < 0 ? 0 : nodes_[root_].sum; }
  std::size_t key_count() const { return live_; }

  /// Number of individuals with fitness < key (or <= key when inclusive).
  Count prefix(double key, bool inclusive) const;
  Count count_at(double key) const;

  /// Removes the `y` least fit individuals; requires 0 < y < total().
  /// Fully drained keys are appended to `drained` in ascending order; returns
  /// the (key, count) taken from the boundary key, count 0 if none.
  FitnessCount remove_smallest(Count y, std::vector<FitnessCount>& drained);
  /// Moves every entry into `drained` (ascending) and empties the store.
  void drain_all(std::vector<FitnessCount>& drained);

  /// In-order traversal.
  template <class Fn>
  void for_each(Fn&& fn) const {
    std::vector<std::int32_t> stack;
    std::int32_t t = root_;
    while (t >= 0 || !stack.empty()) {
      while (t >= 0) {
        stack.push_back(t);
        t = nodes_[t].left;
      }
      t = stack.back();
      stack.pop_back();
      fn(nodes_[t].key, nodes_[t].count);
      t = nodes_[t].right;
    }
  }

 private:
  struct Node {
    double key;
    Count count;
    Count sum;
    std::uint32_t priority;
    std::int32_t left;
    std::int32_t right;
  };

  std::int32_t make_node(double key, Count count);
  void release(std::int32_t t);
  void pull(std::int32_t t);
  Count sum_of(std::int32_t t) const { return t < 0 ? 0 : nodes_[t].sum; }
  std::int32_t insert(std::int32_t t, double key, Count count);
  void split(std::int32_t t, double key, std::int32_t& less, std::int32_t& rest);
  std::int32_t decrement_min(std::int32_t t, Count count);
  void collect(std::int32_t t, std::vector<FitnessCount>& out);

  std::vector<Node> nodes_;
  std::vector<std::int32_t> free_;
  std::int32_t root_ = -1;
  std::size_t live_ = 0;
  std::uint32_t prio_state_ = 0x2545F491u;
};

/// Outcome of one bulk least-fit removal.
struct KillReport {
  /// Removed (fitness, count) in ascending fitness; only the last entry may
  /// be a partial removal from its key.
  std::vector<FitnessCount> removed;
  Count requested = 0;
  /// requested - removed when the population ran out.
  Count shortfall = 0;
  /// Individuals taken from the boundary key x+ when it is not fully drained.
  Count boundary_removed = 0;

  Count removed_total() const {
    Count acc = 0;
    for (const FitnessCount& e : removed) acc += e.count;
    return acc;
  }
};

/// One right-continuous step of an empirical CDF.
struct CdfStep {
  double fitness = 0.0;
  double cumulative = 0.0;
};

/// The live species: fitness counts plus the odd/even step counter.
/// Even steps accept births; odd steps accept deaths.
class Population {
 public:
  /// Inserts one species per fitness value; advances the step.
  void birth_step(std::span<const double> fitness);
  /// Batch given as (fitness, count) pairs.
  void birth_step(std::span<const FitnessCount> batch);
  /// Removes min(y, total) least fit species; advances the step.
  KillReport death_step(Count y);

  Count total() const { return store_.total(); }
  std::int64_t step() const { return step_; }
  Count count_in(const BorelSet& set) const;
  Count count_at(double fitness) const { return store_.count_at(fitness); }
  std::size_t distinct_fitness_count() const { return store_.key_count(); }

  std::vector<FitnessCount> entries() const;
  /// Throws EmptyPopulationError when total() == 0.
  std::vector<CdfStep> empirical_cdf() const;

  /// "# step=<n> total=<t>" then "fitness,count" rows, ascending.
  void write_snapshot(std::ostream& os) const;

 private:
  FitnessStore store_;
  std::int64_t step_ = 0;
};

}  // namespace fitevo
