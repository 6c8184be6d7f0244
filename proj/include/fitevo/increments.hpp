#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fitevo/extended_real.hpp"
#include "fitevo/random.hpp"

namespace fitevo {

using Count = std::int64_t;

/// Shifted geometric G(r) on {1,2,...}: P(k) = (1-r)^(k-1) r, mean 1/r.
struct ShiftedGeometric {
  double success = 1.0;
};

struct Deterministic {
  Count value = 1;
};

/// Finite support law given as (value, probability) pairs.
struct FiniteTable {
  std::vector<Count> values;
  std::vector<double> probabilities;
};

/// P(k) proportional to k^-s on k >= 1 (s > 1). Infinite mean for s <= 2.
struct ZetaLike {
  double exponent = 2.0;
};

/// Law of one nonnegative integer stretch length.
class DiscreteLaw {
 public:
  using Variant = std::variant<ShiftedGeometric, Deterministic, FiniteTable, ZetaLike>;

  DiscreteLaw() : DiscreteLaw(Deterministic{1}) {}
  explicit DiscreteLaw(Variant v);

  static DiscreteLaw geometric(double success) {
    return DiscreteLaw(ShiftedGeometric{success});
  }
  static DiscreteLaw deterministic(Count value) {
    return DiscreteLaw(Deterministic{value});
  }
  /// pmf[k] = P(X = k) for k = 0..size-1.
  static DiscreteLaw from_pmf(const std::vector<double>& pmf);
  static DiscreteLaw table(std::vector<Count> values, std::vector<double> probs) {
    return DiscreteLaw(FiniteTable{std::move(values), std::move(probs)});
  }
  static DiscreteLaw zeta(double exponent) { return DiscreteLaw(ZetaLike{exponent}); }

  Count sample(Rng& rng) const;
  /// +inf iff the law has no finite first moment.
  ExtendedReal mean() const { return mean_; }
  /// Phi(z) = E[z^X] for z in [0,1].
  double pgf(double z) const;
  /// Phi'(1), equal to the mean (possibly +inf).
  ExtendedReal pgf_derivative_at_1() const { return mean_; }
  /// Probability mass dropped by the sampler (zeta-like draws above the cap).
  double truncated_mass() const { return truncated_mass_; }

  const Variant& variant() const { return law_; }
  std::string describe() const;

  /// Largest value the zeta-like sampler emits.
  static constexpr Count kZetaCap = 1'000'000'000'000'000;  // 1e15

 private:
  Variant law_;
  ExtendedReal mean_;
  double truncated_mass_ = 0.0;
  std::vector<double> cumulative_;  // FiniteTable only
};

enum class IncrementKind { kProduct, kGms, kMarkov, kBranching, kJoint };

/// Fitness assignment inside one birth batch.
enum class FitnessBatch {
  kIid,       // independent draws from mu
  kConstant,  // every species in the batch shares the first draw
};

struct JointEntry {
  Count x = 0;
  Count y = 0;
  double probability = 0.0;
};

struct StretchPair {
  Count x = 0;
  Count y = 0;
};

/// Joint law of (X, Y): births per odd step and deaths per even step.
class IncrementLaw {
 public:
  /// X = Y = 1.
  IncrementLaw() = default;

  /// Independent X and Y.
  static IncrementLaw product(DiscreteLaw x, DiscreteLaw y,
                              FitnessBatch batch = FitnessBatch::kIid);
  /// X ~ G(1-p), Y ~ G(p).
  static IncrementLaw gms(double p, FitnessBatch batch = FitnessBatch::kIid);
  /// X ~ G(1-p), Y ~ G(1-q).
  static IncrementLaw markov(double p, double q,
                             FitnessBatch batch = FitnessBatch::kIid);
  /// Y = 1 almost surely.
  static IncrementLaw branching(DiscreteLaw x,
                                FitnessBatch batch = FitnessBatch::kIid);
  static IncrementLaw joint(std::vector<JointEntry> table,
                            FitnessBatch batch = FitnessBatch::kIid);

  StretchPair sample_pair(Rng& rng) const;

  ExtendedReal mean_x() const { return mean_x_; }
  ExtendedReal mean_y() const { return mean_y_; }

  IncrementKind kind() const { return kind_; }
  FitnessBatch fitness_batch() const { return batch_; }
  IncrementLaw with_fitness_batch(FitnessBatch batch) const;
  /// True when Y = 1 almost surely.
  bool deaths_are_unit() const;

  /// Marginal law of X; throws RegimeError for joint tables.
  const DiscreteLaw& law_x() const;
  const DiscreteLaw& law_y() const;
  double pgf_x(double z) const;
  ExtendedReal pgf_x_derivative_at_1() const { return mean_x_; }

  /// Sum of the marginal sampler truncations.
  double truncated_mass() const;

  /// Parameters as given at construction ({p} or {p,q}; empty otherwise).
  const std::vector<double>& parameters() const { return params_; }
  std::string describe() const;

 private:
  void validate_means();

  IncrementKind kind_ = IncrementKind::kProduct;
  FitnessBatch batch_ = FitnessBatch::kIid;
  std::vector<double> params_;
  DiscreteLaw x_;
  DiscreteLaw y_;
  std::vector<JointEntry> joint_;
  std::vector<double> joint_cumulative_;
  ExtendedReal mean_x_{1.0};
  ExtendedReal mean_y_{1.0};
};

/// E[alpha X - Y] from the two means, with the model's infinity conventions:
/// E[X] = +inf > E[Y] gives +inf for alpha > 0 and -E[Y] for alpha = 0;
/// E[Y] = +inf > E[X] gives -inf. Both infinite throws InvalidInput.
ExtendedReal drift(const ExtendedReal& mean_x, const ExtendedReal& mean_y,
                   double alpha);
ExtendedReal drift(const IncrementLaw& law, double alpha);

}  // namespace fitevo
