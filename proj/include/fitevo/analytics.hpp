#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fitevo/borel_set.hpp"
#include "fitevo/errors.hpp"
#include "fitevo/extended_real.hpp"
#include "fitevo/increments.hpp"
#include "fitevo/measure.hpp"

namespace fitevo {

/// A value, or a flag saying why it is undefined in the current regime.
template <class T>
class Outcome {
 public:
  static Outcome ok(T value) { return Outcome(std::move(value), {}); }
  static Outcome undefined(std::string reason) {
    return Outcome(std::nullopt, std::move(reason));
  }

  bool defined() const { return value_.has_value(); }
  /// Throws RegimeError carrying the reason when undefined.
  const T& value() const {
    if (!value_) throw RegimeError(reason_);
    return *value_;
  }
  const std::string& reason() const { return reason_; }

 private:
  Outcome(std::optional<T> v, std::string reason)
      : value_(std::move(v)), reason_(std::move(reason)) {}
  std::optional<T> value_;
  std::string reason_;
};

/// Sign tolerance applied to drifts and to F(f) vs E[Y]/E[X] comparisons.
inline constexpr double kProbabilityTolerance = 1e-12;

/// E[Y]/E[X] (0 when E[X] = +inf, +inf when E[Y] = +inf).
ExtendedReal birth_death_ratio(const IncrementLaw& law);

/// f_c = inf{f : F(f) > E[Y]/E[X]}; +inf when E[Y] >= E[X].
ExtendedReal critical_fitness(const FitnessMeasure& m, const IncrementLaw& law);

/// Limiting law of the normalized population in the supercritical regime
/// E[Y] < E[X] < inf: an atom at f_c plus mu rescaled by E[X]/E[X-Y] above it.
class ShapeLaw {
 public:
  /// Undefined unless E[Y] < E[X] < inf.
  static Outcome<ShapeLaw> build(const FitnessMeasure& m, const IncrementLaw& law);

  double critical_fitness() const { return f_c_; }
  double atom_at_fc() const { return atom_at_fc_; }
  double continuous_factor() const { return continuous_factor_; }

  double cdf(double f) const;
  double cdf_left(double f) const;
  double measure(const BorelSet& set) const;
  /// f_c, atoms and piece endpoints of mu at or above f_c, and 1.
  std::vector<double> breakpoints() const;

 private:
  ShapeLaw(FitnessMeasure m, double mean_x, double mean_y, double f_c);

  FitnessMeasure measure_;
  double mean_x_;
  double mean_y_;
  double f_c_;
  double atom_at_fc_;
  double continuous_factor_;
};

Outcome<double> limit_cdf(const FitnessMeasure& m, const IncrementLaw& law,
                          double f);
Outcome<double> limit_measure(const FitnessMeasure& m, const IncrementLaw& law,
                              const BorelSet& set);

enum class Recurrence { kTransient, kNullRecurrent, kPositiveRecurrent };
const char* to_string(Recurrence r);

struct RecurrenceClass {
  Recurrence tag = Recurrence::kTransient;
  ExtendedReal drift;
};

/// Sign of the drift with kProbabilityTolerance scaled to the terms involved.
int drift_sign(const ExtendedReal& drift, const IncrementLaw& law);

/// Classifies the queue Z_{2n}(I) for I = [0,f] (include_f) or [0,f).
/// Throws DomainError when mu(I) = 0.
RecurrenceClass classify_left_interval(const FitnessMeasure& m,
                                       const IncrementLaw& law, double f,
                                       bool include_f);

enum class Verdict { kSurvival, kExtinction };
const char* to_string(Verdict v);

struct SurvivalVerdict {
  Verdict verdict = Verdict::kExtinction;
  ExtendedReal drift;
};

/// Survival in [0,f] iff E[F(f)X - Y] > 0.
SurvivalVerdict survival_verdict(const FitnessMeasure& m, const IncrementLaw& law,
                                 double f);

/// lim K_n(A)/n; undefined unless 0 < E[X-Y] < inf.
Outcome<double> killing_rate(const FitnessMeasure& m, const IncrementLaw& law,
                             const BorelSet& set);

/// Predicted kill behaviour per region [0,f_c), {f_c}, (f_c,1].
struct KillDynamics {
  double rate_below_fc = 0.0;
  double rate_at_fc = 0.0;
  double rate_above_fc = 0.0;
  /// sup_n K_n((f_c,1]) < inf iff F(f_c) > E[Y]/E[X].
  bool kills_above_fc_bounded = false;
  /// lim K_n([f_c,1])/n > 0 iff F(f_c-) < E[Y]/E[X].
  bool rate_at_or_above_fc_positive = false;
};

Outcome<KillDynamics> kill_dynamics(const FitnessMeasure& m,
                                    const IncrementLaw& law);

/// Smallest fixed point in [0,1] of Psi(z) = Phi(z F + 1 - F), F = F(f) or
/// F(f-) when left_open. Requires Y = 1 a.s. (RegimeError otherwise).
double bp_fixed_point(const FitnessMeasure& m, const IncrementLaw& law, double f,
                      bool left_open);

/// P(Z_{j+2k}([0,f]) = 0 for some k >= n | Z_{2n+1}([0,f]) = i):
/// q^i for j = 1 and q^(i-1) for j = 2.
double bp_extinction(const FitnessMeasure& m, const IncrementLaw& law, double f,
                     bool left_open, Count i, int j);

}  // namespace fitevo
