#include "fitevo/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace fitevo {

namespace {

constexpr double kTol = kProbabilityTolerance;
constexpr int kMaxFixedPointIterations = 1'000'000;

const char* kSubcriticalReason =
    "limit shape requires E[Y] < E[X] < +inf";

bool supercritical_finite(const IncrementLaw& law) {
  return law.mean_x().is_finite() && law.mean_y().is_finite() &&
         law.mean_y().value() < law.mean_x().value();
}

}  // namespace

ExtendedReal birth_death_ratio(const IncrementLaw& law) {
  if (!law.mean_y().is_finite()) return ExtendedReal::plus_infinity();
  if (!law.mean_x().is_finite()) return ExtendedReal(0.0);
  return ExtendedReal(law.mean_y().value() / law.mean_x().value());
}

ExtendedReal critical_fitness(const FitnessMeasure& m, const IncrementLaw& law) {
  const ExtendedReal ratio_ext = birth_death_ratio(law);
  if (!ratio_ext.is_finite() || law.mean_y() >= law.mean_x()) {
    return ExtendedReal::plus_infinity();
  }
  const double ratio = ratio_ext.value();
  // F is right-continuous and affine between consecutive breakpoints, so the
  // first crossing above `ratio` is either a breakpoint or solves one line.
  const std::vector<double> bps = m.breakpoints();
  for (std::size_t i = 0; i < bps.size(); ++i) {
    const double b = bps[i];
    const double at_b = m.cdf(b);
    if (at_b > ratio + kTol) return ExtendedReal(b);
    if (i + 1 == bps.size()) break;
    const double next = bps[i + 1];
    const double slope = m.density_between(b, next);
    if (slope <= 0.0) continue;
    if (at_b + slope * (next - b) > ratio + kTol) {
      double root = b + std::max(0.0, ratio - at_b) / slope;
      if (root - b <= kTol) root = b;
      return ExtendedReal(root);
    }
  }
  return ExtendedReal(1.0);
}

ShapeLaw::ShapeLaw(FitnessMeasure m, double mean_x, double mean_y, double f_c)
    : measure_(std::move(m)), mean_x_(mean_x), mean_y_(mean_y), f_c_(f_c) {
  const double excess = mean_x_ - mean_y_;
  atom_at_fc_ =
      std::max(0.0, measure_.cdf(f_c_) * mean_x_ - mean_y_) / excess;
  continuous_factor_ = mean_x_ / excess;
}

Outcome<ShapeLaw> ShapeLaw::build(const FitnessMeasure& m,
                                  const IncrementLaw& law) {
  if (!supercritical_finite(law)) {
    return Outcome<ShapeLaw>::undefined(kSubcriticalReason);
  }
  const double f_c = fitevo::critical_fitness(m, law).value();
  return Outcome<ShapeLaw>::ok(
      ShapeLaw(m, law.mean_x().value(), law.mean_y().value(), f_c));
}

double ShapeLaw::cdf(double f) const {
  if (f < f_c_) return 0.0;
  const double value =
      (measure_.cdf(f) * mean_x_ - mean_y_) / (mean_x_ - mean_y_);
  return std::clamp(value, 0.0, 1.0);
}

double ShapeLaw::cdf_left(double f) const {
  if (f <= f_c_) return 0.0;
  const double value =
      (measure_.cdf_left(f) * mean_x_ - mean_y_) / (mean_x_ - mean_y_);
  return std::clamp(value, 0.0, 1.0);
}

double ShapeLaw::measure(const BorelSet& set) const {
  const double above =
      measure_.mass(set.intersect({f_c_, 1.0, false, true})) * mean_x_;
  const double at = set.contains(f_c_)
                        ? std::max(0.0, measure_.cdf(f_c_) * mean_x_ - mean_y_)
                        : 0.0;
  return (above + at) / (mean_x_ - mean_y_);
}

std::vector<double> ShapeLaw::breakpoints() const {
  std::vector<double> out{f_c_};
  for (double b : measure_.breakpoints()) {
    if (b > f_c_) out.push_back(b);
  }
  if (out.back() != 1.0) out.push_back(1.0);
  return out;
}

Outcome<double> limit_cdf(const FitnessMeasure& m, const IncrementLaw& law,
                          double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("fitness outside [0,1]");
  auto shape = ShapeLaw::build(m, law);
  if (!shape.defined()) return Outcome<double>::undefined(shape.reason());
  return Outcome<double>::ok(shape.value().cdf(f));
}

Outcome<double> limit_measure(const FitnessMeasure& m, const IncrementLaw& law,
                              const BorelSet& set) {
  auto shape = ShapeLaw::build(m, law);
  if (!shape.defined()) return Outcome<double>::undefined(shape.reason());
  return Outcome<double>::ok(shape.value().measure(set));
}

const char* to_string(Recurrence r) {
  switch (r) {
    case Recurrence::kTransient: return "transient";
    case Recurrence::kNullRecurrent: return "null-recurrent";
    case Recurrence::kPositiveRecurrent: return "positive-recurrent";
  }
  return "?";
}

const char* to_string(Verdict v) {
  return v == Verdict::kSurvival ? "survival" : "extinction";
}

int drift_sign(const ExtendedReal& d, const IncrementLaw& law) {
  if (d.is_plus_infinity()) return 1;
  if (d.is_minus_infinity()) return -1;
  double scale = 1.0;
  if (law.mean_x().is_finite()) scale = std::max(scale, law.mean_x().value());
  if (law.mean_y().is_finite()) scale = std::max(scale, law.mean_y().value());
  if (std::abs(d.value()) <= kTol * scale) return 0;
  return d.value() > 0 ? 1 : -1;
}

RecurrenceClass classify_left_interval(const FitnessMeasure& m,
                                       const IncrementLaw& law, double f,
                                       bool include_f) {
  const double mass = include_f ? m.cdf(f) : m.cdf_left(f);
  if (!(mass > 0.0)) {
    throw DomainError("left interval has zero mu-mass");
  }
  RecurrenceClass out;
  out.drift = drift(law, mass);
  const int sign = drift_sign(out.drift, law);
  out.tag = sign > 0   ? Recurrence::kTransient
            : sign == 0 ? Recurrence::kNullRecurrent
                        : Recurrence::kPositiveRecurrent;
  return out;
}

SurvivalVerdict survival_verdict(const FitnessMeasure& m, const IncrementLaw& law,
                                 double f) {
  SurvivalVerdict out;
  out.drift = drift(law, m.cdf(f));
  out.verdict =
      drift_sign(out.drift, law) > 0 ? Verdict::kSurvival : Verdict::kExtinction;
  return out;
}

Outcome<double> killing_rate(const FitnessMeasure& m, const IncrementLaw& law,
                             const BorelSet& set) {
  if (!supercritical_finite(law)) {
    return Outcome<double>::undefined("killing rate requires 0 < E[X-Y] < +inf");
  }
  const double mx = law.mean_x().value();
  const double my = law.mean_y().value();
  const double f_c = critical_fitness(m, law).value();
  double rate = 0.5 * m.mass(set.intersect({0.0, f_c, true, true})) * mx;
  if (set.contains(f_c)) rate -= 0.5 * (m.cdf(f_c) * mx - my);
  return Outcome<double>::ok(std::max(0.0, rate));
}

Outcome<KillDynamics> kill_dynamics(const FitnessMeasure& m,
                                    const IncrementLaw& law) {
  if (!supercritical_finite(law)) {
    return Outcome<KillDynamics>::undefined(
        "kill dynamics require 0 < E[X-Y] < +inf");
  }
  const double mx = law.mean_x().value();
  const double my = law.mean_y().value();
  const double ratio = my / mx;
  const double f_c = critical_fitness(m, law).value();
  KillDynamics out;
  out.rate_below_fc = 0.5 * m.cdf_left(f_c) * mx;
  out.rate_at_fc = std::max(0.0, 0.5 * (my - m.cdf_left(f_c) * mx));
  out.rate_above_fc = 0.0;
  out.kills_above_fc_bounded = m.cdf(f_c) > ratio + kTol;
  out.rate_at_or_above_fc_positive = m.cdf_left(f_c) < ratio - kTol;
  return Outcome<KillDynamics>::ok(out);
}

double bp_fixed_point(const FitnessMeasure& m, const IncrementLaw& law, double f,
                      bool left_open) {
  if (!law.deaths_are_unit()) {
    throw RegimeError("branching-process formulas need Y = 1 almost surely");
  }
  const double mass = left_open ? m.cdf_left(f) : m.cdf(f);
  const ExtendedReal slope = law.pgf_x_derivative_at_1();
  // q = 1 exactly when the embedded Galton-Watson process is not supercritical.
  if (slope.is_finite() && mass * slope.value() <= 1.0 + kTol) return 1.0;
  if (mass <= 0.0) return 1.0;
  double q = 0.0;
  for (int it = 0; it < kMaxFixedPointIterations; ++it) {
    const double next = law.pgf_x(q * mass + 1.0 - mass);
    if (std::abs(next - q) < kTol) return next;
    q = next;
  }
  throw Error("fixed-point iteration did not converge");
}

double bp_extinction(const FitnessMeasure& m, const IncrementLaw& law, double f,
                     bool left_open, Count i, int j) {
  if (i < 1) throw DomainError("bp_extinction needs i >= 1");
  if (j != 1 && j != 2) throw DomainError("bp_extinction needs j in {1,2}");
  const double q = bp_fixed_point(m, law, f, left_open);
  return std::pow(q, static_cast<double>(j == 1 ? i : i - 1));
}

}  // namespace fitevo
