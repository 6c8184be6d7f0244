#include "fitevo/increments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fitevo/errors.hpp"

namespace fitevo {

namespace {

constexpr double kNormTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double zeta_function(double s) { return std::riemann_zeta(s); }

Count sample_zeta(double s, Rng& rng) {
  // Devroye's rejection sampler for the Zipf law, conditioned on X <= cap.
  const double b = std::pow(2.0, s - 1.0);
  const double cap = static_cast<double>(DiscreteLaw::kZetaCap);
  for (;;) {
    const double u = uniform_open0(rng);
    const double v = uniform01(rng);
    const double x = std::floor(std::pow(u, -1.0 / (s - 1.0)));
    if (!(x >= 1.0) || x > cap) continue;
    const double t = std::pow(1.0 + 1.0 / x, s - 1.0);
    if (v * x * (t - 1.0) / (b - 1.0) <= t / b) return static_cast<Count>(x);
  }
}

double zeta_pgf(double s, double z) {
  if (z >= 1.0) return 1.0;
  if (z <= 0.0) return 0.0;
  double sum = 0.0;
  double zk = 1.0;
  for (Count k = 1; k < 100'000'000; ++k) {
    zk *= z;
    const double term = zk * std::pow(static_cast<double>(k), -s);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum / zeta_function(s);
}

ExtendedReal mean_of(const DiscreteLaw::Variant& v) {
  return std::visit(
      Overloaded{
          [](const ShiftedGeometric& g) { return ExtendedReal(1.0 / g.success); },
          [](const Deterministic& d) {
            return ExtendedReal(static_cast<double>(d.value));
          },
          [](const FiniteTable& t) {
            double m = 0.0;
            for (std::size_t i = 0; i < t.values.size(); ++i) {
              m += static_cast<double>(t.values[i]) * t.probabilities[i];
            }
            return ExtendedReal(m);
          },
          [](const ZetaLike& z) {
            if (z.exponent <= 2.0) return ExtendedReal::plus_infinity();
            return ExtendedReal(zeta_function(z.exponent - 1.0) /
                                zeta_function(z.exponent));
          }},
      v);
}

}  // namespace

DiscreteLaw::DiscreteLaw(Variant v) : law_(std::move(v)) {
  std::visit(
      Overloaded{
          [](const ShiftedGeometric& g) {
            if (!(g.success > 0.0 && g.success <= 1.0)) {
              throw InvalidInput("geometric parameter must be in (0,1]");
            }
          },
          [](const Deterministic& d) {
            if (d.value < 0) throw InvalidInput("deterministic value must be >= 0");
          },
          [this](const FiniteTable& t) {
            if (t.values.empty() || t.values.size() != t.probabilities.size()) {
              throw InvalidInput("finite table needs matching values/probabilities");
            }
            double acc = 0.0;
            for (std::size_t i = 0; i < t.values.size(); ++i) {
              if (t.values[i] < 0) throw InvalidInput("table values must be >= 0");
              if (!(t.probabilities[i] >= 0.0)) {
                throw InvalidInput("table probabilities must be >= 0");
              }
              cumulative_.push_back(acc += t.probabilities[i]);
            }
            if (std::abs(acc - 1.0) > kNormTolerance) {
              throw InvalidInput("table probabilities must sum to 1");
            }
          },
          [this](const ZetaLike& z) {
            if (!(z.exponent > 1.0)) {
              throw InvalidInput("zeta-like exponent must be > 1");
            }
            const double s = z.exponent;
            const double cap = static_cast<double>(kZetaCap);
            truncated_mass_ =
                std::pow(cap + 0.5, 1.0 - s) / ((s - 1.0) * zeta_function(s));
          }},
      law_);
  mean_ = mean_of(law_);
}

DiscreteLaw DiscreteLaw::from_pmf(const std::vector<double>& pmf) {
  std::vector<Count> values(pmf.size());
  std::iota(values.begin(), values.end(), Count{0});
  return table(std::move(values), pmf);
}

Count DiscreteLaw::sample(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&](const ShiftedGeometric& g) -> Count {
            if (g.success >= 1.0) return 1;
            const double u = uniform_open0(rng);
            return 1 + static_cast<Count>(std::floor(std::log(u) /
                                                     std::log1p(-g.success)));
          },
          [](const Deterministic& d) -> Count { return d.value; },
          [&](const FiniteTable& t) -> Count {
            const double u = uniform01(rng) * cumulative_.back();
            auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            auto k = static_cast<std::size_t>(it - cumulative_.begin());
            return t.values[std::min(k, t.values.size() - 1)];
          },
          [&](const ZetaLike& z) -> Count { return sample_zeta(z.exponent, rng); }},
      law_);
}

double DiscreteLaw::pgf(double z) const {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("pgf argument outside [0,1]");
  return std::visit(
      Overloaded{
          [&](const ShiftedGeometric& g) {
            return g.success * z / (1.0 - (1.0 - g.success) * z);
          },
          [&](const Deterministic& d) {
            return std::pow(z, static_cast<double>(d.value));
          },
          [&](const FiniteTable& t) {
            double acc = 0.0;
            for (std::size_t i = 0; i < t.values.size(); ++i) {
              acc += t.probabilities[i] *
                     std::pow(z, static_cast<double>(t.values[i]));
            }
            return acc;
          },
          [&](const ZetaLike& zl) { return zeta_pgf(zl.exponent, z); }},
      law_);
}

std::string DiscreteLaw::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const ShiftedGeometric& g) { os << "G(" << g.success << ")"; },
                 [&](const Deterministic& d) { os << "const(" << d.value << ")"; },
                 [&](const FiniteTable& t) {
                   os << "table(" << t.values.size() << " values)";
                 },
                 [&](const ZetaLike& z) { os << "zeta(" << z.exponent << ")"; }},
             law_);
  return os.str();
}

IncrementLaw IncrementLaw::product(DiscreteLaw x, DiscreteLaw y,
                                   FitnessBatch batch) {
  IncrementLaw law;
  law.kind_ = IncrementKind::kProduct;
  law.batch_ = batch;
  law.x_ = std::move(x);
  law.y_ = std::move(y);
  law.validate_means();
  return law;
}

IncrementLaw IncrementLaw::gms(double p, FitnessBatch batch) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("gms p must be in (0,1)");
  IncrementLaw law = product(DiscreteLaw::geometric(1.0 - p),
                             DiscreteLaw::geometric(p), batch);
  law.kind_ = IncrementKind::kGms;
  law.params_ = {p};
  return law;
}

IncrementLaw IncrementLaw::markov(double p, double q, FitnessBatch batch) {
  if (!(p >= 0.0 && p < 1.0 && q >= 0.0 && q < 1.0)) {
    throw InvalidInput("markov p and q must be in [0,1)");
  }
  IncrementLaw law = product(DiscreteLaw::geometric(1.0 - p),
                             DiscreteLaw::geometric(1.0 - q), batch);
  law.kind_ = IncrementKind::kMarkov;
  law.params_ = {p, q};
  return law;
}

IncrementLaw IncrementLaw::branching(DiscreteLaw x, FitnessBatch batch) {
  IncrementLaw law = product(std::move(x), DiscreteLaw::deterministic(1), batch);
  law.kind_ = IncrementKind::kBranching;
  return law;
}

IncrementLaw IncrementLaw::joint(std::vector<JointEntry> table,
                                 FitnessBatch batch) {
  if (table.empty()) throw InvalidInput("joint table is empty");
  IncrementLaw law;
  law.kind_ = IncrementKind::kJoint;
  law.batch_ = batch;
  double acc = 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (const JointEntry& e : table) {
    if (e.x < 0 || e.y < 0 || !(e.probability >= 0.0)) {
      throw InvalidInput("joint table entries must be nonnegative");
    }
    law.joint_cumulative_.push_back(acc += e.probability);
    mx += static_cast<double>(e.x) * e.probability;
    my += static_cast<double>(e.y) * e.probability;
  }
  if (std::abs(acc - 1.0) > kNormTolerance) {
    throw InvalidInput("joint table probabilities must sum to 1");
  }
  law.joint_ = std::move(table);
  law.mean_x_ = ExtendedReal(mx);
  law.mean_y_ = ExtendedReal(my);
  law.validate_means();
  return law;
}

void IncrementLaw::validate_means() {
  if (kind_ != IncrementKind::kJoint) {
    mean_x_ = x_.mean();
    mean_y_ = y_.mean();
  }
  if (!(mean_x_.value() > 0.0) || !(mean_y_.value() > 0.0)) {
    throw InvalidInput("E[X] and E[Y] must both be positive");
  }
  if (!mean_x_.is_finite() && !mean_y_.is_finite()) {
    throw InvalidInput("E[X] and E[Y] cannot both be infinite");
  }
}

StretchPair IncrementLaw::sample_pair(Rng& rng) const {
  if (kind_ == IncrementKind::kJoint) {
    const double u = uniform01(rng) * joint_cumulative_.back();
    auto it = std::upper_bound(joint_cumulative_.begin(),
                               joint_cumulative_.end(), u);
    auto k = std::min(static_cast<std::size_t>(it - joint_cumulative_.begin()),
                      joint_.size() - 1);
    return {joint_[k].x, joint_[k].y};
  }
  const Count x = x_.sample(rng);
  const Count y = y_.sample(rng);
  return {x, y};
}

IncrementLaw IncrementLaw::with_fitness_batch(FitnessBatch batch) const {
  IncrementLaw copy = *this;
  copy.batch_ = batch;
  return copy;
}

bool IncrementLaw::deaths_are_unit() const {
  if (kind_ == IncrementKind::kJoint) {
    return std::all_of(joint_.begin(), joint_.end(), [](const JointEntry& e) {
      return e.y == 1 || e.probability == 0.0;
    });
  }
  const auto* d = std::get_if<Deterministic>(&y_.variant());
  return d != nullptr && d->value == 1;
}

const DiscreteLaw& IncrementLaw::law_x() const {
  if (kind_ == IncrementKind::kJoint) {
    throw RegimeError("joint tables expose no separate law of X");
  }
  return x_;
}

const DiscreteLaw& IncrementLaw::law_y() const {
  if (kind_ == IncrementKind::kJoint) {
    throw RegimeError("joint tables expose no separate law of Y");
  }
  return y_;
}

double IncrementLaw::pgf_x(double z) const {
  if (kind_ == IncrementKind::kJoint) {
    if (!(z >= 0.0 && z <= 1.0)) throw DomainError("pgf argument outside [0,1]");
    double acc = 0.0;
    for (const JointEntry& e : joint_) {
      acc += e.probability * std::pow(z, static_cast<double>(e.x));
    }
    return acc;
  }
  return x_.pgf(z);
}

double IncrementLaw::truncated_mass() const {
  if (kind_ == IncrementKind::kJoint) return 0.0;
  return x_.truncated_mass() + y_.truncated_mass();
}

std::string IncrementLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case IncrementKind::kGms: os << "gms(p=" << params_[0] << ")"; break;
    case IncrementKind::kMarkov:
      os << "markov(p=" << params_[0] << ", q=" << params_[1] << ")";
      break;
    case IncrementKind::kBranching: os << "bp(X=" << x_.describe() << ", Y=1)"; break;
    case IncrementKind::kProduct:
      os << "product(X=" << x_.describe() << ", Y=" << y_.describe() << ")";
      break;
    case IncrementKind::kJoint: os << "joint(" << joint_.size() << " entries)"; break;
  }
  if (batch_ == FitnessBatch::kConstant) os << " [batch-constant fitness]";
  return os.str();
}

ExtendedReal drift(const ExtendedReal& mean_x, const ExtendedReal& mean_y,
                   double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha outside [0,1]");
  if (!mean_x.is_finite() && !mean_y.is_finite()) {
    throw InvalidInput("E[X] and E[Y] cannot both be infinite");
  }
  if (!mean_y.is_finite()) return ExtendedReal::minus_infinity();
  if (!mean_x.is_finite()) {
    if (alpha > 0.0) return ExtendedReal::plus_infinity();
    return ExtendedReal(-mean_y.value());
  }
  return ExtendedReal(alpha * mean_x.value() - mean_y.value());
}

ExtendedReal drift(const IncrementLaw& law, double alpha) {
  return drift(law.mean_x(), law.mean_y(), alpha);
}

}  // namespace fitevo
