#include "fitevo/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fitevo/errors.hpp"

namespace fitevo {

namespace {

constexpr double kNormTolerance = 1e-12;

void check_fitness(double f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw DomainError("fitness " + std::to_string(f) + " outside [0,1]");
  }
}

}  // namespace

FitnessMeasure::FitnessMeasure(std::vector<Atom> atoms,
                               std::vector<UniformPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!(a.location >= 0.0 && a.location <= 1.0)) {
      throw InvalidInput("atom location outside [0,1]");
    }
    if (!(a.mass > 0.0)) throw InvalidInput("atom mass must be positive");
    if (i > 0 && !(atoms_[i - 1].location < a.location)) {
      throw InvalidInput("atom locations must be strictly increasing");
    }
    total += a.mass;
  }
  for (const UniformPiece& p : pieces_) {
    if (!(p.lo >= 0.0 && p.hi <= 1.0 && p.lo < p.hi)) {
      throw InvalidInput("uniform piece must satisfy 0 <= lo < hi <= 1");
    }
    if (!(p.weight > 0.0)) throw InvalidInput("piece weight must be positive");
    total += p.weight;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw InvalidInput("measure total mass is " + std::to_string(total) +
                       ", expected 1");
  }
  double acc = 0.0;
  for (const Atom& a : atoms_) cumulative_.push_back(acc += a.mass);
  for (const UniformPiece& p : pieces_) cumulative_.push_back(acc += p.weight);
}

FitnessMeasure FitnessMeasure::uniform() {
  return FitnessMeasure({}, {{0.0, 1.0, 1.0}});
}

FitnessMeasure FitnessMeasure::dirac(double location) {
  return FitnessMeasure({{location, 1.0}}, {});
}

FitnessMeasure FitnessMeasure::atom_plus_uniform(double alpha,
                                                 double location) {
  if (alpha >= 1.0) return dirac(location);
  if (alpha <= 0.0) return uniform();
  return FitnessMeasure({{location, alpha}}, {{0.0, 1.0, 1.0 - alpha}});
}

double FitnessMeasure::cdf(double f) const {
  check_fitness(f);
  if (f == 1.0) return 1.0;
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location <= f) acc += a.mass;
  }
  for (const UniformPiece& p : pieces_) {
    acc += p.weight * std::clamp((f - p.lo) / (p.hi - p.lo), 0.0, 1.0);
  }
  return acc;
}

double FitnessMeasure::cdf_left(double f) const {
  check_fitness(f);
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    if (a.location < f) acc += a.mass;
  }
  for (const UniformPiece& p : pieces_) {
    acc += p.weight * std::clamp((f - p.lo) / (p.hi - p.lo), 0.0, 1.0);
  }
  return acc;
}

double FitnessMeasure::atom_mass(double f) const {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), f,
      [](const Atom& a, double v) { return a.location < v; });
  return (it != atoms_.end() && it->location == f) ? it->mass : 0.0;
}

double FitnessMeasure::continuous_mass(const Interval& c) const {
  double acc = 0.0;
  for (const UniformPiece& p : pieces_) {
    const double lo = std::max(p.lo, c.lo);
    const double hi = std::min(p.hi, c.hi);
    if (hi > lo) acc += p.weight * (hi - lo) / (p.hi - p.lo);
  }
  return acc;
}

double FitnessMeasure::mass(const BorelSet& set) const {
  double acc = 0.0;
  for (const Interval& c : set.components()) {
    acc += continuous_mass(c);
    for (const Atom& a : atoms_) {
      if (c.contains(a.location)) acc += a.mass;
    }
  }
  return acc;
}

double FitnessMeasure::sample(Rng& rng) const {
  const double u = uniform01(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  std::size_t k = static_cast<std::size_t>(it - cumulative_.begin());
  if (k >= cumulative_.size()) k = cumulative_.size() - 1;
  if (k < atoms_.size()) return atoms_[k].location;
  const UniformPiece& p = pieces_[k - atoms_.size()];
  return p.lo + (p.hi - p.lo) * uniform01(rng);
}

std::vector<double> FitnessMeasure::breakpoints() const {
  std::vector<double> out{0.0, 1.0};
  for (const Atom& a : atoms_) out.push_back(a.location);
  for (const UniformPiece& p : pieces_) {
    out.push_back(p.lo);
    out.push_back(p.hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double FitnessMeasure::density_between(double lo, double hi) const {
  const double mid = 0.5 * (lo + hi);
  double acc = 0.0;
  for (const UniformPiece& p : pieces_) {
    if (p.lo <= mid && mid < p.hi) acc += p.weight / (p.hi - p.lo);
  }
  return acc;
}

}  // namespace fitevo
