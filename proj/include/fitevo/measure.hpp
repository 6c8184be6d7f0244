#pragma once

#include <vector>

#include "fitevo/borel_set.hpp"
#include "fitevo/random.hpp"

namespace fitevo {

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Uniform density on [lo, hi] carrying total probability `weight`.
struct UniformPiece {
  double lo = 0.0;
  double hi = 1.0;
  double weight = 0.0;
};

/// Probability measure on [0,1]: finitely many atoms plus uniform pieces.
///
/// Immutable after construction. Normalization is checked, never repaired:
/// total mass must be 1 within 1e-12.
class FitnessMeasure {
 public:
  FitnessMeasure(std::vector<Atom> atoms, std::vector<UniformPiece> pieces);

  static FitnessMeasure uniform();
  static FitnessMeasure dirac(double location);
  /// alpha * delta_{location} + (1 - alpha) * U([0,1]).
  static FitnessMeasure atom_plus_uniform(double alpha, double location = 0.5);

  /// F(f) = mu([0,f]). Throws DomainError outside [0,1].
  double cdf(double f) const;
  /// F(f-) = mu([0,f)).
  double cdf_left(double f) const;
  /// mu({f}).
  double atom_mass(double f) const;
  double mass(const BorelSet& set) const;
  double sample(Rng& rng) const;

  /// Sorted, deduplicated atom locations and piece endpoints, plus 0 and 1.
  std::vector<double> breakpoints() const;
  /// Density of the continuous part at interior points of (lo, hi) when no
  /// breakpoint lies strictly inside.
  double density_between(double lo, double hi) const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<UniformPiece>& pieces() const { return pieces_; }

 private:
  double continuous_mass(const Interval& c) const;

  std::vector<Atom> atoms_;
  std::vector<UniformPiece> pieces_;
  // Cumulative selection weights: atoms first, then pieces.
  std::vector<double> cumulative_;
};

}  // namespace fitevo
