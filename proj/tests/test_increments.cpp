#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fitevo/errors.hpp"
#include "fitevo/increments.hpp"

using namespace fitevo;

namespace {

// Pearson chi-square of draws from G(r) on {1,2,...} against its pmf, with
// bins 1..kmax-1 and a tail bin; returns (statistic, critical value at 0.01).
std::pair<double, double> geometric_chi_square(const std::vector<Count>& draws,
                                               double r, int kmax) {
  std::vector<double> observed(kmax, 0.0);
  for (Count x : draws) {
    const int bin = static_cast<int>(std::min<Count>(x, kmax)) - 1;
    observed[bin] += 1.0;
  }
  const double n = static_cast<double>(draws.size());
  double stat = 0.0;
  double tail = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    const double p = k < kmax ? std::pow(1.0 - r, k - 1) * r : tail;
    tail -= p;
    const double expected = n * p;
    stat += (observed[k - 1] - expected) * (observed[k - 1] - expected) / expected;
  }
  boost::math::chi_squared dist(kmax - 1);
  return {stat, boost::math::quantile(dist, 0.99)};
}

}  // namespace

TEST_CASE("branching law with X = 2 always yields (2, 1)") {
  const IncrementLaw law = IncrementLaw::branching(DiscreteLaw::deterministic(2));
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const StretchPair xy = law.sample_pair(rng);
    CHECK(xy.x == 2);
    CHECK(xy.y == 1);
  }
  CHECK(law.deaths_are_unit());
}

TEST_CASE("gms(2/3) sample means") {
  const IncrementLaw law = IncrementLaw::gms(2.0 / 3.0);
  Rng rng(99);
  const int n = 1'000'000;
  double sx = 0.0;
  double sy = 0.0;
  for (int i = 0; i < n; ++i) {
    const StretchPair xy = law.sample_pair(rng);
    CHECK_UNARY(xy.x >= 1);
    CHECK_UNARY(xy.y >= 1);
    sx += static_cast<double>(xy.x);
    sy += static_cast<double>(xy.y);
  }
  // sd(X) = sqrt(6), sd(Y) = sqrt(3)/2; bands are about 4 standard errors.
  CHECK(std::abs(sx / n - 3.0) < 4.0 * std::sqrt(6.0 / n));
  CHECK(std::abs(sy / n - 1.5) < 4.0 * std::sqrt(0.75 / n));
}

TEST_CASE("closed-form means") {
  const IncrementLaw law = IncrementLaw::gms(0.8);
  CHECK(law.mean_x().value() == doctest::Approx(5.0));
  CHECK(law.mean_y().value() == doctest::Approx(1.25));
  CHECK(DiscreteLaw::zeta(2.0).mean().is_plus_infinity());
  CHECK(DiscreteLaw::zeta(1.5).mean().is_plus_infinity());
  CHECK(DiscreteLaw::zeta(3.0).mean().value() ==
        doctest::Approx(std::riemann_zeta(2.0) / std::riemann_zeta(3.0)));
  CHECK(DiscreteLaw::deterministic(1).mean().value() == 1.0);
  CHECK(DiscreteLaw::from_pmf({0.25, 0.5, 0.25}).mean().value() == doctest::Approx(1.0));
  const IncrementLaw mk = IncrementLaw::markov(0.75, 0.5);
  CHECK(mk.mean_x().value() == doctest::Approx(4.0));
  CHECK(mk.mean_y().value() == doctest::Approx(2.0));
}

TEST_CASE("drift with the infinity conventions") {
  CHECK(drift(IncrementLaw::gms(2.0 / 3.0), 0.75).value() == doctest::Approx(0.75));
  CHECK(drift(IncrementLaw::markov(0.75, 0.5), 0.75).value() == doctest::Approx(1.0));
  const IncrementLaw heavy = IncrementLaw::branching(DiscreteLaw::zeta(2.0));
  CHECK(drift(heavy, 0.1).is_plus_infinity());
  CHECK(drift(heavy, 0.0).value() == -1.0);
  const IncrementLaw heavy_deaths = IncrementLaw::product(
      DiscreteLaw::deterministic(3), DiscreteLaw::zeta(2.0));
  CHECK(drift(heavy_deaths, 1.0).is_minus_infinity());
  CHECK_THROWS_AS(drift(ExtendedReal::plus_infinity(), ExtendedReal::plus_infinity(), 0.5),
                  InvalidInput);
  CHECK_THROWS_AS(
      IncrementLaw::product(DiscreteLaw::zeta(2.0), DiscreteLaw::zeta(1.5)),
      InvalidInput);
  CHECK_THROWS_AS(drift(IncrementLaw::gms(0.5), 1.5), DomainError);
}

TEST_CASE("drift endpoints and monotonicity in alpha") {
  const std::vector<IncrementLaw> laws = {
      IncrementLaw::gms(0.6), IncrementLaw::markov(0.9, 0.2),
      IncrementLaw::branching(DiscreteLaw::from_pmf({0.1, 0.2, 0.7})),
      IncrementLaw::branching(DiscreteLaw::zeta(2.0))};
  for (const IncrementLaw& law : laws) {
    if (law.mean_x().is_finite()) {
      CHECK(drift(law, 1.0).value() ==
            doctest::Approx(law.mean_x().value() - law.mean_y().value()));
    }
    CHECK(drift(law, 0.0).value() == doctest::Approx(-law.mean_y().value()));
    ExtendedReal prev = drift(law, 0.0);
    for (int i = 1; i <= 100; ++i) {
      const ExtendedReal d = drift(law, i / 100.0);
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("probability generating function of X") {
  CHECK(DiscreteLaw::deterministic(2).pgf(0.5) == doctest::Approx(0.25));
  const DiscreteLaw g = DiscreteLaw::geometric(1.0 / 3.0);
  // Oracle: partial sum of the pmf series.
  double partial = 0.0;
  for (int k = 1; k <= 10'000; ++k) {
    partial += std::pow(2.0 / 3.0, k - 1) * (1.0 / 3.0) * std::pow(0.5, k);
  }
  CHECK(g.pgf(0.5) == doctest::Approx(partial).epsilon(1e-12));
  CHECK(g.pgf(0.5) == doctest::Approx(0.25).epsilon(1e-12));

  const std::vector<DiscreteLaw> laws = {
      DiscreteLaw::deterministic(2), g, DiscreteLaw::from_pmf({0.2, 0.3, 0.5}),
      DiscreteLaw::zeta(2.5)};
  for (const DiscreteLaw& law : laws) {
    CHECK(law.pgf(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = law.pgf(0.0);
    double prev_slope = -1.0;
    for (int i = 1; i <= 200; ++i) {
      const double z = i / 200.0;
      const double v = law.pgf(z);
      CHECK(v >= prev - 1e-15);
      const double slope = (v - prev) * 200.0;
      CHECK(slope >= prev_slope - 1e-9);
      prev_slope = slope;
      prev = v;
    }
  }
  CHECK(DiscreteLaw::zeta(2.0).pgf_derivative_at_1().is_plus_infinity());
  CHECK(g.pgf_derivative_at_1().value() == doctest::Approx(3.0));
  CHECK_THROWS_AS(g.pgf(1.5), DomainError);
}

TEST_CASE("gms marginals pass a chi-square goodness of fit") {
  for (double p : {0.6, 2.0 / 3.0, 0.8}) {
    const IncrementLaw law = IncrementLaw::gms(p);
    Rng rng(4242);
    std::vector<Count> xs;
    std::vector<Count> ys;
    for (int i = 0; i < 100'000; ++i) {
      const StretchPair xy = law.sample_pair(rng);
      xs.push_back(xy.x);
      ys.push_back(xy.y);
    }
    const auto [sx, cx] = geometric_chi_square(xs, 1.0 - p, 12);
    const auto [sy, cy] = geometric_chi_square(ys, p, 6);
    CHECK(sx < cx);
    CHECK(sy < cy);
  }
}

TEST_CASE("zeta-like sampler matches its pmf at small values") {
  const DiscreteLaw z = DiscreteLaw::zeta(2.0);
  Rng rng(5);
  const int n = 1'000'000;
  int ones = 0;
  int twos = 0;
  for (int i = 0; i < n; ++i) {
    const Count x = z.sample(rng);
    CHECK_UNARY(x >= 1);
    ones += x == 1;
    twos += x == 2;
  }
  const double p1 = 6.0 / (std::numbers::pi * std::numbers::pi);
  CHECK(std::abs(static_cast<double>(ones) / n - p1) < 0.003);
  CHECK(std::abs(static_cast<double>(twos) / n - p1 / 4.0) < 0.002);
  CHECK(z.truncated_mass() > 0.0);
  CHECK(z.truncated_mass() < 1e-14);
}

TEST_CASE("joint table law") {
  const IncrementLaw law = IncrementLaw::joint(
      {{0, 1, 0.25}, {3, 1, 0.5}, {2, 4, 0.25}});
  CHECK(law.mean_x().value() == doctest::Approx(2.0));
  CHECK(law.mean_y().value() == doctest::Approx(1.75));
  CHECK_FALSE(law.deaths_are_unit());
  Rng rng(8);
  int zero_births = 0;
  for (int i = 0; i < 10'000; ++i) {
    const StretchPair xy = law.sample_pair(rng);
    const bool known = (xy.x == 0 && xy.y == 1) || (xy.x == 3 && xy.y == 1) ||
                       (xy.x == 2 && xy.y == 4);
    CHECK(known);
    zero_births += xy.x == 0;
  }
  CHECK(zero_births > 2300);
  CHECK(zero_births < 2700);
  CHECK_THROWS_AS(IncrementLaw::joint({{1, 1, 0.5}}), InvalidInput);
  CHECK_THROWS_AS(IncrementLaw::joint({{0, 1, 1.0}}), InvalidInput);
}

TEST_CASE("extended real text form round-trips") {
  CHECK(to_string(ExtendedReal::plus_infinity()) == "+inf");
  CHECK(to_string(ExtendedReal::minus_infinity()) == "-inf");
  CHECK(parse_extended_real("+inf").is_plus_infinity());
  CHECK(parse_extended_real(to_string(ExtendedReal(0.1))).value() == 0.1);
  CHECK_THROWS_AS(parse_extended_real("abc"), InvalidInput);
}
