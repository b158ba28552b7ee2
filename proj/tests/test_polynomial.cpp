#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qnn/oracles.hpp"
#include "qnn/polynomial.hpp"

using namespace qnn;

namespace {

// g(x) = (x^2 + 1)(x - 1)(x^2 + 1.7x + 1.2), expanded by hand.
const Polynomial kG{{-1.2, -0.5, -0.5, 0.5, 0.7, 1.0}};

// Random real polynomial with roots drawn in the disk |z| <= 2: real roots and
// conjugate pairs, times a random leading coefficient.
Polynomial random_rooted(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> rad(0.1, 2.0);
  std::uniform_real_distribution<double> ang(0.0, 3.14159265358979);
  std::vector<std::complex<double>> roots;
  while (static_cast<int>(roots.size()) < degree) {
    if (static_cast<int>(roots.size()) + 2 <= degree && u(rng) < 0.0) {
      const auto z = std::polar(rad(rng), ang(rng));
      roots.push_back(z);
      roots.push_back(std::conj(z));
    } else {
      roots.emplace_back(2.0 * u(rng), 0.0);
    }
  }
  std::vector<std::complex<double>> c{1.0};
  for (auto z : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= z * c[i];
    }
    c = std::move(next);
  }
  double lead = 0.5 + std::abs(u(rng)) * 2.0;
  if (u(rng) < 0) lead = -lead;
  Polynomial p;
  for (auto v : c) p.coeffs.push_back(lead * v.real());
  return p;
}

}  // namespace

TEST_CASE("degree and trimming") {
  CHECK(Polynomial{{1, 2, 0, 0}}.degree() == 1);
  CHECK(Polynomial{{0, 0}}.degree() == -1);
  CHECK(Polynomial{}.is_zero());
  CHECK(Polynomial{{3, 0, 1, 0}}.trimmed().coeffs.size() == 3);
}

TEST_CASE("difference of squares") {
  const auto ff = factor_polynomial(Polynomial{{-1, 0, 1}});
  CHECK(ff.scale == 1.0);
  REQUIRE(ff.linear_roots.size() == 2);
  CHECK(ff.linear_roots[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ff.linear_roots[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ff.quadratic_factors.empty());
}

TEST_CASE("cubic with one real root") {
  const auto ff = factor_polynomial(Polynomial{{-1, 1, -1, 1}});
  REQUIRE(ff.linear_roots.size() == 1);
  REQUIRE(ff.quadratic_factors.size() == 1);
  CHECK(ff.linear_roots[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ff.quadratic_factors[0].a == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(ff.quadratic_factors[0].b == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(ff.quadratic_factors[0].real_pair);
}

TEST_CASE("the quintic g") {
  const auto ff = factor_polynomial(kG);
  REQUIRE(ff.linear_roots.size() == 1);
  REQUIRE(ff.quadratic_factors.size() == 2);
  CHECK(ff.linear_roots[0] == doctest::Approx(1.0).epsilon(1e-12));
  // Sorted by real part of the upper root: x^2+1.7x+1.2 first, then x^2+1.
  CHECK(ff.quadratic_factors[0].a == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(ff.quadratic_factors[0].b == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(std::abs(ff.quadratic_factors[1].a) < 1e-12);
  CHECK(ff.quadratic_factors[1].b == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(relative_coefficient_error(oracles::expand_factored(ff), kG) < 1e-12);
}

TEST_CASE("pairing real roots") {
  FactorOptions opts;
  opts.pair_real_roots = true;
  const auto ff = factor_polynomial(Polynomial{{24, -50, 35, -10, 1}}, opts);
  CHECK(ff.linear_roots.empty());
  REQUIRE(ff.quadratic_factors.size() == 2);
  for (const auto& q : ff.quadratic_factors) CHECK(q.real_pair);
  CHECK_NOTHROW(validate(ff));
}

TEST_CASE("unflagged real-discriminant factor is invalid") {
  FactoredForm ff;
  ff.quadratic_factors.push_back({3.0, 1.0, false});
  CHECK_THROWS_AS(validate(ff), InvalidInput);
}

TEST_CASE("degree zero is rejected") {
  CHECK_THROWS_AS(factor_polynomial(Polynomial{{5}}), InvalidInput);
  CHECK_THROWS_AS(factor_polynomial(Polynomial{}), InvalidInput);
}

TEST_CASE("coefficient tolerance failure reports the residual") {
  FactorOptions opts;
  opts.coefficient_tolerance = 0.0;
  try {
    factor_polynomial(Polynomial{{1, 3, 3, 1}}, opts);
    FAIL("expected FactorizationError");
  } catch (const FactorizationError& e) {
    CHECK(e.residual() >= 0.0);
  }
}

TEST_CASE("re-expansion round trip on random polynomials") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> deg(1, 12);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const Polynomial p = random_rooted(rng, deg(rng));
    const auto ff = factor_polynomial(p);
    CHECK(ff.degree() == p.degree());
    CHECK_NOTHROW(validate(ff));
    worst = std::max(worst, relative_coefficient_error(oracles::expand_factored(ff), p));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("bernstein coefficients") {
  // Sample points m/n are exact doubles when n is a power of two, so the
  // rational sums reproduce x exactly.
  for (int n : {1, 2, 4, 8, 16, 32, 64}) {
    const auto p = bernstein_coeffs([](double x) { return x; }, n);
    for (std::size_t k = 0; k < p.coeffs.size(); ++k)
      CHECK(std::abs(p.coeffs[k] - (k == 1 ? 1.0 : 0.0)) < 1e-12);
  }
  const auto c = bernstein_coeffs([](double) { return 3.0; }, 5);
  CHECK(std::abs(c.coeffs[0] - 3.0) < 1e-12);
  for (std::size_t k = 1; k < c.coeffs.size(); ++k) CHECK(std::abs(c.coeffs[k]) < 1e-12);
  CHECK_THROWS_AS(bernstein_coeffs([](double x) { return x; }, 0), InvalidInput);
}

TEST_CASE("de Casteljau agrees with the monomial form at moderate n") {
  const auto f = [](double x) { return std::abs(x - 0.5); };
  const auto p = bernstein_coeffs(f, 12);
  for (double x = 0.0; x <= 1.0; x += 0.05)
    CHECK(bernstein_eval(f, 12, x) == doctest::Approx(oracles::horner(p, x)).epsilon(1e-10));
}
