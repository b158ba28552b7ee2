#pragma once

// Brute-force references that the tests hold the constructions against.
// Nothing here shares code with the paths it checks.

#include <cstddef>
#include <functional>
#include <span>

#include "qnn/core.hpp"
#include "qnn/polynomial.hpp"

namespace qnn::oracles {

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  double at(std::size_t i) const;
};

void validate(const GridSpec& grid);

double horner(const Polynomial& p, double x);

/// Coefficients of scale * prod(x - r) * prod(x^2 + a x + b) by repeated
/// convolution.
Polynomial expand_factored(const FactoredForm& ff);

/// Central differences of the scalar output in every trainable parameter.
GradientBundle finite_diff_grad(const NetworkSpec& net,
                                std::span<const double> x, double step);

using Fn = std::function<double(double)>;

/// Trapezoidal approximation of the integral of |f - g| over the grid.
double grid_l1(const Fn& f, const Fn& g, const GridSpec& grid);

/// max |f - g| over the grid points.
double grid_sup(const Fn& f, const Fn& g, const GridSpec& grid);

}  // namespace qnn::oracles
