#include "qnn/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace qnn::oracles {

double GridSpec::at(std::size_t i) const {
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

void validate(const GridSpec& grid) {
  if (grid.n < 2) throw InvalidInput("grid needs at least 2 points");
  if (!(grid.lo < grid.hi)) throw InvalidInput("grid needs lo < hi");
}

double horner(const Polynomial& p, double x) {
  double v = 0.0;
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

namespace {

void convolve(std::vector<double>& acc, std::span<const double> factor) {
  std::vector<double> out(acc.size() + factor.size() - 1, 0.0);
  for (std::size_t i = 0; i < acc.size(); ++i)
    for (std::size_t j = 0; j < factor.size(); ++j) out[i + j] += acc[i] * factor[j];
  acc = std::move(out);
}

}  // namespace

Polynomial expand_factored(const FactoredForm& ff) {
  std::vector<double> acc{ff.scale};
  for (double r : ff.linear_roots) {
    const double f[] = {-r, 1.0};
    convolve(acc, f);
  }
  for (const auto& q : ff.quadratic_factors) {
    const double f[] = {q.b, q.a, 1.0};
    convolve(acc, f);
  }
  return Polynomial{std::move(acc)};
}

GradientBundle finite_diff_grad(const NetworkSpec& net,
                                std::span<const double> x, double step) {
  if (!(step > 0.0)) throw InvalidInput("finite_diff_grad: step must be > 0");
  NetworkSpec probe = net;
  const std::vector<double> theta = get_parameters(net);
  std::vector<double> shifted = theta;
  GradientBundle g;
  for (std::size_t i : trainable_indices(net)) {
    shifted[i] = theta[i] + step;
    set_parameters(probe, shifted);
    const double up = forward_scalar(probe, x);
    shifted[i] = theta[i] - step;
    set_parameters(probe, shifted);
    const double down = forward_scalar(probe, x);
    shifted[i] = theta[i];
    g.values.push_back((up - down) / (2.0 * step));
  }
  return g;
}

double grid_l1(const Fn& f, const Fn& g, const GridSpec& grid) {
  validate(grid);
  const double h = (grid.hi - grid.lo) / static_cast<double>(grid.n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = grid.at(i);
    const double w = (i == 0 || i + 1 == grid.n) ? 0.5 : 1.0;
    sum += w * std::abs(f(t) - g(t));
  }
  return sum * h;
}

double grid_sup(const Fn& f, const Fn& g, const GridSpec& grid) {
  validate(grid);
  double m = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double t = grid.at(i);
    m = std::max(m, std::abs(f(t) - g(t)));
  }
  return m;
}

}  // namespace qnn::oracles
