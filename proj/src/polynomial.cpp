#include "qnn/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>
#include <gmpxx.h>

#include "qnn/core.hpp"

namespace qnn {

int Polynomial::degree() const {
  for (std::size_t i = coeffs.size(); i > 0; --i)
    if (coeffs[i - 1] != 0.0) return static_cast<int>(i - 1);
  return -1;
}

Polynomial Polynomial::trimmed() const {
  Polynomial p;
  p.coeffs.assign(coeffs.begin(), coeffs.begin() + (degree() + 1));
  return p;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  if (a.coeffs.empty() || b.coeffs.empty()) return {};
  Polynomial r;
  r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j)
      r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  return r;
}

double relative_coefficient_error(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = i < a.coeffs.size() ? a.coeffs[i] : 0.0;
    const double bi = i < b.coeffs.size() ? b.coeffs[i] : 0.0;
    diff = std::max(diff, std::abs(ai - bi));
    scale = std::max(scale, std::abs(bi));
  }
  if (scale == 0.0) return diff;
  return diff / scale;
}

void validate(const FactoredForm& ff) {
  if (!std::isfinite(ff.scale)) throw InvalidInput("factored form: scale is not finite");
  for (const auto& q : ff.quadratic_factors) {
    if (!std::isfinite(q.a) || !std::isfinite(q.b)) {
      throw InvalidInput("factored form: non-finite quadratic factor");
    }
    if (!q.real_pair && q.discriminant() >= 0.0) {
      throw InvalidInput(
          "factored form: quadratic factor with real roots must be flagged "
          "as a real pair");
    }
  }
  for (double r : ff.linear_roots)
    if (!std::isfinite(r)) throw InvalidInput("factored form: non-finite root");
}

namespace {

using cplx = std::complex<double>;

cplx eval_with_derivative(const std::vector<double>& c, cplx z, cplx& dp) {
  cplx p = c.back();
  dp = 0.0;
  for (std::size_t i = c.size() - 1; i > 0; --i) {
    dp = dp * z + p;
    p = p * z + c[i - 1];
  }
  return p;
}

cplx polish(const std::vector<double>& c, cplx z, int iterations) {
  cplx dp;
  double best = std::abs(eval_with_derivative(c, z, dp));
  for (int it = 0; it < iterations && best > 0.0; ++it) {
    if (dp == 0.0) break;
    const cplx p = eval_with_derivative(c, z, dp);
    const cplx next = z - p / dp;
    cplx dnext;
    const double r = std::abs(eval_with_derivative(c, next, dnext));
    if (!(r < best)) break;
    best = r;
    z = next;
  }
  return z;
}

Polynomial expand(const FactoredForm& ff) {
  Polynomial r{{ff.scale}};
  for (double x : ff.linear_roots) r = multiply(r, Polynomial{{-x, 1.0}});
  for (const auto& q : ff.quadratic_factors)
    r = multiply(r, Polynomial{{q.b, q.a, 1.0}});
  return r;
}

}  // namespace

FactoredForm factor_polynomial(const Polynomial& poly,
                               const FactorOptions& opts) {
  const Polynomial p = poly.trimmed();
  const int n = p.degree();
  if (n < 1) throw InvalidInput("factor_polynomial: degree must be >= 1");
  for (double c : p.coeffs)
    if (!std::isfinite(c)) throw InvalidInput("factor_polynomial: non-finite coefficient");

  FactoredForm ff;
  ff.scale = p.coeffs.back();
  std::vector<double> monic(p.coeffs.size());
  for (std::size_t i = 0; i < monic.size(); ++i) monic[i] = p.coeffs[i] / ff.scale;

  std::vector<cplx> roots;
  if (n == 1) {
    roots.emplace_back(-monic[0], 0.0);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -monic[static_cast<std::size_t>(i)];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
      throw FactorizationError("factor_polynomial: eigenvalue iteration did not converge",
                               std::numeric_limits<double>::infinity());
    }
    const auto ev = solver.eigenvalues();
    for (int i = 0; i < n; ++i) roots.push_back(ev(i));
  }

  std::vector<double> real;
  std::vector<cplx> upper;
  std::size_t lower = 0;
  for (cplx z : roots) {
    if (std::abs(z.imag()) < opts.real_tolerance * (1.0 + std::abs(z))) {
      real.push_back(polish(monic, cplx(z.real(), 0.0), opts.newton_iterations).real());
    } else if (z.imag() > 0.0) {
      upper.push_back(polish(monic, z, opts.newton_iterations));
    } else {
      ++lower;
    }
  }
  if (upper.size() != lower) {
    throw FactorizationError("factor_polynomial: unmatched complex roots",
                             std::numeric_limits<double>::infinity());
  }
  std::sort(real.begin(), real.end());
  std::sort(upper.begin(), upper.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  for (cplx z : upper) {
    ff.quadratic_factors.push_back({-2.0 * z.real(), std::norm(z), false});
  }
  if (opts.pair_real_roots) {
    std::size_t i = 0;
    for (; i + 1 < real.size(); i += 2) {
      ff.quadratic_factors.push_back({-(real[i] + real[i + 1]), real[i] * real[i + 1], true});
    }
    if (i < real.size()) ff.linear_roots.push_back(real[i]);
  } else {
    ff.linear_roots = real;
  }

  const double residual = relative_coefficient_error(expand(ff), p);
  if (!(residual < opts.coefficient_tolerance)) {
    throw FactorizationError(
        "factor_polynomial: re-expansion residual " + std::to_string(residual) +
            " exceeds tolerance",
        residual);
  }
  return ff;
}

Polynomial bernstein_coeffs(const std::function<double(double)>& f, int n) {
  if (n <= 0) throw InvalidInput("bernstein_coeffs: n must be >= 1");
  // coefficient of x^k = sum_{m<=k} f(m/n) C(n,m) C(n-m,k-m) (-1)^(k-m)
  std::vector<mpq_class> exact(static_cast<std::size_t>(n) + 1, mpq_class(0));
  mpz_class bin_nm;
  mpz_class bin_rest;
  for (int m = 0; m <= n; ++m) {
    const mpq_class fm(f(static_cast<double>(m) / n));
    mpz_bin_uiui(bin_nm.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(m));
    for (int k = m; k <= n; ++k) {
      mpz_bin_uiui(bin_rest.get_mpz_t(), static_cast<unsigned long>(n - m),
                   static_cast<unsigned long>(k - m));
      mpq_class term = fm * mpq_class(bin_nm * bin_rest);
      if ((k - m) % 2 == 1) term = -term;
      exact[static_cast<std::size_t>(k)] += term;
    }
  }
  Polynomial p;
  p.coeffs.reserve(exact.size());
  for (const auto& q : exact) p.coeffs.push_back(q.get_d());
  return p;
}

double bernstein_eval(const std::function<double(double)>& f, int n, double x) {
  if (n <= 0) throw InvalidInput("bernstein_eval: n must be >= 1");
  std::vector<double> b(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) b[static_cast<std::size_t>(m)] = f(static_cast<double>(m) / n);
  for (int r = n; r > 0; --r)
    for (int i = 0; i < r; ++i) {
      const auto u = static_cast<std::size_t>(i);
      b[u] = (1.0 - x) * b[u] + x * b[u + 1];
    }
  return b[0];
}

}  // namespace qnn
