#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnn {

/// Univariate polynomial, coefficients lowest degree first.
struct Polynomial {
  std::vector<double> coeffs;

  /// Degree after ignoring trailing zero coefficients; -1 for the zero
  /// polynomial.
  int degree() const;
  bool is_zero() const { return degree() < 0; }
  /// Copy with trailing zero coefficients removed.
  Polynomial trimmed() const;
};

Polynomial multiply(const Polynomial& a, const Polynomial& b);

/// max_k |a_k - b_k| / max_k |b_k|, with missing coefficients read as zero.
double relative_coefficient_error(const Polynomial& a, const Polynomial& b);

/// x^2 + a x + b. `real_pair` marks a factor built from two real roots
/// rather than a complex-conjugate pair.
struct QuadraticFactor {
  double a = 0.0;
  double b = 0.0;
  bool real_pair = false;

  double discriminant() const { return a * a - 4.0 * b; }
};

/// scale * prod(x - r) * prod(x^2 + a x + b)
struct FactoredForm {
  double scale = 1.0;
  std::vector<double> linear_roots;
  std::vector<QuadraticFactor> quadratic_factors;

  int degree() const {
    return static_cast<int>(linear_roots.size() + 2 * quadratic_factors.size());
  }
  std::size_t factor_count() const {
    return linear_roots.size() + quadratic_factors.size();
  }
};

/// Throws InvalidInput when a quadratic factor has a nonnegative
/// discriminant without being flagged as a real pair, or scale is not finite.
void validate(const FactoredForm& ff);

class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct FactorOptions {
  /// Imaginary parts below real_tolerance * (1 + |z|) are treated as zero.
  double real_tolerance = 1e-9;
  /// Acceptance bound on the re-expanded coefficients.
  double coefficient_tolerance = 1e-8;
  /// Merge real roots pairwise into flagged quadratic factors.
  bool pair_real_roots = false;
  int newton_iterations = 8;
};

/// Real factorization via companion-matrix eigenvalues with Newton polish.
/// Throws InvalidInput for degree < 1 and FactorizationError when the
/// eigen-solve fails or the re-expansion misses coefficient_tolerance.
FactoredForm factor_polynomial(const Polynomial& p,
                               const FactorOptions& opts = {});

/// Monomial coefficients of sum_m f(m/n) C(n,m) x^m (1-x)^(n-m). Sums are
/// carried out in exact rational arithmetic on the double samples f(m/n) and
/// rounded once. The map from samples to monomial coefficients is badly
/// conditioned for large n, so rounding in the samples themselves is
/// amplified roughly by C(n, n/2) 2^(n/2).
Polynomial bernstein_coeffs(const std::function<double(double)>& f, int n);

/// Stable evaluation of the same Bernstein polynomial in the Bernstein basis
/// (de Casteljau), for large n where the monomial form loses all precision.
double bernstein_eval(const std::function<double(double)>& f, int n, double x);

}  // namespace qnn
