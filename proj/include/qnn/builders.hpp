#pragma once

// Exact polynomial networks built from real factorizations.

#include <cstddef>
#include <vector>

#include "qnn/core.hpp"
#include "qnn/polynomial.hpp"
#include "qnn/radial.hpp"

namespace qnn {

/// One quadratic neuron computing the factor on input channel `variable`.
/// Linear (x - r): w_r = 1, b_r = -r, w_g = 0, b_g = 1.
/// Quadratic x^2 + a x + b: w_r = a, b_r = b, w_g = 0, b_g = 1, w_b = 1.
QuadraticNeuron linear_factor_neuron(double root, std::size_t input_dim,
                                     std::size_t variable = 0);
QuadraticNeuron quadratic_factor_neuron(const QuadraticFactor& f,
                                        std::size_t input_dim,
                                        std::size_t variable = 0);

/// Factor layer followed by a balanced pairwise product tree, identity
/// activations throughout, scale folded into the first factor neuron.
/// Depth is 1 + ceil(log2(#factors)); width is #factors <= degree.
NetworkSpec build_poly_net(const FactoredForm& ff, std::size_t input_dim = 1,
                           std::size_t variable = 0);

/// f(x_1..x_n) = sum_l prod_i phi[l][i](x_i)
struct SeparableSpec {
  std::size_t variables = 0;
  std::vector<std::vector<Polynomial>> terms;
};

void validate(const SeparableSpec& spec);

/// Direct evaluation of a separable function.
double evaluate(const SeparableSpec& spec, const std::vector<double>& x);

/// Factor neurons for every non-constant phi, one product tree per term
/// running side by side, and a summing identity output neuron.
NetworkSpec build_separable_net(const SeparableSpec& spec,
                                const FactorOptions& opts = {});

/// P(x) = sum_k coefficient_k prod_j x_j^exponents[k][j]
struct MultiPolySpec {
  std::size_t variables = 0;
  std::vector<std::vector<int>> exponents;
  std::vector<double> coefficients;
};

void validate(const MultiPolySpec& spec);

struct SizeBounds {
  std::size_t width = 0;
  std::size_t depth = 0;

  friend bool operator==(const SizeBounds&, const SizeBounds&) = default;
};

/// width = sum_j 2 max_k n_j(k) + 2M, depth = max_{j,k} n_j(k) + N.
SizeBounds size_bounds(const MultiPolySpec& spec);

/// Trainable factorization network with shortcuts for a degree-`degree`
/// polynomial with l1 linear and l2 quadratic factors (k = l1 + l2):
///   layer 1:       k trainable quadratic neurons T_i,
///   layers 2..k:   frozen products of every subset of size s, built as
///                  T_min(S) * (product of S without its minimum), with the
///                  T_i still needed passed through,
///   layer k + 1:   trainable identity neuron over the full product, with
///                  trainable shortcuts from every T_i and every proper
///                  subset product.
/// Starts as the bare product (full-product weight 1, everything else 0).
NetworkSpec build_factorization_trainable(int degree, int l1, int l2);

/// Loads exact factors into layer 1 (linear factors first) and the scale into
/// the full-product weight; zeroes the shortcuts and the output bias.
void assign_factors(NetworkSpec& net, const FactoredForm& ff);

enum class NeuronKind { quadratic, conventional };

/// ReLU hidden layer of `width` all-zero neurons of one kind and an identity
/// conventional output neuron.
NetworkSpec build_hidden_layer_net(std::size_t input_dim, std::size_t width,
                                   NeuronKind kind);

/// Coefficients of a one-input quadratic neuron as a polynomial in x.
Polynomial neuron_polynomial(const QuadraticNeuron& q);

}  // namespace qnn
