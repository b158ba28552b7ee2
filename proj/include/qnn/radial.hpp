#pragma once

// Constructive networks for radial functions f(||x||).

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "qnn/core.hpp"

namespace qnn {

/// Breakpoints a_0 < ... < a_m (all >= 0), one signed height per interval,
/// and the ramp fraction delta in (0, 1/2).
struct RadialPartition {
  std::vector<double> breakpoints;
  std::vector<double> heights;
  double delta = 0.1;

  std::size_t interval_count() const { return heights.size(); }
};

void validate(const RadialPartition& partition);

/// sum_i b_i * 1{t in [a_i, a_{i+1})}
double partition_target(const RadialPartition& partition, double t);

/// Single-hidden-layer approximator a + sum_i alpha_i relu(||x||^2 - gamma_i)
/// of an L-Lipschitz f that is constant outside [r, R], with sup error below
/// delta. Each hidden unit is a quadratic neuron (w_b = 1, c = -gamma_i); the
/// output is a conventional identity neuron. When (R - r) L < delta the
/// network is the constant f(r) with no hidden layer.
NetworkSpec build_shallow_radial(const std::function<double(double)>& f,
                                 double r, double R, double lipschitz,
                                 double delta, std::size_t input_dim = 1);

/// Number of hidden units of a network made by build_shallow_radial.
std::size_t shallow_hidden_units(const NetworkSpec& net);

/// Width bound floor((R - r) L / delta) + 1.
std::size_t shallow_width_bound(double r, double R, double lipschitz,
                                double delta);

/// C = [p^2 - a_lo^2][a_hi^2 - p^2] with p = a_lo + delta (a_hi - a_lo).
double parabola_scale(double a_lo, double a_hi, double delta);

/// Closed interval of t on which the module output equals b exactly.
std::pair<double, double> parabola_plateau(double a_lo, double a_hi,
                                           double delta);

/// Closed-form module output: the truncated parabola min(|b|, ramp) signed
/// by b, zero outside [a_lo, a_hi].
double parabola_profile(double a_lo, double a_hi, double b, double delta,
                        double t);

/// Norm stage, then three ReLU layers producing the truncated parabola of
/// height |b| over t = ||x|| in [a_lo, a_hi], then an identity output neuron
/// applying the sign of b.
NetworkSpec build_parabola_module(double a_lo, double a_hi, double b,
                                  double delta, std::size_t input_dim = 1);

/// Width-4 deep network: a squared-norm stage, three layers per interval
/// (norm pass-through, working neuron, K+ and K- accumulators), and an
/// identity output computing K+ - K-.
NetworkSpec build_deep_radial(const RadialPartition& partition,
                              std::size_t input_dim = 1);

/// delta = eps / (4 C) with C = sum_i |b_i| (a_{i+1} - a_i), clamped below
/// 1/2.
double radial_delta_for_accuracy(const RadialPartition& partition, double eps);

}  // namespace qnn
