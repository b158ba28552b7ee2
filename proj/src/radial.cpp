#include "qnn/radial.hpp"

#include <algorithm>
#include <cmath>

namespace qnn {

namespace {

QuadraticNeuron squared_norm_neuron(std::size_t input_dim) {
  QuadraticNeuron q = QuadraticNeuron::zeros(input_dim);
  std::fill(q.w_b.begin(), q.w_b.end(), 1.0);
  return q;
}

ConventionalNeuron conventional(std::vector<double> w, double b) {
  return ConventionalNeuron{std::move(w), b};
}

// (|b|/C)(u - a_lo^2)(a_hi^2 - u) where u is input channel 0.
QuadraticNeuron ramp_neuron(std::size_t width, double a_lo, double a_hi,
                            double height, double scale) {
  QuadraticNeuron q = QuadraticNeuron::zeros(width);
  q.w_r[0] = height / scale;
  q.b_r = -height * a_lo * a_lo / scale;
  q.w_g[0] = -1.0;
  q.b_g = a_hi * a_hi;
  return q;
}

void check_module_args(double a_lo, double a_hi, double delta) {
  if (!(a_lo >= 0.0) || !(a_lo < a_hi) || !std::isfinite(a_hi)) {
    throw InvalidInput("parabola module: need 0 <= a_lo < a_hi");
  }
  if (!(delta > 0.0 && delta < 0.5)) {
    throw InvalidInput("parabola module: delta must lie in (0, 1/2)");
  }
}

}  // namespace

void validate(const RadialPartition& partition) {
  const auto& a = partition.breakpoints;
  if (partition.heights.empty()) throw InvalidInput("radial partition is empty");
  if (a.size() != partition.heights.size() + 1) {
    throw InvalidInput("radial partition needs one more breakpoint than heights");
  }
  if (!(a.front() >= 0.0)) throw InvalidInput("radial partition: breakpoints must be >= 0");
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (!(a[i] > a[i - 1])) {
      throw InvalidInput("radial partition: breakpoints must be strictly increasing");
    }
  }
  for (double b : partition.heights)
    if (!std::isfinite(b)) throw InvalidInput("radial partition: non-finite height");
  if (!(partition.delta > 0.0 && partition.delta < 0.5)) {
    throw InvalidInput("radial partition: delta must lie in (0, 1/2)");
  }
}

double partition_target(const RadialPartition& partition, double t) {
  const auto& a = partition.breakpoints;
  for (std::size_t i = 0; i < partition.heights.size(); ++i)
    if (t >= a[i] && t < a[i + 1]) return partition.heights[i];
  return 0.0;
}

std::size_t shallow_width_bound(double r, double R, double lipschitz,
                                double delta) {
  return static_cast<std::size_t>(std::floor((R - r) * lipschitz / delta)) + 1;
}

NetworkSpec build_shallow_radial(const std::function<double(double)>& f,
                                 double r, double R, double lipschitz,
                                 double delta, std::size_t input_dim) {
  if (!(delta > 0.0)) throw InvalidInput("build_shallow_radial: delta must be > 0");
  if (!(r < R)) throw InvalidInput("build_shallow_radial: need r < R");
  if (!(r >= 0.0)) throw InvalidInput("build_shallow_radial: need r >= 0");
  if (!(lipschitz > 0.0)) throw InvalidInput("build_shallow_radial: need L > 0");
  if (input_dim == 0) throw InvalidInput("build_shallow_radial: input_dim must be >= 1");

  NetworkSpec net;
  net.input_dim = input_dim;
  const double a = f(r);
  const double ratio = (R - r) * lipschitz / delta;
  if (ratio < 1.0) {
    net.layers.push_back(Layer{{conventional(std::vector<double>(input_dim, 0.0), a)},
                               Activation::identity});
    return net;
  }

  // k equal intervals of length <= 2 delta / L; interpolation in u = t^2
  // keeps the error below delta and uses k + 1 <= floor(ratio) + 1 units.
  const auto k = static_cast<std::size_t>(std::floor(ratio));
  std::vector<double> knots(k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    knots[i] = r + (R - r) * static_cast<double>(i) / static_cast<double>(k);
  }
  knots[k] = R;

  Layer hidden{{}, Activation::relu};
  std::vector<double> alpha;
  double prev_slope = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double g0 = knots[i] * knots[i];
    const double g1 = knots[i + 1] * knots[i + 1];
    const double slope = (f(knots[i + 1]) - f(knots[i])) / (g1 - g0);
    QuadraticNeuron q = squared_norm_neuron(input_dim);
    q.c = -g0;
    hidden.neurons.emplace_back(std::move(q));
    alpha.push_back(slope - prev_slope);
    prev_slope = slope;
  }
  QuadraticNeuron closing = squared_norm_neuron(input_dim);
  closing.c = -R * R;
  hidden.neurons.emplace_back(std::move(closing));
  alpha.push_back(-prev_slope);

  net.layers.push_back(std::move(hidden));
  net.layers.push_back(Layer{{conventional(std::move(alpha), a)}, Activation::identity});
  return net;
}

std::size_t shallow_hidden_units(const NetworkSpec& net) {
  return net.layers.size() == 2 ? net.layers.front().width() : 0;
}

double parabola_scale(double a_lo, double a_hi, double delta) {
  const double p = a_lo + delta * (a_hi - a_lo);
  return (p * p - a_lo * a_lo) * (a_hi * a_hi - p * p);
}

std::pair<double, double> parabola_plateau(double a_lo, double a_hi,
                                           double delta) {
  const double p = a_lo + delta * (a_hi - a_lo);
  return {p, std::sqrt(a_hi * a_hi + a_lo * a_lo - p * p)};
}

double parabola_profile(double a_lo, double a_hi, double b, double delta,
                        double t) {
  if (t < a_lo || t > a_hi) return 0.0;
  const double h = std::abs(b);
  const double ramp =
      h * (t * t - a_lo * a_lo) * (a_hi * a_hi - t * t) / parabola_scale(a_lo, a_hi, delta);
  return std::copysign(std::min(h, ramp), b);
}

NetworkSpec build_parabola_module(double a_lo, double a_hi, double b,
                                  double delta, std::size_t input_dim) {
  check_module_args(a_lo, a_hi, delta);
  if (!std::isfinite(b)) throw InvalidInput("parabola module: non-finite height");
  if (input_dim == 0) throw InvalidInput("parabola module: input_dim must be >= 1");
  const double h = std::abs(b);
  const double scale = parabola_scale(a_lo, a_hi, delta);

  NetworkSpec net;
  net.input_dim = input_dim;
  net.layers.push_back(Layer{{squared_norm_neuron(input_dim)}, Activation::relu});
  net.layers.push_back(Layer{{ramp_neuron(1, a_lo, a_hi, h, scale)}, Activation::relu});
  net.layers.push_back(Layer{{conventional({-1.0}, h)}, Activation::relu});
  net.layers.push_back(Layer{{conventional({-1.0}, h)}, Activation::relu});
  net.layers.push_back(
      Layer{{conventional({b < 0.0 ? -1.0 : 1.0}, 0.0)}, Activation::identity});
  return net;
}

NetworkSpec build_deep_radial(const RadialPartition& partition,
                              std::size_t input_dim) {
  validate(partition);
  if (input_dim == 0) throw InvalidInput("build_deep_radial: input_dim must be >= 1");
  const auto& a = partition.breakpoints;
  const double delta = partition.delta;

  // Channels after the norm stage: 0 = ||x||^2, 1 = working, 2 = K+, 3 = K-.
  constexpr std::size_t kWidth = 4;
  auto unit = [](std::size_t width, std::size_t i) {
    std::vector<double> v(width, 0.0);
    if (i < width) v[i] = 1.0;
    return v;
  };

  NetworkSpec net;
  net.input_dim = input_dim;
  net.layers.push_back(Layer{{squared_norm_neuron(input_dim)}, Activation::relu});

  for (std::size_t i = 0; i < partition.interval_count(); ++i) {
    const double b = partition.heights[i];
    const double h = std::abs(b);
    const double scale = parabola_scale(a[i], a[i + 1], delta);
    const std::size_t in = i == 0 ? 1 : kWidth;

    Layer ramp{{}, Activation::relu};
    ramp.neurons.emplace_back(Passthrough{0});
    ramp.neurons.emplace_back(ramp_neuron(in, a[i], a[i + 1], h, scale));
    std::vector<double> kp(in, 0.0);
    std::vector<double> km(in, 0.0);
    if (i > 0) {
      kp = unit(kWidth, 2);
      km = unit(kWidth, 3);
      (partition.heights[i - 1] >= 0.0 ? kp : km)[1] = 1.0;
    }
    ramp.neurons.emplace_back(conventional(std::move(kp), 0.0));
    ramp.neurons.emplace_back(conventional(std::move(km), 0.0));
    net.layers.push_back(std::move(ramp));

    for (int rep = 0; rep < 2; ++rep) {
      std::vector<double> w(kWidth, 0.0);
      w[1] = -1.0;
      Layer clip{{}, Activation::relu};
      clip.neurons.emplace_back(Passthrough{0});
      clip.neurons.emplace_back(conventional(std::move(w), h));
      clip.neurons.emplace_back(Passthrough{2});
      clip.neurons.emplace_back(Passthrough{3});
      net.layers.push_back(std::move(clip));
    }
  }

  std::vector<double> w(kWidth, 0.0);
  w[1] = partition.heights.back() < 0.0 ? -1.0 : 1.0;
  w[2] = 1.0;
  w[3] = -1.0;
  net.layers.push_back(Layer{{conventional(std::move(w), 0.0)}, Activation::identity});
  return net;
}

double radial_delta_for_accuracy(const RadialPartition& partition, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("radial_delta_for_accuracy: eps must be > 0");
  double c = 0.0;
  for (std::size_t i = 0; i < partition.heights.size(); ++i) {
    c += std::abs(partition.heights[i]) *
         (partition.breakpoints.at(i + 1) - partition.breakpoints.at(i));
  }
  constexpr double kMax = 0.499;
  if (c == 0.0) return kMax;
  return std::min(eps / (4.0 * c), kMax);
}

}  // namespace qnn
