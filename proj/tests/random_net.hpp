#pragma once

// Random networks for property tests: 1-4 layers, mixed neuron kinds, random
// activations, optional shortcuts and masks.

#include <cmath>
#include <random>

#include "qnn/core.hpp"

namespace qnn::testing {

inline NetworkSpec random_network(std::mt19937_64& rng, bool shortcuts = true,
                                  bool masks = false) {
  std::uniform_int_distribution<int> n_layers(1, 4);
  std::uniform_int_distribution<int> n_width(1, 4);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  NetworkSpec net;
  net.input_dim = static_cast<std::size_t>(n_width(rng));
  const int depth = n_layers(rng);
  std::size_t in = net.input_dim;
  for (int l = 0; l < depth; ++l) {
    const bool last = l + 1 == depth;
    const std::size_t width = last ? 1 : static_cast<std::size_t>(n_width(rng));
    Layer layer{{}, coin(rng) ? Activation::relu : Activation::identity};
    for (std::size_t j = 0; j < width; ++j) {
      const int k = kind(rng);
      if (k == 0) {
        QuadraticNeuron q = QuadraticNeuron::zeros(in);
        for (auto& v : q.w_r) v = val(rng);
        for (auto& v : q.w_g) v = val(rng);
        for (auto& v : q.w_b) v = val(rng);
        q.b_r = val(rng);
        q.b_g = val(rng);
        q.c = val(rng);
        layer.neurons.emplace_back(std::move(q));
      } else if (k == 1 || last) {
        ConventionalNeuron c = ConventionalNeuron::zeros(in);
        for (auto& v : c.w) v = val(rng);
        c.b = val(rng);
        layer.neurons.emplace_back(std::move(c));
      } else {
        std::uniform_int_distribution<std::size_t> src(0, in - 1);
        layer.neurons.emplace_back(Passthrough{src(rng)});
      }
    }
    net.layers.push_back(std::move(layer));
    in = width;
  }

  if (shortcuts && depth > 1) {
    std::uniform_int_distribution<int> count(0, 3);
    const int n = count(rng);
    for (int s = 0; s < n; ++s) {
      std::uniform_int_distribution<std::size_t> to_layer(2, net.depth());
      const std::size_t tl = to_layer(rng);
      std::uniform_int_distribution<std::size_t> from_layer(0, tl - 2);
      const std::size_t fl = from_layer(rng);
      std::uniform_int_distribution<std::size_t> fn(0, net.width_of(fl) - 1);
      std::uniform_int_distribution<std::size_t> tn(0, net.width_of(tl) - 1);
      net.shortcuts.push_back({{fl, fn(rng)}, {tl, tn(rng)}, val(rng), coin(rng)});
    }
  }

  if (masks) {
    net.masks.resize(neuron_parameter_count(net));
    for (std::size_t i = 0; i < net.masks.size(); ++i) net.masks[i] = coin(rng);
  }
  return net;
}

inline std::vector<double> random_input(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = val(rng);
  return x;
}

// True when every ReLU pre-activation sits at least `margin` away from the
// kink, so central differences do not straddle it.
inline bool away_from_kinks(const NetworkSpec& net, const std::vector<double>& x,
                            double margin) {
  const auto trace = forward_trace(net, x);
  for (std::size_t l = 0; l < net.depth(); ++l) {
    if (net.layers[l].activation != Activation::relu) continue;
    for (double z : trace.pre[l + 1])
      if (std::abs(z) < margin) return false;
  }
  return true;
}

}  // namespace qnn::testing
