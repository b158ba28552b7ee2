#include "qnn/builders.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace qnn {

namespace {

void scale_neuron(QuadraticNeuron& q, double s) {
  for (auto& v : q.w_r) v *= s;
  q.b_r *= s;
  for (auto& v : q.w_b) v *= s;
  q.c *= s;
}

// Multiplies the channels of every group pairwise until each group is down
// to one channel. Returns the final channel of each group.
std::vector<std::size_t> append_product_tree(
    NetworkSpec& net, std::vector<std::vector<std::size_t>> groups) {
  auto pending = [&groups] {
    return std::any_of(groups.begin(), groups.end(),
                       [](const auto& g) { return g.size() > 1; });
  };
  while (pending()) {
    const std::size_t in = net.output_dim();
    Layer layer{{}, Activation::identity};
    for (auto& g : groups) {
      std::vector<std::size_t> next;
      std::size_t j = 0;
      for (; j + 1 < g.size(); j += 2) {
        QuadraticNeuron q = QuadraticNeuron::zeros(in);
        q.w_r[g[j]] = 1.0;
        q.w_g[g[j + 1]] = 1.0;
        next.push_back(layer.neurons.size());
        layer.neurons.emplace_back(std::move(q));
      }
      if (j < g.size()) {
        next.push_back(layer.neurons.size());
        layer.neurons.emplace_back(Passthrough{g[j]});
      }
      g = std::move(next);
    }
    net.layers.push_back(std::move(layer));
  }
  std::vector<std::size_t> out;
  for (const auto& g : groups) out.push_back(g.empty() ? 0 : g.front());
  return out;
}

void append_factor_neurons(const FactoredForm& ff, std::size_t input_dim,
                           std::size_t variable, Layer& layer) {
  for (double r : ff.linear_roots)
    layer.neurons.emplace_back(linear_factor_neuron(r, input_dim, variable));
  for (const auto& q : ff.quadratic_factors)
    layer.neurons.emplace_back(quadratic_factor_neuron(q, input_dim, variable));
}

}  // namespace

QuadraticNeuron linear_factor_neuron(double root, std::size_t input_dim,
                                     std::size_t variable) {
  if (variable >= input_dim) throw InvalidInput("factor neuron: variable out of range");
  QuadraticNeuron q = QuadraticNeuron::zeros(input_dim);
  q.w_r[variable] = 1.0;
  q.b_r = -root;
  q.b_g = 1.0;
  return q;
}

QuadraticNeuron quadratic_factor_neuron(const QuadraticFactor& f,
                                        std::size_t input_dim,
                                        std::size_t variable) {
  if (variable >= input_dim) throw InvalidInput("factor neuron: variable out of range");
  QuadraticNeuron q = QuadraticNeuron::zeros(input_dim);
  q.w_r[variable] = f.a;
  q.b_r = f.b;
  q.b_g = 1.0;
  q.w_b[variable] = 1.0;
  return q;
}

NetworkSpec build_poly_net(const FactoredForm& ff, std::size_t input_dim,
                           std::size_t variable) {
  validate(ff);
  if (ff.factor_count() == 0) {
    throw InvalidInput("build_poly_net: factored form has no factors");
  }
  NetworkSpec net;
  net.input_dim = input_dim;
  Layer factors{{}, Activation::identity};
  append_factor_neurons(ff, input_dim, variable, factors);
  scale_neuron(std::get<QuadraticNeuron>(factors.neurons.front()), ff.scale);

  std::vector<std::size_t> group(factors.width());
  for (std::size_t i = 0; i < group.size(); ++i) group[i] = i;
  net.layers.push_back(std::move(factors));
  append_product_tree(net, {group});
  return net;
}

void validate(const SeparableSpec& spec) {
  if (spec.variables == 0) throw InvalidInput("separable spec: no variables");
  if (spec.terms.empty()) throw InvalidInput("separable spec: no terms");
  for (const auto& t : spec.terms) {
    if (t.size() != spec.variables) {
      throw InvalidInput("separable spec: every term needs one polynomial per variable");
    }
  }
}

double evaluate(const SeparableSpec& spec, const std::vector<double>& x) {
  if (x.size() != spec.variables) throw InvalidInput("separable evaluate: dimension mismatch");
  double sum = 0.0;
  for (const auto& term : spec.terms) {
    double prod = 1.0;
    for (std::size_t i = 0; i < spec.variables; ++i) {
      double v = 0.0;
      const auto& c = term[i].coeffs;
      for (std::size_t k = c.size(); k > 0; --k) v = v * x[i] + c[k - 1];
      prod *= v;
    }
    sum += prod;
  }
  return sum;
}

NetworkSpec build_separable_net(const SeparableSpec& spec,
                                const FactorOptions& opts) {
  validate(spec);
  const std::size_t n = spec.variables;
  Layer factors{{}, Activation::identity};
  std::vector<std::vector<std::size_t>> groups;
  std::vector<double> group_scale;
  double constant = 0.0;

  for (const auto& term : spec.terms) {
    double scale = 1.0;
    std::vector<std::size_t> channels;
    bool zero = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Polynomial p = term[i].trimmed();
      if (p.is_zero()) {
        zero = true;
        break;
      }
      if (p.degree() == 0) {
        scale *= p.coeffs[0];
        continue;
      }
      const FactoredForm ff = factor_polynomial(p, opts);
      scale *= ff.scale;
      const std::size_t first = factors.width();
      append_factor_neurons(ff, n, i, factors);
      for (std::size_t c = first; c < factors.width(); ++c) channels.push_back(c);
    }
    if (zero) continue;
    if (channels.empty()) {
      constant += scale;
    } else {
      groups.push_back(std::move(channels));
      group_scale.push_back(scale);
    }
  }

  NetworkSpec net;
  net.input_dim = n;
  if (groups.empty()) {
    net.layers.push_back(Layer{{ConventionalNeuron{std::vector<double>(n, 0.0), constant}},
                               Activation::identity});
    return net;
  }
  net.layers.push_back(std::move(factors));
  const auto finals = append_product_tree(net, groups);
  ConventionalNeuron sum = ConventionalNeuron::zeros(net.output_dim());
  for (std::size_t g = 0; g < finals.size(); ++g) sum.w[finals[g]] += group_scale[g];
  sum.b = constant;
  net.layers.push_back(Layer{{std::move(sum)}, Activation::identity});
  return net;
}

void validate(const MultiPolySpec& spec) {
  if (spec.variables == 0) throw InvalidInput("multivariate polynomial: N must be >= 1");
  if (spec.exponents.empty()) throw InvalidInput("multivariate polynomial: M must be >= 1");
  for (const auto& e : spec.exponents) {
    if (e.size() != spec.variables) {
      throw InvalidInput("multivariate polynomial: exponent vector length mismatch");
    }
    for (int v : e)
      if (v < 0) throw InvalidInput("multivariate polynomial: negative exponent");
  }
  if (!spec.coefficients.empty() && spec.coefficients.size() != spec.exponents.size()) {
    throw InvalidInput("multivariate polynomial: coefficient count mismatch");
  }
}

SizeBounds size_bounds(const MultiPolySpec& spec) {
  validate(spec);
  const std::size_t m = spec.exponents.size();
  std::size_t width = 2 * m;
  int max_all = 0;
  for (std::size_t j = 0; j < spec.variables; ++j) {
    int max_j = 0;
    for (const auto& e : spec.exponents) max_j = std::max(max_j, e[j]);
    width += 2 * static_cast<std::size_t>(max_j);
    max_all = std::max(max_all, max_j);
  }
  return {width, static_cast<std::size_t>(max_all) + spec.variables};
}

NetworkSpec build_factorization_trainable(int degree, int l1, int l2) {
  if (l1 < 0 || l2 < 0 || l1 + 2 * l2 != degree || l1 + l2 < 1) {
    throw InvalidInput("build_factorization_trainable: need l1 + 2 l2 = degree >= 1");
  }
  const auto k = static_cast<std::size_t>(l1 + l2);
  if (k > 16) throw InvalidInput("build_factorization_trainable: too many factors");
  using Subset = unsigned;

  NetworkSpec net;
  net.input_dim = 1;
  Layer first{{}, Activation::identity};
  for (std::size_t i = 0; i < k; ++i) first.neurons.emplace_back(QuadraticNeuron::zeros(1));
  net.layers.push_back(std::move(first));

  // Channel of each subset product, and of each T_i, in the newest layer.
  std::map<Subset, std::size_t> prev;
  for (std::size_t i = 0; i < k; ++i) prev[Subset{1} << i] = i;
  std::vector<NodeRef> taps;
  for (std::size_t i = 0; i < k; ++i) taps.push_back({1, i});

  for (std::size_t s = 2; s <= k; ++s) {
    const std::size_t in = net.output_dim();
    const std::size_t layer_index = net.layers.size() + 1;
    Layer layer{{}, Activation::identity};
    std::map<Subset, std::size_t> next;
    for (Subset set = 1; set < (Subset{1} << k); ++set) {
      if (static_cast<std::size_t>(std::popcount(set)) != s) continue;
      const Subset low = set & (~set + 1);
      QuadraticNeuron q = QuadraticNeuron::zeros(in);
      q.w_r[prev.at(low)] = 1.0;
      q.w_g[prev.at(set ^ low)] = 1.0;
      next[set] = layer.width();
      if (s < k) taps.push_back({layer_index, layer.width()});
      layer.neurons.emplace_back(std::move(q));
    }
    // T_i is needed later when it is the minimum of a subset of size s + 1.
    for (std::size_t i = 0; s < k && i + s < k; ++i) {
      next[Subset{1} << i] = layer.width();
      layer.neurons.emplace_back(Passthrough{prev.at(Subset{1} << i)});
    }
    net.layers.push_back(std::move(layer));
    prev = std::move(next);
  }

  if (k == 1) taps.clear();
  const std::size_t frozen_to = net.layers.size();
  net.layers.push_back(Layer{{ConventionalNeuron{{1.0}, 0.0}}, Activation::identity});
  const std::size_t out_layer = net.layers.size();
  for (const auto& tap : taps) net.shortcuts.push_back({tap, {out_layer, 0}, 0.0, true});

  net.masks.assign(neuron_parameter_count(net), true);
  for (std::size_t layer = 2; layer <= frozen_to; ++layer) set_layer_trainable(net, layer, false);
  validate(net);
  return net;
}

void assign_factors(NetworkSpec& net, const FactoredForm& ff) {
  if (net.layers.empty() || net.layers.front().width() != ff.factor_count()) {
    throw InvalidInput("assign_factors: factor count does not match layer 1");
  }
  auto& first = net.layers.front().neurons;
  std::size_t j = 0;
  for (double r : ff.linear_roots) first[j++] = linear_factor_neuron(r, net.input_dim);
  for (const auto& q : ff.quadratic_factors) first[j++] = quadratic_factor_neuron(q, net.input_dim);
  auto& out = std::get<ConventionalNeuron>(net.layers.back().neurons.front());
  std::fill(out.w.begin(), out.w.end(), ff.scale);
  out.b = 0.0;
  for (auto& s : net.shortcuts) s.weight = 0.0;
}

NetworkSpec build_hidden_layer_net(std::size_t input_dim, std::size_t width,
                                   NeuronKind kind) {
  if (input_dim < 1) throw InvalidInput("hidden layer net: input_dim must be >= 1");
  if (width < 1) throw InvalidInput("hidden layer net: width must be >= 1");
  NetworkSpec net;
  net.input_dim = input_dim;
  Layer hidden{{}, Activation::relu};
  for (std::size_t i = 0; i < width; ++i) {
    if (kind == NeuronKind::quadratic) {
      hidden.neurons.emplace_back(QuadraticNeuron::zeros(input_dim));
    } else {
      hidden.neurons.emplace_back(ConventionalNeuron::zeros(input_dim));
    }
  }
  net.layers.push_back(std::move(hidden));
  net.layers.push_back(Layer{{ConventionalNeuron::zeros(width)}, Activation::identity});
  return net;
}

Polynomial neuron_polynomial(const QuadraticNeuron& q) {
  if (q.input_dim() != 1) throw InvalidInput("neuron_polynomial: neuron must have one input");
  return Polynomial{{q.b_r * q.b_g + q.c, q.w_r[0] * q.b_g + q.b_r * q.w_g[0],
                     q.w_r[0] * q.w_g[0] + q.w_b[0]}};
}

}  // namespace qnn
