#include "qnn/core.hpp"

#include <algorithm>
#include <numeric>

namespace qnn {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw InvalidInput(std::string(what) + ": expected input of length " +
                       std::to_string(expected) + ", got " +
                       std::to_string(got));
  }
}

}  // namespace

QuadraticNeuron QuadraticNeuron::zeros(std::size_t n) {
  QuadraticNeuron q;
  q.w_r.assign(n, 0.0);
  q.w_g.assign(n, 0.0);
  q.w_b.assign(n, 0.0);
  return q;
}

ConventionalNeuron ConventionalNeuron::zeros(std::size_t n) {
  ConventionalNeuron c;
  c.w.assign(n, 0.0);
  return c;
}

std::size_t parameter_count(const Neuron& neuron) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Passthrough>) {
          return 0;
        } else {
          return v.parameter_count();
        }
      },
      neuron);
}

std::size_t NetworkSpec::output_dim() const {
  return layers.empty() ? input_dim : layers.back().width();
}

std::size_t NetworkSpec::max_width() const {
  std::size_t w = 0;
  for (const auto& l : layers) w = std::max(w, l.width());
  return w;
}

std::size_t NetworkSpec::width_of(std::size_t layer) const {
  return layer == 0 ? input_dim : layers.at(layer - 1).width();
}

void validate(const NetworkSpec& net) {
  if (net.input_dim == 0) throw InvalidInput("network input_dim must be >= 1");
  if (net.layers.empty()) throw InvalidInput("network has no layers");
  std::size_t in = net.input_dim;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const auto& layer = net.layers[k];
    if (layer.neurons.empty()) {
      throw InvalidInput("layer " + std::to_string(k + 1) + " is empty");
    }
    for (const auto& n : layer.neurons) {
      if (const auto* q = std::get_if<QuadraticNeuron>(&n)) {
        if (q->w_r.size() != in || q->w_g.size() != in || q->w_b.size() != in) {
          throw InvalidInput("quadratic neuron in layer " +
                             std::to_string(k + 1) +
                             " does not match input width " +
                             std::to_string(in));
        }
      } else if (const auto* c = std::get_if<ConventionalNeuron>(&n)) {
        if (c->w.size() != in) {
          throw InvalidInput("conventional neuron in layer " +
                             std::to_string(k + 1) +
                             " does not match input width " +
                             std::to_string(in));
        }
      } else if (std::get<Passthrough>(n).source >= in) {
        throw InvalidInput("pass-through source out of range in layer " +
                           std::to_string(k + 1));
      }
    }
    in = layer.width();
  }
  for (const auto& s : net.shortcuts) {
    if (s.from.layer >= s.to.layer) {
      throw InvalidInput("shortcut must point forward");
    }
    if (s.to.layer == 0 || s.to.layer > net.layers.size()) {
      throw InvalidInput("shortcut destination layer out of range");
    }
    if (s.from.neuron >= net.width_of(s.from.layer) ||
        s.to.neuron >= net.width_of(s.to.layer)) {
      throw InvalidInput("shortcut neuron index out of range");
    }
  }
  if (!net.masks.empty() && net.masks.size() != neuron_parameter_count(net)) {
    throw InvalidInput("mask length " + std::to_string(net.masks.size()) +
                       " does not match parameter count " +
                       std::to_string(neuron_parameter_count(net)));
  }
}

std::size_t neuron_parameter_count(const NetworkSpec& net) {
  std::size_t total = 0;
  for (const auto& l : net.layers)
    for (const auto& n : l.neurons) total += parameter_count(n);
  return total;
}

std::size_t parameter_count(const NetworkSpec& net) {
  return neuron_parameter_count(net) + net.shortcuts.size();
}

std::vector<double> get_parameters(const NetworkSpec& net) {
  std::vector<double> out;
  out.reserve(parameter_count(net));
  auto append = [&out](const std::vector<double>& v) {
    out.insert(out.end(), v.begin(), v.end());
  };
  for (const auto& l : net.layers) {
    for (const auto& n : l.neurons) {
      if (const auto* q = std::get_if<QuadraticNeuron>(&n)) {
        append(q->w_r);
        out.push_back(q->b_r);
        append(q->w_g);
        out.push_back(q->b_g);
        append(q->w_b);
        out.push_back(q->c);
      } else if (const auto* c = std::get_if<ConventionalNeuron>(&n)) {
        append(c->w);
        out.push_back(c->b);
      }
    }
  }
  for (const auto& s : net.shortcuts) out.push_back(s.weight);
  return out;
}

void set_parameters(NetworkSpec& net, std::span<const double> values) {
  if (values.size() != parameter_count(net)) {
    throw InvalidInput("set_parameters: expected " +
                       std::to_string(parameter_count(net)) + " values, got " +
                       std::to_string(values.size()));
  }
  std::size_t pos = 0;
  auto take = [&](std::vector<double>& v) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(pos), v.size(),
                v.begin());
    pos += v.size();
  };
  for (auto& l : net.layers) {
    for (auto& n : l.neurons) {
      if (auto* q = std::get_if<QuadraticNeuron>(&n)) {
        take(q->w_r);
        q->b_r = values[pos++];
        take(q->w_g);
        q->b_g = values[pos++];
        take(q->w_b);
        q->c = values[pos++];
      } else if (auto* c = std::get_if<ConventionalNeuron>(&n)) {
        take(c->w);
        c->b = values[pos++];
      }
    }
  }
  for (auto& s : net.shortcuts) s.weight = values[pos++];
}

std::vector<bool> trainable_flags(const NetworkSpec& net) {
  std::vector<bool> flags;
  const std::size_t np = neuron_parameter_count(net);
  flags.reserve(np + net.shortcuts.size());
  if (net.masks.empty()) {
    flags.assign(np, true);
  } else {
    flags = net.masks;
  }
  for (const auto& s : net.shortcuts) flags.push_back(s.trainable);
  return flags;
}

std::vector<std::size_t> trainable_indices(const NetworkSpec& net) {
  const auto flags = trainable_flags(net);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) idx.push_back(i);
  return idx;
}

std::size_t trainable_count(const NetworkSpec& net) {
  const auto flags = trainable_flags(net);
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

void set_layer_trainable(NetworkSpec& net, std::size_t layer,
                         bool trainable) {
  if (layer == 0 || layer > net.layers.size()) {
    throw InvalidInput("set_layer_trainable: layer out of range");
  }
  if (net.masks.empty()) net.masks.assign(neuron_parameter_count(net), true);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < layer - 1; ++k)
    for (const auto& n : net.layers[k].neurons) pos += parameter_count(n);
  for (const auto& n : net.layers[layer - 1].neurons) {
    for (std::size_t i = 0; i < parameter_count(n); ++i)
      net.masks[pos++] = trainable;
  }
}

double relu(double z) { return z > 0.0 ? z : 0.0; }

double quad_preactivation(const QuadraticNeuron& neuron,
                          std::span<const double> x) {
  require_dim(neuron.input_dim(), x.size(), "quad_preactivation");
  const double r = dot(neuron.w_r, x) + neuron.b_r;
  const double g = dot(neuron.w_g, x) + neuron.b_g;
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sq += neuron.w_b[i] * x[i] * x[i];
  return r * g + sq + neuron.c;
}

double conv_preactivation(const ConventionalNeuron& neuron,
                          std::span<const double> x) {
  require_dim(neuron.input_dim(), x.size(), "conv_preactivation");
  return dot(neuron.w, x) + neuron.b;
}

ForwardTrace forward_trace(const NetworkSpec& net, std::span<const double> x) {
  require_dim(net.input_dim, x.size(), "forward");
  ForwardTrace t;
  const std::size_t depth = net.layers.size();
  t.pre.resize(depth + 1);
  t.act.resize(depth + 1);
  t.act[0].assign(x.begin(), x.end());
  t.pre[0] = t.act[0];
  for (std::size_t k = 1; k <= depth; ++k) {
    const Layer& layer = net.layers[k - 1];
    const std::vector<double>& in = t.act[k - 1];
    std::vector<double>& pre = t.pre[k];
    pre.resize(layer.width());
    for (std::size_t j = 0; j < layer.width(); ++j) {
      const Neuron& n = layer.neurons[j];
      if (const auto* q = std::get_if<QuadraticNeuron>(&n)) {
        pre[j] = quad_preactivation(*q, in);
      } else if (const auto* c = std::get_if<ConventionalNeuron>(&n)) {
        pre[j] = conv_preactivation(*c, in);
      } else {
        pre[j] = in.at(std::get<Passthrough>(n).source);
      }
    }
    for (const auto& s : net.shortcuts) {
      if (s.to.layer == k) pre[s.to.neuron] += s.weight * t.act[s.from.layer][s.from.neuron];
    }
    auto& act = t.act[k];
    act = pre;
    if (layer.activation == Activation::relu) {
      for (auto& a : act) a = relu(a);
    }
  }
  return t;
}

std::vector<double> forward(const NetworkSpec& net, std::span<const double> x) {
  return forward_trace(net, x).output();
}

double forward_scalar(const NetworkSpec& net, std::span<const double> x) {
  if (net.output_dim() != 1) {
    throw InvalidInput("forward_scalar: network output is not scalar");
  }
  return forward(net, x).front();
}

void accumulate_gradient(const NetworkSpec& net, const ForwardTrace& trace,
                         std::span<const double> upstream,
                         std::span<double> grad) {
  require_dim(net.output_dim(), upstream.size(), "backward upstream");
  const std::size_t depth = net.layers.size();

  // Offsets of each neuron's parameter block and of the shortcut weights.
  std::vector<std::vector<std::size_t>> offset(depth + 1);
  std::size_t pos = 0;
  for (std::size_t k = 1; k <= depth; ++k) {
    for (const auto& n : net.layers[k - 1].neurons) {
      offset[k].push_back(pos);
      pos += parameter_count(n);
    }
  }
  const std::size_t shortcut_base = pos;

  // d(objective)/d(activation) per layer.
  std::vector<std::vector<double>> dact(depth + 1);
  for (std::size_t k = 0; k <= depth; ++k) dact[k].assign(trace.act[k].size(), 0.0);
  std::copy(upstream.begin(), upstream.end(), dact[depth].begin());

  std::vector<double> dpre;
  for (std::size_t k = depth; k >= 1; --k) {
    const Layer& layer = net.layers[k - 1];
    const auto& pre = trace.pre[k];
    const auto& in = trace.act[k - 1];
    auto& din = dact[k - 1];
    dpre.assign(layer.width(), 0.0);
    for (std::size_t j = 0; j < layer.width(); ++j) {
      const bool pass = layer.activation == Activation::identity || pre[j] > 0.0;
      dpre[j] = pass ? dact[k][j] : 0.0;
    }
    for (std::size_t si = 0; si < net.shortcuts.size(); ++si) {
      const auto& s = net.shortcuts[si];
      if (s.to.layer != k) continue;
      const double d = dpre[s.to.neuron];
      grad[shortcut_base + si] += d * trace.act[s.from.layer][s.from.neuron];
      dact[s.from.layer][s.from.neuron] += d * s.weight;
    }
    for (std::size_t j = 0; j < layer.width(); ++j) {
      const double d = dpre[j];
      if (d == 0.0) continue;
      const Neuron& n = layer.neurons[j];
      std::size_t p = offset[k][j];
      if (const auto* q = std::get_if<QuadraticNeuron>(&n)) {
        const std::size_t m = in.size();
        const double r = dot(q->w_r, in) + q->b_r;
        const double g = dot(q->w_g, in) + q->b_g;
        for (std::size_t i = 0; i < m; ++i) grad[p + i] += d * g * in[i];
        grad[p + m] += d * g;
        p += m + 1;
        for (std::size_t i = 0; i < m; ++i) grad[p + i] += d * r * in[i];
        grad[p + m] += d * r;
        p += m + 1;
        for (std::size_t i = 0; i < m; ++i) grad[p + i] += d * in[i] * in[i];
        grad[p + m] += d;
        for (std::size_t i = 0; i < m; ++i) {
          din[i] += d * (q->w_r[i] * g + q->w_g[i] * r + 2.0 * q->w_b[i] * in[i]);
        }
      } else if (const auto* c = std::get_if<ConventionalNeuron>(&n)) {
        const std::size_t m = in.size();
        for (std::size_t i = 0; i < m; ++i) {
          grad[p + i] += d * in[i];
          din[i] += d * c->w[i];
        }
        grad[p + m] += d;
      } else {
        din[std::get<Passthrough>(n).source] += d;
      }
    }
  }
}

GradientBundle compact_gradient(const NetworkSpec& net,
                                std::span<const double> full) {
  const auto flags = trainable_flags(net);
  GradientBundle g;
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) g.values.push_back(full[i]);
  return g;
}

GradientBundle backward(const NetworkSpec& net, std::span<const double> x,
                        std::span<const double> upstream) {
  const ForwardTrace trace = forward_trace(net, x);
  std::vector<double> full(parameter_count(net), 0.0);
  accumulate_gradient(net, trace, upstream, full);
  return compact_gradient(net, full);
}

}  // namespace qnn
