#pragma once

// Quadratic, conventional and pass-through neurons, layered networks with
// forward shortcuts, and exact analytic gradients.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qnn {

/// Raised for malformed arguments: dimension mismatches, invalid ranges.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Activation { relu, identity };

/// h(x) = (w_r.x + b_r)(w_g.x + b_g) + w_b.(x*x) + c
///
/// Parameters in canonical order: w_r, b_r, w_g, b_g, w_b, c (3n + 3 values).
struct QuadraticNeuron {
  std::vector<double> w_r;
  double b_r = 0.0;
  std::vector<double> w_g;
  double b_g = 0.0;
  std::vector<double> w_b;
  double c = 0.0;

  /// All-zero neuron over n inputs.
  static QuadraticNeuron zeros(std::size_t n);

  std::size_t input_dim() const { return w_r.size(); }
  std::size_t parameter_count() const { return 3 * w_r.size() + 3; }
};

/// h(x) = w.x + b
struct ConventionalNeuron {
  std::vector<double> w;
  double b = 0.0;

  static ConventionalNeuron zeros(std::size_t n);

  std::size_t input_dim() const { return w.size(); }
  std::size_t parameter_count() const { return w.size() + 1; }
};

/// Copies one input channel unchanged. Has no parameters.
struct Passthrough {
  std::size_t source = 0;
};

using Neuron = std::variant<QuadraticNeuron, ConventionalNeuron, Passthrough>;

std::size_t parameter_count(const Neuron& neuron);

struct Layer {
  std::vector<Neuron> neurons;
  Activation activation = Activation::relu;

  std::size_t width() const { return neurons.size(); }
};

/// Addresses one activation. Layer 0 is the network input; layer k >= 1 is
/// NetworkSpec::layers[k - 1].
struct NodeRef {
  std::size_t layer = 0;
  std::size_t neuron = 0;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

/// Adds weight * activation(from) to the pre-activation of `to`.
struct Shortcut {
  NodeRef from;
  NodeRef to;
  double weight = 1.0;
  bool trainable = true;
};

/// A feed-forward network. `masks` holds one trainability flag per neuron
/// parameter in canonical order; an empty vector means everything is
/// trainable. Shortcut weights carry their own flag.
struct NetworkSpec {
  std::size_t input_dim = 0;
  std::vector<Layer> layers;
  std::vector<Shortcut> shortcuts;
  std::vector<bool> masks;

  std::size_t depth() const { return layers.size(); }
  std::size_t output_dim() const;
  std::size_t max_width() const;
  std::size_t width_of(std::size_t layer) const;  // layer as in NodeRef
};

/// Throws InvalidInput when the dimensions do not chain, a shortcut points
/// backwards or out of range, or the mask length is wrong.
void validate(const NetworkSpec& net);

// Canonical parameter ordering: layer-major, neuron-minor, each neuron in its
// own canonical order, then shortcut weights in insertion order.
std::size_t neuron_parameter_count(const NetworkSpec& net);
std::size_t parameter_count(const NetworkSpec& net);
std::vector<double> get_parameters(const NetworkSpec& net);
void set_parameters(NetworkSpec& net, std::span<const double> values);
std::vector<bool> trainable_flags(const NetworkSpec& net);
std::vector<std::size_t> trainable_indices(const NetworkSpec& net);
std::size_t trainable_count(const NetworkSpec& net);

/// Marks every parameter of one layer (1-based) trainable or frozen.
void set_layer_trainable(NetworkSpec& net, std::size_t layer, bool trainable);

double relu(double z);
double quad_preactivation(const QuadraticNeuron& neuron,
                          std::span<const double> x);
double conv_preactivation(const ConventionalNeuron& neuron,
                          std::span<const double> x);

/// Per-layer pre-activations and activations; act[0] is the input.
struct ForwardTrace {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> act;

  const std::vector<double>& output() const { return act.back(); }
};

ForwardTrace forward_trace(const NetworkSpec& net, std::span<const double> x);
std::vector<double> forward(const NetworkSpec& net, std::span<const double> x);

/// Scalar-output convenience; throws unless output_dim() == 1.
double forward_scalar(const NetworkSpec& net, std::span<const double> x);

/// Gradient with respect to every trainable parameter, in canonical order.
struct GradientBundle {
  std::vector<double> values;
};

/// Accumulates d(upstream . output)/d(theta) for ALL parameters into `grad`
/// (length parameter_count(net)), frozen ones included.
void accumulate_gradient(const NetworkSpec& net, const ForwardTrace& trace,
                         std::span<const double> upstream,
                         std::span<double> grad);

GradientBundle backward(const NetworkSpec& net, std::span<const double> x,
                        std::span<const double> upstream);

/// Restricts a full-length gradient to the trainable entries.
GradientBundle compact_gradient(const NetworkSpec& net,
                                std::span<const double> full);

}  // namespace qnn
