#include "qnn/kernels.hpp"

#include <cmath>

namespace qnn {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check(const NetworkSpec& net, const Dataset& data) {
  validate(data);
  if (data.input_dim() != net.input_dim) {
    throw InvalidInput("dataset dimension does not match network input");
  }
  if (net.output_dim() != 1) throw InvalidInput("loss requires a scalar-output network");
}

double weight(Reduction reduction, std::size_t n) {
  return reduction == Reduction::sum ? 1.0 : 1.0 / static_cast<double>(n);
}

}  // namespace

double sample_loss(Loss loss, double prediction, double target) {
  if (loss == Loss::mse) {
    const double e = prediction - target;
    return e * e;
  }
  return softplus(-target * prediction);
}

double sample_loss_derivative(Loss loss, double prediction, double target) {
  if (loss == Loss::mse) return 2.0 * (prediction - target);
  return -target * sigmoid(-target * prediction);
}

namespace kernels {

namespace reference {

std::vector<double> forward_batch(const NetworkSpec& net,
                                  const std::vector<std::vector<double>>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(forward_scalar(net, x));
  return out;
}

double loss(const NetworkSpec& net, const Dataset& data, Loss loss, Reduction reduction) {
  check(net, data);
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    sum += sample_loss(loss, forward_scalar(net, data.inputs[i]), data.targets[i]);
  }
  return sum * weight(reduction, data.size());
}

LossGradient loss_gradient(const NetworkSpec& net, const Dataset& data, Loss loss,
                           Reduction reduction) {
  check(net, data);
  const double per_sample = weight(reduction, data.size());
  LossGradient out;
  out.grad.assign(parameter_count(net), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const ForwardTrace trace = forward_trace(net, data.inputs[i]);
    const double y = trace.output().front();
    out.loss += sample_loss(loss, y, data.targets[i]);
    const double up[] = {sample_loss_derivative(loss, y, data.targets[i]) * per_sample};
    accumulate_gradient(net, trace, up, out.grad);
  }
  out.loss *= per_sample;
  return out;
}

}  // namespace reference

namespace omp {

namespace {

struct Block {
  std::size_t begin;
  std::size_t end;
};

Block block(std::size_t b, std::size_t n) {
  return {b * n / kBlocks, (b + 1) * n / kBlocks};
}

}  // namespace

std::vector<double> forward_batch(const NetworkSpec& net,
                                  const std::vector<std::vector<double>>& xs) {
  std::vector<double> out(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = forward_scalar(net, xs[static_cast<std::size_t>(i)]);
  }
  return out;
}

double loss(const NetworkSpec& net, const Dataset& data, Loss loss, Reduction reduction) {
  check(net, data);
  const std::size_t n = data.size();
  std::vector<double> partial(kBlocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(kBlocks); ++b) {
    const Block blk = block(static_cast<std::size_t>(b), n);
    double s = 0.0;
    for (std::size_t i = blk.begin; i < blk.end; ++i) {
      s += sample_loss(loss, forward_scalar(net, data.inputs[i]), data.targets[i]);
    }
    partial[static_cast<std::size_t>(b)] = s;
  }
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum * weight(reduction, n);
}

LossGradient loss_gradient(const NetworkSpec& net, const Dataset& data, Loss loss,
                           Reduction reduction) {
  check(net, data);
  const std::size_t n = data.size();
  const std::size_t np = parameter_count(net);
  const double per_sample = weight(reduction, n);
  std::vector<double> partial_loss(kBlocks, 0.0);
  std::vector<std::vector<double>> partial_grad(kBlocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(kBlocks); ++b) {
    const auto ub = static_cast<std::size_t>(b);
    const Block blk = block(ub, n);
    std::vector<double> grad(np, 0.0);
    double s = 0.0;
    for (std::size_t i = blk.begin; i < blk.end; ++i) {
      const ForwardTrace trace = forward_trace(net, data.inputs[i]);
      const double y = trace.output().front();
      s += sample_loss(loss, y, data.targets[i]);
      const double up[] = {sample_loss_derivative(loss, y, data.targets[i]) * per_sample};
      accumulate_gradient(net, trace, up, grad);
    }
    partial_loss[ub] = s;
    partial_grad[ub] = std::move(grad);
  }
  LossGradient out;
  out.grad.assign(np, 0.0);
  for (std::size_t b = 0; b < kBlocks; ++b) {
    out.loss += partial_loss[b];
    for (std::size_t p = 0; p < np; ++p) out.grad[p] += partial_grad[b][p];
  }
  out.loss *= per_sample;
  return out;
}

}  // namespace omp

}  // namespace kernels
}  // namespace qnn
