#pragma once

// Batch kernels over a dataset. `reference` is the plain serial loop kept as
// the ground truth for testing; `omp` splits the samples into a fixed number
// of blocks, runs the blocks in parallel and sums block results in order, so
// its output does not depend on the thread count.

#include <span>
#include <vector>

#include "qnn/core.hpp"
#include "qnn/dataset.hpp"

namespace qnn {

enum class Loss { mse, logistic };

/// Whether per-sample losses are averaged or summed over the dataset.
enum class Reduction { mean, sum };

/// Per-sample loss and d(loss)/d(prediction).
double sample_loss(Loss loss, double prediction, double target);
double sample_loss_derivative(Loss loss, double prediction, double target);

namespace kernels {

/// Reduced loss and its gradient with respect to every parameter (frozen ones
/// included), in canonical order.
struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;
};

namespace reference {
std::vector<double> forward_batch(const NetworkSpec& net,
                                  const std::vector<std::vector<double>>& xs);
double loss(const NetworkSpec& net, const Dataset& data, Loss loss,
            Reduction reduction = Reduction::mean);
LossGradient loss_gradient(const NetworkSpec& net, const Dataset& data, Loss loss,
                           Reduction reduction = Reduction::mean);
}  // namespace reference

namespace omp {
inline constexpr std::size_t kBlocks = 32;

std::vector<double> forward_batch(const NetworkSpec& net,
                                  const std::vector<std::vector<double>>& xs);
double loss(const NetworkSpec& net, const Dataset& data, Loss loss,
            Reduction reduction = Reduction::mean);
LossGradient loss_gradient(const NetworkSpec& net, const Dataset& data, Loss loss,
                           Reduction reduction = Reduction::mean);
}  // namespace omp

}  // namespace kernels
}  // namespace qnn
