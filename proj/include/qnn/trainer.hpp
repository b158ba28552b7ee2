#pragma once

// Full-batch gradient descent with parameter masks and restarts.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qnn/core.hpp"
#include "qnn/dataset.hpp"
#include "qnn/kernels.hpp"

namespace qnn {

struct TrainConfig {
  Loss loss = Loss::mse;
  Reduction reduction = Reduction::mean;
  double learning_rate = 2.0e-3;
  int iterations = 600;
  std::uint64_t seed = 0;
  /// Trainable parameters start uniform in [-init_scale, init_scale].
  double init_scale = 0.5;
  int restarts = 1;
  /// When false, training starts from the parameters already in the network.
  bool reinitialize = true;
  bool parallel_restarts = false;
};

void validate(const TrainConfig& cfg);

struct RestartOutcome {
  std::uint64_t seed = 0;
  bool diverged = false;
  /// Iteration at which the loss went non-finite (diverged runs only).
  int diverged_at = -1;
  double final_loss = 0.0;
};

struct TrainResult {
  NetworkSpec net;
  /// One entry per iteration: the loss before that iteration's update.
  std::vector<double> loss_history;
  double final_loss = 0.0;
  std::size_t best_restart = 0;
  std::vector<RestartOutcome> restarts;
};

class TrainingFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seed used by restart `index`.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t index);

/// Runs cfg.restarts independent descents and keeps the one with the lowest
/// final loss (ties go to the lowest restart index). A restart whose loss
/// goes non-finite is abandoned; TrainingFailed is thrown when all are.
TrainResult train(const NetworkSpec& net, const Dataset& data,
                  const TrainConfig& cfg);

/// Fraction of samples where sign(output) equals the +/-1 label.
double accuracy(const NetworkSpec& net, const Dataset& data);

double mean_absolute_error(const NetworkSpec& net, const Dataset& data);

}  // namespace qnn
