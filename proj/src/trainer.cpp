#include "qnn/trainer.hpp"

#include <cmath>
#include <random>

namespace qnn {

void validate(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw InvalidInput("train: learning_rate must be > 0");
  if (cfg.iterations < 1) throw InvalidInput("train: iterations must be >= 1");
  if (cfg.restarts < 1) throw InvalidInput("train: restarts must be >= 1");
  if (!(cfg.init_scale >= 0.0)) throw InvalidInput("train: init_scale must be >= 0");
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct RunState {
  NetworkSpec net;
  std::vector<double> history;
  RestartOutcome outcome;
};

bool finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

RunState run_once(const NetworkSpec& start, const Dataset& data,
                  const TrainConfig& cfg, std::size_t index) {
  RunState st{start, {}, {}};
  st.outcome.seed = restart_seed(cfg.seed, index);
  const auto trainable = trainable_indices(st.net);
  std::vector<double> theta = get_parameters(st.net);
  if (cfg.reinitialize) {
    std::mt19937_64 rng(st.outcome.seed);
    std::uniform_real_distribution<double> init(-cfg.init_scale, cfg.init_scale);
    for (std::size_t i : trainable) theta[i] = init(rng);
    set_parameters(st.net, theta);
  }
  st.history.reserve(static_cast<std::size_t>(cfg.iterations));
  for (int it = 0; it < cfg.iterations; ++it) {
    const auto lg = kernels::omp::loss_gradient(st.net, data, cfg.loss, cfg.reduction);
    st.history.push_back(lg.loss);
    if (!std::isfinite(lg.loss) || !finite(lg.grad)) {
      st.outcome.diverged = true;
      st.outcome.diverged_at = it;
      return st;
    }
    for (std::size_t i : trainable) theta[i] -= cfg.learning_rate * lg.grad[i];
    set_parameters(st.net, theta);
  }
  st.outcome.final_loss = kernels::omp::loss(st.net, data, cfg.loss, cfg.reduction);
  if (!std::isfinite(st.outcome.final_loss) || !finite(theta)) {
    st.outcome.diverged = true;
    st.outcome.diverged_at = cfg.iterations;
  }
  return st;
}

}  // namespace

TrainResult train(const NetworkSpec& net, const Dataset& data,
                  const TrainConfig& cfg) {
  validate(cfg);
  validate(net);
  validate(data);
  if (data.input_dim() != net.input_dim) {
    throw InvalidInput("train: dataset dimension does not match network input");
  }

  const auto n = static_cast<std::size_t>(cfg.restarts);
  std::vector<RunState> runs(n);
#pragma omp parallel for schedule(dynamic) if (cfg.parallel_restarts)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n); ++r) {
    const auto i = static_cast<std::size_t>(r);
    runs[i] = run_once(net, data, cfg, i);
  }

  TrainResult result;
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    result.restarts.push_back(runs[i].outcome);
    if (runs[i].outcome.diverged) continue;
    if (!found || runs[i].outcome.final_loss < runs[result.best_restart].outcome.final_loss) {
      result.best_restart = i;
      found = true;
    }
  }
  if (!found) throw TrainingFailed("train: every restart diverged");
  RunState& best = runs[result.best_restart];
  result.net = std::move(best.net);
  result.loss_history = std::move(best.history);
  result.final_loss = best.outcome.final_loss;
  return result;
}

double accuracy(const NetworkSpec& net, const Dataset& data) {
  validate(data);
  const auto out = kernels::omp::forward_batch(net, data.inputs);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double sign = out[i] > 0.0 ? 1.0 : (out[i] < 0.0 ? -1.0 : 0.0);
    if (sign == data.targets[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

double mean_absolute_error(const NetworkSpec& net, const Dataset& data) {
  validate(data);
  const auto out = kernels::omp::forward_batch(net, data.inputs);
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += std::abs(out[i] - data.targets[i]);
  return s / static_cast<double>(data.size());
}

}  // namespace qnn
