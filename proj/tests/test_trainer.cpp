#include <doctest.h>

#include <cmath>
#include <random>

#include "qnn/builders.hpp"
#include "qnn/trainer.hpp"
#include "random_net.hpp"

using namespace qnn;

namespace {

NetworkSpec single_quadratic(std::size_t dim, Activation act) {
  NetworkSpec net;
  net.input_dim = dim;
  net.layers.push_back(Layer{{QuadraticNeuron::zeros(dim)}, act});
  return net;
}

Dataset teacher_data(const NetworkSpec& teacher, std::size_t n, std::uint64_t seed,
                     double spread = 1.0) {
  std::mt19937_64 rng(seed);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    d.inputs.push_back(testing::random_input(rng, teacher.input_dim));
    for (auto& v : d.inputs.back()) v *= spread;
    d.targets.push_back(forward_scalar(teacher, d.inputs.back()));
  }
  return d;
}

}  // namespace

TEST_CASE("config validation") {
  TrainConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(validate(cfg), InvalidInput);
  cfg = {};
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(validate(cfg), InvalidInput);
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS_AS(validate(cfg), InvalidInput);
}

TEST_CASE("one iteration gives one history entry") {
  const auto data = make_poly_dataset(Polynomial{{0, 1}}, -1, 1, 10);
  TrainConfig cfg;
  cfg.iterations = 1;
  const auto res = train(single_quadratic(1, Activation::identity), data, cfg);
  CHECK(res.loss_history.size() == 1);
}

TEST_CASE("input width must match the data") {
  const auto data = make_poly_dataset(Polynomial{{0, 1}}, -1, 1, 10);
  CHECK_THROWS_AS(train(single_quadratic(2, Activation::identity), data, {}), InvalidInput);
}

TEST_CASE("masked parameters stay bit-identical") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 10; ++t) {
    const NetworkSpec net = testing::random_network(rng, true, true);
    Dataset d = teacher_data(net, 30, static_cast<std::uint64_t>(t));
    for (auto& y : d.targets) y += 0.1;
    TrainConfig cfg;
    cfg.iterations = 20;
    cfg.learning_rate = 1e-3;
    cfg.seed = static_cast<std::uint64_t>(t);
    const auto res = train(net, d, cfg);
    const auto before = get_parameters(net);
    const auto after = get_parameters(res.net);
    const auto flags = trainable_flags(net);
    for (std::size_t i = 0; i < before.size(); ++i)
      if (!flags[i]) CHECK(before[i] == after[i]);
  }
}

TEST_CASE("training is deterministic") {
  const auto data = make_rings_dataset(20, 1.0, 2.0, 0.1, 3);
  TrainConfig cfg;
  cfg.loss = Loss::logistic;
  cfg.learning_rate = 0.1;
  cfg.iterations = 50;
  cfg.restarts = 3;
  cfg.seed = 9;
  const auto net = build_hidden_layer_net(2, 3, NeuronKind::conventional);
  const auto a = train(net, data, cfg);
  const auto b = train(net, data, cfg);
  CHECK(get_parameters(a.net) == get_parameters(b.net));
  CHECK(a.loss_history == b.loss_history);
  cfg.parallel_restarts = true;
  const auto c = train(net, data, cfg);
  CHECK(get_parameters(a.net) == get_parameters(c.net));
  CHECK(a.best_restart == c.best_restart);
}

TEST_CASE("small learning rate descends") {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = make_poly_dataset(Polynomial{{0.3, -0.5, 1.2}}, -1, 1, 40);
    TrainConfig cfg;
    cfg.learning_rate = 1e-4;
    cfg.iterations = 10;
    cfg.seed = seed;
    const auto h = train(single_quadratic(1, Activation::identity), data, cfg).loss_history;
    bool mono = true;
    for (std::size_t i = 1; i < h.size(); ++i) mono = mono && h[i] <= h[i - 1];
    good += mono;
  }
  CHECK(good >= 9);
}

TEST_CASE("single neuron recovers a teacher") {
  NetworkSpec teacher = single_quadratic(1, Activation::identity);
  auto& q = std::get<QuadraticNeuron>(teacher.layers[0].neurons[0]);
  q.w_r = {0.8};
  q.b_r = -0.3;
  q.w_g = {0.5};
  q.b_g = 0.4;
  q.w_b = {0.2};
  q.c = 0.1;
  const Dataset data = teacher_data(teacher, 50, 7, 2.0);
  TrainConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.iterations = 2000;
  const auto res = train(single_quadratic(1, Activation::identity), data, cfg);
  CHECK(res.final_loss < 1e-6);
}

TEST_CASE("divergence is recorded and reported") {
  const auto data = make_poly_dataset(Polynomial{{0, 0, 0, 50}}, -3, 3, 20);
  TrainConfig cfg;
  cfg.learning_rate = 10.0;
  cfg.iterations = 200;
  cfg.restarts = 2;
  cfg.init_scale = 2.0;
  CHECK_THROWS_AS(train(single_quadratic(1, Activation::identity), data, cfg), TrainingFailed);
}

TEST_CASE("accuracy and mean absolute error") {
  Dataset d{{{1.0}, {-1.0}, {2.0}, {-2.0}}, {1, -1, 1, -1}};
  NetworkSpec id;
  id.input_dim = 1;
  id.layers.push_back(Layer{{ConventionalNeuron{{1}, 0}}, Activation::identity});
  CHECK(accuracy(id, d) == 1.0);
  NetworkSpec constant = id;
  std::get<ConventionalNeuron>(constant.layers[0].neurons[0]) = ConventionalNeuron{{0}, 1};
  CHECK(accuracy(constant, d) == 0.5);
  CHECK(mean_absolute_error(id, d) == doctest::Approx(0.5));
}

TEST_CASE("ring datasets") {
  const auto d = make_rings_dataset(60, 1.0, 2.0, 0.0, 1);
  CHECK(d.size() == 120);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = std::hypot(d.inputs[i][0], d.inputs[i][1]);
    CHECK(r == doctest::Approx(d.targets[i] > 0 ? 1.0 : 2.0).epsilon(1e-14));
  }
  const auto a = make_rings_dataset(10, 1.0, 2.0, 0.1, 5);
  const auto b = make_rings_dataset(10, 1.0, 2.0, 0.1, 5);
  CHECK(a.inputs == b.inputs);
  CHECK_THROWS_AS(make_rings_dataset(10, 2.0, 1.0, 0.1, 0), InvalidInput);
}

TEST_CASE("poly datasets") {
  const Polynomial g{{-1.2, -0.5, -0.5, 0.5, 0.7, 1.0}};
  const auto d = make_poly_dataset(g, -1, 0, 100);
  CHECK(d.size() == 100);
  CHECK(d.inputs.front()[0] == -1.0);
  CHECK(d.inputs.back()[0] == 0.0);
  CHECK(make_poly_dataset(g, 0, 1, 2).size() == 2);
}

TEST_CASE("annuli datasets") {
  const auto t = make_random_annuli(3, 1.0, 4);
  CHECK(std::is_sorted(t.edges.begin(), t.edges.end()));
  const auto d = make_annuli_dataset(t, 4, 200, 5);
  for (std::size_t i = 0; i < d.size(); ++i) {
    double n = 0.0;
    for (double v : d.inputs[i]) n += v * v;
    CHECK(std::sqrt(n) <= 1.0 + 1e-12);
    CHECK(d.targets[i] == t(std::sqrt(n)));
  }
}

TEST_CASE("noise-free rings: one quadratic neuron separates, two conventional do not") {
  const auto data = make_rings_dataset(60, 1.0, 2.0, 0.0, 0);
  TrainConfig cfg;
  cfg.loss = Loss::logistic;
  cfg.learning_rate = 0.1;
  cfg.iterations = 3000;
  bool quad_ok = false;
  bool conv_ok = false;
  for (std::uint64_t s = 0; s < 5; ++s) {
    cfg.seed = s;
    quad_ok = quad_ok || accuracy(train(single_quadratic(2, Activation::identity), data, cfg).net, data) == 1.0;
    conv_ok = conv_ok || accuracy(train(build_hidden_layer_net(2, 2, NeuronKind::conventional), data, cfg).net, data) == 1.0;
  }
  CHECK(quad_ok);
  CHECK_FALSE(conv_ok);
}
