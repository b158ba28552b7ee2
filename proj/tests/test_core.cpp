#include <doctest.h>

#include <cmath>
#include <random>

#include "qnn/core.hpp"
#include "qnn/oracles.hpp"
#include "random_net.hpp"

using namespace qnn;

namespace {

NetworkSpec norm_net(std::size_t n) {
  QuadraticNeuron q = QuadraticNeuron::zeros(n);
  std::fill(q.w_b.begin(), q.w_b.end(), 1.0);
  NetworkSpec net;
  net.input_dim = n;
  net.layers.push_back(Layer{{q}, Activation::relu});
  return net;
}

}  // namespace

TEST_CASE("quadratic preactivation examples") {
  QuadraticNeuron q = QuadraticNeuron::zeros(2);
  q.w_r = {1, 0};
  q.w_g = {1, 0};
  const double x[] = {2, 3};
  CHECK(quad_preactivation(q, x) == 4.0);

  QuadraticNeuron n = QuadraticNeuron::zeros(2);
  n.w_b = {1, 1};
  const double y[] = {3, 4};
  CHECK(quad_preactivation(n, y) == 25.0);

  const double bad[] = {1, 2, 3};
  CHECK_THROWS_AS(quad_preactivation(n, bad), InvalidInput);
}

TEST_CASE("conventional preactivation examples") {
  const double x[] = {2, 3};
  CHECK(conv_preactivation(ConventionalNeuron{{1, 1}, 0}, x) == 5.0);
  CHECK(conv_preactivation(ConventionalNeuron{{0, 0}, 7}, x) == 7.0);
  const double z[] = {2, 1};
  CHECK(conv_preactivation(ConventionalNeuron{{0.5, -1}, 1}, z) == 1.0);
  const double bad[] = {1};
  CHECK_THROWS_AS(conv_preactivation(ConventionalNeuron{{1, 1}, 0}, bad), InvalidInput);
}

TEST_CASE("relu") {
  CHECK(relu(-1.0) == 0.0);
  CHECK(relu(0.0) == 0.0);
  CHECK(relu(2.5) == 2.5);
}

TEST_CASE("parameter count is 3n + 3") {
  for (std::size_t n = 1; n < 6; ++n) {
    CHECK(QuadraticNeuron::zeros(n).parameter_count() == 3 * n + 3);
    NetworkSpec net = norm_net(n);
    CHECK(get_parameters(net).size() == 3 * n + 3);
  }
}

TEST_CASE("forward examples") {
  const std::vector<double> x{3, 4};
  NetworkSpec net = norm_net(2);
  CHECK(forward_scalar(net, x) == 25.0);

  net.layers.push_back(Layer{{ConventionalNeuron{{1}, -25}}, Activation::identity});
  CHECK(forward_scalar(net, x) == 0.0);

  CHECK_THROWS_AS(forward(net, std::vector<double>{1, 2, 3}), InvalidInput);
}

TEST_CASE("backward examples") {
  NetworkSpec net = norm_net(2);
  net.layers[0].activation = Activation::identity;
  const std::vector<double> x{3, 4};
  const double up[] = {1.0};
  const auto g = backward(net, x, up).values;
  REQUIRE(g.size() == 9);
  // w_r(2) b_r w_g(2) b_g w_b(2) c
  CHECK(g[6] == 9.0);
  CHECK(g[7] == 16.0);
  CHECK(g[8] == 1.0);
}

TEST_CASE("frozen parameters get no gradient entry") {
  NetworkSpec net = norm_net(2);
  net.masks.assign(9, false);
  net.masks[8] = true;
  const double up[] = {1.0};
  const auto g = backward(net, std::vector<double>{1, 2}, up).values;
  CHECK(g.size() == 1);
  CHECK(trainable_count(net) == 1);
}

TEST_CASE("gating off reduces a quadratic neuron to b_g times a linear one plus c") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 200; ++t) {
    QuadraticNeuron q = QuadraticNeuron::zeros(3);
    for (auto& v : q.w_r) v = u(rng);
    for (auto& v : q.w_g) v = 0.0;
    q.b_r = u(rng);
    q.b_g = u(rng);
    q.c = u(rng);
    const auto x = testing::random_input(rng, 3);
    const double expect = q.b_g * conv_preactivation(ConventionalNeuron{q.w_r, q.b_r}, x) + q.c;
    CHECK(quad_preactivation(q, x) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("quadratic neuron subsumes a conventional one") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 200; ++t) {
    ConventionalNeuron c{{u(rng), u(rng)}, u(rng)};
    QuadraticNeuron q = QuadraticNeuron::zeros(2);
    q.w_r = c.w;
    q.b_r = c.b;
    q.b_g = 1.0;
    const auto x = testing::random_input(rng, 2);
    CHECK(quad_preactivation(q, x) == conv_preactivation(c, x));
  }
}

TEST_CASE("forward is deterministic") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const NetworkSpec net = testing::random_network(rng);
    const auto x = testing::random_input(rng, net.input_dim);
    CHECK(forward(net, x) == forward(net, x));
  }
}

TEST_CASE("zero-weight shortcut leaves the output unchanged") {
  std::mt19937_64 rng(14);
  int checked = 0;
  while (checked < 50) {
    NetworkSpec net = testing::random_network(rng, false);
    if (net.depth() < 2) continue;
    const auto x = testing::random_input(rng, net.input_dim);
    const auto before = forward(net, x);
    net.shortcuts.push_back({{0, 0}, {net.depth(), 0}, 0.0, true});
    CHECK(forward(net, x) == before);
    ++checked;
  }
}

TEST_CASE("shortcut adds into the pre-activation") {
  NetworkSpec net = norm_net(2);
  net.layers.push_back(Layer{{ConventionalNeuron{{1}, 0}}, Activation::identity});
  net.shortcuts.push_back({{0, 1}, {2, 0}, 2.0, true});
  CHECK(forward_scalar(net, std::vector<double>{3, 4}) == 33.0);
}

TEST_CASE("validate rejects malformed networks") {
  NetworkSpec net = norm_net(2);
  net.layers.push_back(Layer{{ConventionalNeuron{{1, 1}, 0}}, Activation::identity});
  CHECK_THROWS_AS(validate(net), InvalidInput);

  NetworkSpec back = norm_net(2);
  back.layers.push_back(Layer{{ConventionalNeuron{{1}, 0}}, Activation::identity});
  back.shortcuts.push_back({{2, 0}, {1, 0}, 1.0, true});
  CHECK_THROWS_AS(validate(back), InvalidInput);

  NetworkSpec masks = norm_net(2);
  masks.masks.assign(3, true);
  CHECK_THROWS_AS(validate(masks), InvalidInput);
}

TEST_CASE("parameter vector round trip") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 50; ++t) {
    NetworkSpec net = testing::random_network(rng);
    auto theta = get_parameters(net);
    for (auto& v : theta) v += 0.25;
    set_parameters(net, theta);
    CHECK(get_parameters(net) == theta);
  }
}

TEST_CASE("backward matches central differences on random networks") {
  std::mt19937_64 rng(16);
  double worst = 0.0;
  int checked = 0;
  while (checked < 100) {
    const NetworkSpec net = testing::random_network(rng, true, checked % 2 == 1);
    std::vector<double> x;
    bool ok = false;
    for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
      x = testing::random_input(rng, net.input_dim);
      ok = testing::away_from_kinks(net, x, 1e-3);
    }
    if (!ok) continue;
    const double up[] = {1.0};
    const auto a = backward(net, x, up).values;
    const auto f = oracles::finite_diff_grad(net, x, 1e-5).values;
    REQUIRE(a.size() == f.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double rel = std::abs(a[i] - f[i]) / std::max({std::abs(a[i]), std::abs(f[i]), 1.0});
      worst = std::max(worst, rel);
    }
    ++checked;
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("a single quadratic neuron implements XOR") {
  const double grid[] = {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5};
  const double pts[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const double labels[4] = {-1, 1, 1, -1};
  bool found = false;
  QuadraticNeuron q = QuadraticNeuron::zeros(2);
  for (double a : grid)
    for (double b : grid)
      for (double br : grid)
        for (double c : grid)
          for (double d : grid)
            for (double bg : grid) {
              if (found) break;
              q.w_r = {a, b};
              q.b_r = br;
              q.w_g = {c, d};
              q.b_g = bg;
              int ok = 0;
              for (int i = 0; i < 4; ++i) {
                const double h = quad_preactivation(q, pts[i]);
                ok += (h > 0 ? 1.0 : h < 0 ? -1.0 : 0.0) == labels[i];
              }
              found = ok == 4;
            }
  CHECK(found);
}
