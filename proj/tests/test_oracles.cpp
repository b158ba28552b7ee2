#include <doctest.h>

#include <cmath>

#include "qnn/oracles.hpp"

using namespace qnn;
using namespace qnn::oracles;

TEST_CASE("horner") {
  CHECK(horner(Polynomial{{-1, 0, 1}}, 3.0) == 8.0);
  CHECK(horner(Polynomial{{-1.2, -0.5, -0.5, 0.5, 0.7, 1.0}}, -0.5) ==
        doctest::Approx(-1.125).epsilon(1e-14));
  CHECK(horner(Polynomial{{7}}, 123.0) == 7.0);
  CHECK(horner(Polynomial{}, 2.0) == 0.0);
}

TEST_CASE("expand factored") {
  FactoredForm a;
  a.linear_roots = {1, -1};
  CHECK(expand_factored(a).coeffs == std::vector<double>{-1, 0, 1});

  FactoredForm b;
  b.scale = 2.0;
  b.quadratic_factors.push_back({0, 1, false});
  CHECK(expand_factored(b).coeffs == std::vector<double>{2, 0, 2});

  FactoredForm g;
  g.linear_roots = {1};
  g.quadratic_factors = {{0, 1, false}, {1.7, 1.2, false}};
  const auto p = expand_factored(g);
  const std::vector<double> expect{-1.2, -0.5, -0.5, 0.5, 0.7, 1.0};
  REQUIRE(p.coeffs.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(p.coeffs[i] == doctest::Approx(expect[i]).epsilon(1e-14).scale(1.0));
}

TEST_CASE("finite differences of simple networks") {
  NetworkSpec lin;
  lin.input_dim = 2;
  lin.layers.push_back(Layer{{ConventionalNeuron{{0.3, -0.2}, 0.1}}, Activation::identity});
  const std::vector<double> x{1.5, -2.0};
  for (double step : {1e-2, 1e-4}) {
    const auto g = finite_diff_grad(lin, x, step).values;
    CHECK(g[0] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(g[1] == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(g[2] == doctest::Approx(1.0).epsilon(1e-10));
  }

  NetworkSpec flat = lin;
  flat.layers.push_back(Layer{{ConventionalNeuron{{0.0}, 3.0}}, Activation::identity});
  flat.masks.assign(neuron_parameter_count(flat), true);
  flat.masks[flat.masks.size() - 1] = false;
  flat.masks[flat.masks.size() - 2] = false;
  for (double v : finite_diff_grad(flat, x, 1e-4).values) CHECK(v == 0.0);

  CHECK_THROWS_AS(finite_diff_grad(lin, x, 0.0), InvalidInput);
}

TEST_CASE("finite differences at two step sizes agree") {
  NetworkSpec net;
  net.input_dim = 2;
  QuadraticNeuron q = QuadraticNeuron::zeros(2);
  q.w_r = {0.4, -0.3};
  q.w_g = {0.2, 0.9};
  q.w_b = {-0.5, 0.1};
  q.b_r = 0.2;
  q.b_g = -0.7;
  q.c = 0.05;
  net.layers.push_back(Layer{{q}, Activation::identity});
  const std::vector<double> x{0.8, -1.1};
  const auto a = finite_diff_grad(net, x, 1e-4).values;
  const auto b = finite_diff_grad(net, x, 1e-5).values;
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-8));
}

TEST_CASE("grid quadrature") {
  const Fn one = [](double) { return 1.0; };
  const Fn zero = [](double) { return 0.0; };
  const Fn id = [](double x) { return x; };
  CHECK(grid_l1(one, one, {0, 1, 11}) == 0.0);
  CHECK(std::abs(grid_l1(one, zero, {0, 1, 1001}) - 1.0) < 1e-9);
  CHECK(grid_sup(id, zero, {0, 1, 2}) == 1.0);
  CHECK(grid_sup(id, id, {0, 1, 50}) == 0.0);
  CHECK_THROWS_AS(grid_l1(one, zero, {0, 1, 1}), InvalidInput);
  CHECK_THROWS_AS(grid_sup(one, zero, {1, 0, 10}), InvalidInput);
}

TEST_CASE("quadrature refinement is consistent for smooth pairs") {
  const Fn f = [](double x) { return std::sin(3 * x) + 2.0; };
  const Fn g = [](double x) { return 0.5 * x * x; };
  for (std::size_t n : {1001u, 4001u}) {
    const double a = grid_l1(f, g, {0, 1.5, n});
    const double b = grid_l1(f, g, {0, 1.5, 2 * n - 1});
    CHECK(std::abs(a - b) < 1e-6);
  }
}

TEST_CASE("grid endpoints") {
  const GridSpec g{-1.0, 0.0, 100};
  CHECK(g.at(0) == -1.0);
  CHECK(g.at(99) == 0.0);
}
