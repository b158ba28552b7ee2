#include "qnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qnn/core.hpp"

namespace qnn {

void validate(const Dataset& data) {
  if (data.inputs.empty()) throw InvalidInput("dataset is empty");
  if (data.inputs.size() != data.targets.size()) {
    throw InvalidInput("dataset: " + std::to_string(data.inputs.size()) + " inputs but " +
                       std::to_string(data.targets.size()) + " targets");
  }
  const std::size_t d = data.input_dim();
  if (d == 0) throw InvalidInput("dataset: inputs have zero dimension");
  for (const auto& x : data.inputs)
    if (x.size() != d) throw InvalidInput("dataset: inconsistent input dimension");
}

Dataset make_rings_dataset(std::size_t n_per_class, double r_inner,
                           double r_outer, double noise, std::uint64_t seed) {
  if (n_per_class < 1) throw InvalidInput("rings: n_per_class must be >= 1");
  if (!(r_inner > 0.0 && r_inner < r_outer)) {
    throw InvalidInput("rings: need 0 < r_inner < r_outer");
  }
  if (!(noise >= 0.0)) throw InvalidInput("rings: noise must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  Dataset d;
  for (const auto& [radius, label] : {std::pair{r_inner, 1.0}, std::pair{r_outer, -1.0}}) {
    for (std::size_t i = 0; i < n_per_class; ++i) {
      const double theta = angle(rng);
      const double j = jitter(rng);
      const double r = noise == 0.0 ? radius : radius + noise * j;
      d.inputs.push_back({r * std::cos(theta), r * std::sin(theta)});
      d.targets.push_back(label);
    }
  }
  return d;
}

Dataset make_poly_dataset(const Polynomial& p, double lo, double hi,
                          std::size_t n) {
  if (!(lo < hi)) throw InvalidInput("poly dataset: need lo < hi");
  if (n < 2) throw InvalidInput("poly dataset: need n >= 2");
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i + 1 == n ? hi
                                : lo + (hi - lo) * static_cast<double>(i) /
                                           static_cast<double>(n - 1);
    double y = 0.0;
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) y = y * x + *it;
    d.inputs.push_back({x});
    d.targets.push_back(y);
  }
  return d;
}

double AnnuliTarget::operator()(double t) const {
  for (std::size_t i = 0; i < signs.size(); ++i)
    if (t >= edges[2 * i] && t < edges[2 * i + 1]) return signs[i];
  return 0.0;
}

AnnuliTarget make_random_annuli(std::size_t count, double radius,
                                std::uint64_t seed) {
  if (count < 1) throw InvalidInput("annuli: count must be >= 1");
  if (!(radius > 0.0)) throw InvalidInput("annuli: radius must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  AnnuliTarget t;
  t.radius = radius;
  t.edges.resize(2 * count);
  for (auto& e : t.edges) e = radius * u(rng);
  std::sort(t.edges.begin(), t.edges.end());
  for (std::size_t i = 0; i < count; ++i) t.signs.push_back(u(rng) < 0.5 ? -1.0 : 1.0);
  return t;
}

Dataset make_annuli_dataset(const AnnuliTarget& target, std::size_t dim,
                            std::size_t n, std::uint64_t seed) {
  if (dim < 1) throw InvalidInput("annuli dataset: dim must be >= 1");
  if (n < 1) throw InvalidInput("annuli dataset: n must be >= 1");
  if (target.edges.size() != 2 * target.signs.size()) {
    throw InvalidInput("annuli dataset: need two edges per sign");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(dim);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : x) {
        v = gauss(rng);
        norm += v * v;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    const double r = target.radius * std::pow(u(rng), 1.0 / static_cast<double>(dim));
    for (auto& v : x) v *= r / norm;
    d.inputs.push_back(std::move(x));
    d.targets.push_back(target(r));
  }
  return d;
}

}  // namespace qnn
