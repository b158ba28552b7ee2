#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "report.hpp"

namespace qnn::cli {

struct Common {
  std::uint64_t seed = 0;
  std::string out_dir;
  bool svg = false;
  bool parallel_restarts = false;
};

struct RingsOptions {
  std::size_t n_per_class = 60;
  double r_inner = 1.0;
  double r_outer = 2.0;
  double noise = 0.1;
  std::vector<std::size_t> widths{1, 2, 4, 6};
  int restarts = 5;
  double learning_rate = 0.1;
  int iterations = 3000;
  std::size_t grid = 81;
};

struct RadialDeepOptions {
  std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
  std::size_t grid = 4001;
};

struct PolyOptions {
  std::vector<double> coeffs;
  std::size_t points = 1000;
  double lo = -2.0;
  double hi = 2.0;
  bool pair_real_roots = false;
  bool oracle = false;
};

struct FactorTrainOptions {
  std::size_t samples = 100;
  double lo = -1.0;
  double hi = 0.0;
  double learning_rate = 2.0e-3;
  int iterations = 600;
  int restarts = 10;
  double init_scale = 0.7;
  std::string reduction = "sum";
  std::size_t grid = 1000;
};

struct BernsteinOptions {
  std::string function = "abs-half";
  std::vector<int> degrees{4, 8, 16, 32, 64};
  std::size_t grid = 2001;
};

struct WidthSweepOptions {
  std::vector<std::size_t> dims{2, 4};
  std::vector<std::size_t> widths{1, 2, 4, 8, 16, 32};
  int seeds = 5;
  std::size_t samples = 500;
  std::size_t annuli = 3;
  double learning_rate = 0.1;
  int iterations = 3000;
  int restarts = 3;
};

RunReport run_rings(const Common& c, const RingsOptions& o);
RunReport run_radial_deep(const Common& c, const RadialDeepOptions& o);
RunReport run_poly(const Common& c, const PolyOptions& o);
RunReport run_factor_train(const Common& c, const FactorTrainOptions& o);
RunReport run_bernstein(const Common& c, const BernsteinOptions& o);
RunReport run_width_sweep(const Common& c, const WidthSweepOptions& o);

}  // namespace qnn::cli
