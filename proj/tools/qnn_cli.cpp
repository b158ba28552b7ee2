// qnn: experiment harness for quadratic networks.
//
//   qnn rings | radial-deep | poly | factor-train | bernstein | width-sweep
//
// Every run writes its artifacts and a report.json into a fresh timestamped
// directory under --out-dir (default $QNN_OUT_DIR, then ./runs). The exit
// status is 0 only when every reported metric is finite.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "qnn/core.hpp"
#include "qnn/serialize.hpp"

namespace {

constexpr int kExitMetrics = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace qnn::cli;

  CLI::App app{"Quadratic network experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--seed", common.seed, "Base random seed");
  app.add_option("--out-dir", common.out_dir, "Output root (default $QNN_OUT_DIR or ./runs)");
  app.add_flag("--svg", common.svg, "Also emit SVG plots");
  app.add_flag("--parallel-restarts", common.parallel_restarts, "Run restarts in parallel");

  std::function<RunReport()> job;

  RingsOptions rings;
  auto* rc = app.add_subcommand("rings", "Two concentric rings: one quadratic neuron vs conventional widths");
  rc->add_option("--n-per-class", rings.n_per_class)->check(CLI::PositiveNumber);
  rc->add_option("--r-inner", rings.r_inner);
  rc->add_option("--r-outer", rings.r_outer);
  rc->add_option("--noise", rings.noise)->check(CLI::NonNegativeNumber);
  rc->add_option("--widths", rings.widths)->check(CLI::PositiveNumber);
  rc->add_option("--restarts", rings.restarts)->check(CLI::PositiveNumber);
  rc->add_option("--lr", rings.learning_rate)->check(CLI::PositiveNumber);
  rc->add_option("--iterations", rings.iterations)->check(CLI::PositiveNumber);
  rc->add_option("--grid", rings.grid, "Decision grid points per axis")->check(CLI::Range(2, 1000));
  rc->callback([&] { job = [&] { return run_rings(common, rings); }; });

  RadialDeepOptions radial;
  auto* dc = app.add_subcommand("radial-deep", "Three-module deep radial network for the cosine example");
  dc->add_option("--delta", radial.deltas, "Ramp fractions to sweep")->check(CLI::Range(1e-9, 0.499999));
  dc->add_option("--grid", radial.grid)->check(CLI::Range(2, 10000000));
  dc->callback([&] { job = [&] { return run_radial_deep(common, radial); }; });

  PolyOptions poly;
  auto* pc = app.add_subcommand("poly", "Exact product-tree network for a univariate polynomial");
  pc->add_option("--coeffs", poly.coeffs, "Coefficients, lowest degree first")->required();
  pc->add_option("--points", poly.points)->check(CLI::PositiveNumber);
  pc->add_option("--lo", poly.lo);
  pc->add_option("--hi", poly.hi);
  pc->add_flag("--pair-real-roots", poly.pair_real_roots);
  pc->add_flag("--oracle", poly.oracle, "Write the per-point Horner cross-check");
  pc->callback([&] { job = [&] { return run_poly(common, poly); }; });

  FactorTrainOptions ft;
  auto* fc = app.add_subcommand("factor-train", "Train the shortcut factorization network on g");
  fc->add_option("--samples", ft.samples)->check(CLI::Range(2, 10000000));
  fc->add_option("--lr", ft.learning_rate)->check(CLI::PositiveNumber);
  fc->add_option("--iterations", ft.iterations)->check(CLI::PositiveNumber);
  fc->add_option("--restarts", ft.restarts)->check(CLI::PositiveNumber);
  fc->add_option("--init-scale", ft.init_scale)->check(CLI::NonNegativeNumber);
  fc->add_option("--reduction", ft.reduction)->check(CLI::IsMember({"sum", "mean"}));
  fc->add_option("--grid", ft.grid)->check(CLI::Range(2, 10000000));
  fc->callback([&] { job = [&] { return run_factor_train(common, ft); }; });

  BernsteinOptions bern;
  auto* bc = app.add_subcommand("bernstein", "Bernstein approximation error sweep");
  bc->add_option("--function", bern.function)->check(CLI::IsMember({"x", "x2", "abs-half", "sqrt"}));
  bc->add_option("--n", bern.degrees)->check(CLI::PositiveNumber);
  bc->add_option("--grid", bern.grid)->check(CLI::Range(2, 10000000));
  bc->callback([&] { job = [&] { return run_bernstein(common, bern); }; });

  WidthSweepOptions ws;
  auto* wc = app.add_subcommand("width-sweep", "Quadratic vs conventional one-hidden-layer nets on annuli");
  wc->add_option("--dims", ws.dims)->check(CLI::PositiveNumber);
  wc->add_option("--widths", ws.widths)->check(CLI::PositiveNumber);
  wc->add_option("--seeds", ws.seeds)->check(CLI::PositiveNumber);
  wc->add_option("--samples", ws.samples)->check(CLI::PositiveNumber);
  wc->add_option("--annuli", ws.annuli)->check(CLI::PositiveNumber);
  wc->add_option("--lr", ws.learning_rate)->check(CLI::PositiveNumber);
  wc->add_option("--iterations", ws.iterations)->check(CLI::PositiveNumber);
  wc->add_option("--restarts", ws.restarts)->check(CLI::PositiveNumber);
  wc->callback([&] { job = [&] { return run_width_sweep(common, ws); }; });

  CLI11_PARSE(app, argc, argv);

  try {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport report = job();
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string path = report.run_dir + "/report.json";
    report.artifacts.push_back(path);
    qnn::write_json_file(path, report.to_json());
    for (const auto& [k, v] : report.metrics) std::printf("%-36s %.12g\n", k.c_str(), v);
    std::printf("report: %s\n", path.c_str());
    if (!report.all_metrics_finite()) {
      std::fprintf(stderr, "error: some metrics are not finite\n");
      return kExitMetrics;
    }
    return 0;
  } catch (const qnn::InvalidInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
