#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "qnn/builders.hpp"
#include "qnn/oracles.hpp"
#include "qnn/radial.hpp"
#include "qnn/serialize.hpp"
#include "qnn/trainer.hpp"

namespace qnn::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// g(x) = (x^2 + 1)(x - 1)(x^2 + 1.7x + 1.2)
const std::vector<double> kFactorTarget{-1.2, -0.5, -0.5, 0.5, 0.7, 1.0};

struct Artifacts {
  RunReport& report;

  std::string path(const std::string& name) const {
    const auto p = (std::filesystem::path(report.run_dir) / name).string();
    report.artifacts.push_back(p);
    return p;
  }
};

RunReport start(const std::string& experiment, const Common& c, nlohmann::json config) {
  RunReport r;
  r.experiment = experiment;
  config["seed"] = c.seed;
  config["svg"] = c.svg;
  config["parallel_restarts"] = c.parallel_restarts;
  r.config = std::move(config);
  r.run_dir = make_run_dir(c.out_dir, experiment);
  return r;
}

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double at_radius(const NetworkSpec& net, double t) {
  std::vector<double> x(net.input_dim, 0.0);
  x[0] = t;
  return forward_scalar(net, x);
}

std::size_t ceil_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

}  // namespace

RunReport run_rings(const Common& c, const RingsOptions& o) {
  if (o.widths.empty()) throw InvalidInput("rings: need at least one width");
  for (auto w : o.widths)
    if (w == 0) throw InvalidInput("rings: widths must be >= 1");
  if (o.restarts < 1) throw InvalidInput("rings: restarts must be >= 1");
  RunReport r = start("rings", c,
                      {{"n_per_class", o.n_per_class}, {"r_inner", o.r_inner}, {"r_outer", o.r_outer},
                       {"noise", o.noise}, {"widths", o.widths}, {"restarts", o.restarts},
                       {"learning_rate", o.learning_rate}, {"iterations", o.iterations},
                       {"grid", o.grid}});
  Artifacts art{r};
  const Dataset data = make_rings_dataset(o.n_per_class, o.r_inner, o.r_outer, o.noise, c.seed);

  TrainConfig cfg;
  cfg.loss = Loss::logistic;
  cfg.learning_rate = o.learning_rate;
  cfg.iterations = o.iterations;

  struct Model {
    std::string kind;
    std::size_t width;
    NetworkSpec net;
  };
  std::vector<Model> models;
  {
    NetworkSpec q;
    q.input_dim = 2;
    q.layers.push_back(Layer{{QuadraticNeuron::zeros(2)}, Activation::identity});
    models.push_back({"quadratic", 1, std::move(q)});
  }
  for (auto w : o.widths)
    models.push_back({"conventional", w, build_hidden_layer_net(2, w, NeuronKind::conventional)});

  std::vector<std::vector<CsvCell>> rows;
  std::vector<NetworkSpec> best_nets;
  for (const auto& m : models) {
    const auto n = static_cast<std::size_t>(o.restarts);
    std::vector<TrainResult> runs(n);
#pragma omp parallel for if (c.parallel_restarts) schedule(static)
    for (std::size_t s = 0; s < n; ++s) {
      TrainConfig local = cfg;
      local.seed = c.seed + s;
      runs[s] = train(m.net, data, local);
    }
    int perfect = 0;
    double best_acc = -1.0;
    std::size_t best = 0;
    for (std::size_t s = 0; s < n; ++s) {
      const double acc = accuracy(runs[s].net, data);
      perfect += acc == 1.0;
      if (acc > best_acc) {
        best_acc = acc;
        best = s;
      }
      rows.push_back({m.kind, static_cast<double>(m.width), static_cast<double>(s), acc,
                      runs[s].final_loss});
    }
    const std::string key = m.kind == "quadratic" ? "quadratic" : "conv_w" + std::to_string(m.width);
    r.metrics[key + "_best_accuracy"] = best_acc;
    r.metrics[key + "_perfect_restarts"] = perfect;
    best_nets.push_back(runs[best].net);
  }
  write_csv(art.path("accuracy.csv"), {"kind", "width", "restart", "accuracy", "final_loss"}, rows);

  const double lim = o.r_outer + o.noise + 0.5;
  std::vector<std::string> header{"x", "y"};
  for (const auto& m : models)
    header.push_back(m.kind == "quadratic" ? "quadratic" : "conv_w" + std::to_string(m.width));
  std::vector<std::vector<CsvCell>> grid_rows;
  std::vector<std::vector<double>> fields(models.size());
  for (std::size_t i = 0; i < o.grid; ++i) {
    for (std::size_t j = 0; j < o.grid; ++j) {
      const double x = -lim + 2.0 * lim * (static_cast<double>(j) + 0.5) / static_cast<double>(o.grid);
      const double y = -lim + 2.0 * lim * (static_cast<double>(i) + 0.5) / static_cast<double>(o.grid);
      std::vector<CsvCell> row{x, y};
      for (std::size_t k = 0; k < models.size(); ++k) {
        const double v = forward_scalar(best_nets[k], std::vector<double>{x, y});
        row.emplace_back(v);
        fields[k].push_back(v);
      }
      grid_rows.push_back(std::move(row));
    }
  }
  write_csv(art.path("decision_grid.csv"), header, grid_rows);
  write_json_file(art.path("quadratic_net.json"), to_json(best_nets.front()));

  if (c.svg) {
    std::vector<ScatterPoint> pts;
    for (std::size_t i = 0; i < data.size(); ++i)
      pts.push_back({data.inputs[i][0], data.inputs[i][1], data.targets[i] > 0 ? 1 : -1});
    for (std::size_t k = 0; k < models.size(); ++k) {
      write_svg_sign_map(art.path("boundary_" + header[k + 2] + ".svg"),
                         header[k + 2] + " (best restart)", -lim, lim, o.grid, fields[k], pts);
    }
  }
  return r;
}

RunReport run_radial_deep(const Common& c, const RadialDeepOptions& o) {
  if (o.deltas.empty()) throw InvalidInput("radial-deep: need at least one delta");
  if (o.grid < 2) throw InvalidInput("radial-deep: grid must be >= 2");
  RunReport r = start("radial-deep", c, {{"deltas", o.deltas}, {"grid", o.grid}});
  Artifacts art{r};
  const double hi = 10.0 * std::sqrt(2.0);
  const std::vector<double> breaks{0.0, std::sqrt(200.0 / 3.0), std::sqrt(400.0 / 3.0), hi};
  const std::vector<double> heights{-1.0, 1.0, -1.0};
  const auto f = [](double t) {
    return std::cos(3.0 * std::numbers::pi / 200.0 * t * t + std::numbers::pi / 2.0);
  };

  std::vector<std::vector<CsvCell>> bp;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    bp.push_back({static_cast<double>(i), breaks[i], breaks[i] * breaks[i],
                  i < heights.size() ? heights[i] : 0.0});
  }
  write_csv(art.path("breakpoints.csv"), {"index", "a", "a_squared", "height"}, bp);

  std::vector<NetworkSpec> nets;
  std::vector<std::vector<CsvCell>> l1_rows;
  const oracles::GridSpec support{0.0, hi, o.grid};
  double prev = kNaN;
  double ratio_sum = 0.0;
  for (double delta : o.deltas) {
    const RadialPartition part{breaks, heights, delta};
    nets.push_back(build_deep_radial(part, 2));
    const auto& net = nets.back();
    const auto F = [&](double t) { return at_radius(net, t); };
    const double e_steps = oracles::grid_l1(F, [&](double t) { return partition_target(part, t); }, support);
    const double e_cos = oracles::grid_l1(F, f, support);
    l1_rows.push_back({delta, e_steps, e_cos});
    r.metrics["l1_steps_delta_" + tag(delta)] = e_steps;
    r.metrics["l1_cos_delta_" + tag(delta)] = e_cos;
    if (std::isfinite(prev)) ratio_sum += e_steps / prev;
    prev = e_steps;
  }
  if (o.deltas.size() > 1) r.metrics["mean_refinement_ratio"] = ratio_sum / static_cast<double>(o.deltas.size() - 1);
  write_csv(art.path("l1_error.csv"), {"delta", "l1_vs_steps", "l1_vs_cos"}, l1_rows);

  const double outside = hi + 1.0;
  std::vector<std::string> header{"t", "f", "steps"};
  for (double d : o.deltas) header.push_back("F_delta_" + tag(d));
  std::vector<std::vector<CsvCell>> curve;
  std::vector<Series> series{{"f", {}, {}}};
  for (double d : o.deltas) series.push_back({"F delta=" + tag(d), {}, {}});
  const RadialPartition steps{breaks, heights, o.deltas.front()};
  for (std::size_t i = 0; i < o.grid; ++i) {
    const double t = outside * static_cast<double>(i) / static_cast<double>(o.grid - 1);
    std::vector<CsvCell> row{t, f(t), partition_target(steps, t)};
    series[0].x.push_back(t);
    series[0].y.push_back(t <= hi ? f(t) : 0.0);
    for (std::size_t k = 0; k < nets.size(); ++k) {
      const double v = at_radius(nets[k], t);
      row.emplace_back(v);
      series[k + 1].x.push_back(t);
      series[k + 1].y.push_back(v);
    }
    curve.push_back(std::move(row));
  }
  write_csv(art.path("curve.csv"), header, curve);
  write_json_file(art.path("network.json"), to_json(nets.back()));
  if (c.svg) write_svg_lines(art.path("curve.svg"), "radial approximation", "t = ||x||", "value", series);

  r.metrics["depth"] = static_cast<double>(nets.back().depth());
  r.metrics["module_layers"] = static_cast<double>(nets.back().depth() - 2);
  r.metrics["max_width"] = static_cast<double>(nets.back().max_width());
  r.metrics["output_outside_support"] = at_radius(nets.back(), outside);
  r.metrics["plateau_value_piece1"] = at_radius(nets.back(), std::sqrt(100.0 / 3.0));
  return r;
}

RunReport run_poly(const Common& c, const PolyOptions& o) {
  const Polynomial p = Polynomial{o.coeffs}.trimmed();
  if (p.degree() < 1) throw InvalidInput("poly: need a polynomial of degree >= 1");
  if (!(o.lo < o.hi)) throw InvalidInput("poly: need lo < hi");
  RunReport r = start("poly", c,
                      {{"coeffs", o.coeffs}, {"points", o.points}, {"lo", o.lo}, {"hi", o.hi},
                       {"pair_real_roots", o.pair_real_roots}, {"oracle", o.oracle}});
  Artifacts art{r};
  r.metrics["degree"] = p.degree();
  FactorOptions fo;
  fo.pair_real_roots = o.pair_real_roots;
  FactoredForm ff;
  try {
    ff = factor_polynomial(p, fo);
  } catch (const FactorizationError& e) {
    r.metrics["residual"] = e.residual();
    r.metrics["max_rel_error"] = kNaN;
    return r;
  }
  write_json_file(art.path("factored.json"), to_json(ff));
  const auto net = build_poly_net(ff);
  write_json_file(art.path("network.json"), to_json(net));

  r.metrics["linear_factors"] = static_cast<double>(ff.linear_roots.size());
  r.metrics["quadratic_factors"] = static_cast<double>(ff.quadratic_factors.size());
  r.metrics["depth"] = static_cast<double>(net.depth());
  r.metrics["depth_bound"] = static_cast<double>(ceil_log2(ff.factor_count()) + 1);
  r.metrics["width"] = static_cast<double>(net.max_width());
  r.metrics["width_bound"] = p.degree();
  r.metrics["residual"] = relative_coefficient_error(oracles::expand_factored(ff), p);

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> xs(o.lo, o.hi);
  double worst = 0.0;
  std::vector<std::vector<CsvCell>> rows;
  for (std::size_t i = 0; i < o.points; ++i) {
    const double x = xs(rng);
    const double h = oracles::horner(p, x);
    const double y = forward_scalar(net, std::vector<double>{x});
    const double e = std::abs(y - h) / (1.0 + std::abs(h));
    worst = std::max(worst, e);
    if (o.oracle) rows.push_back({x, h, y, e});
  }
  r.metrics["max_rel_error"] = worst;
  if (o.oracle) write_csv(art.path("oracle_points.csv"), {"x", "horner", "network", "rel_error"}, rows);
  return r;
}

RunReport run_factor_train(const Common& c, const FactorTrainOptions& o) {
  if (o.reduction != "sum" && o.reduction != "mean") {
    throw InvalidInput("factor-train: reduction must be sum or mean");
  }
  RunReport r = start("factor-train", c,
                      {{"samples", o.samples}, {"lo", o.lo}, {"hi", o.hi},
                       {"learning_rate", o.learning_rate}, {"iterations", o.iterations},
                       {"restarts", o.restarts}, {"init_scale", o.init_scale},
                       {"reduction", o.reduction}, {"grid", o.grid},
                       {"target", kFactorTarget}});
  Artifacts art{r};
  const Polynomial g{kFactorTarget};
  const auto exact = factor_polynomial(g);
  const auto l1 = static_cast<int>(exact.linear_roots.size());
  const auto l2 = static_cast<int>(exact.quadratic_factors.size());
  const Dataset data = make_poly_dataset(g, o.lo, o.hi, o.samples);
  const auto net = build_factorization_trainable(g.degree(), l1, l2);

  TrainConfig cfg;
  cfg.reduction = o.reduction == "sum" ? Reduction::sum : Reduction::mean;
  cfg.learning_rate = o.learning_rate;
  cfg.iterations = o.iterations;
  cfg.restarts = o.restarts;
  cfg.init_scale = o.init_scale;
  cfg.seed = c.seed;
  cfg.parallel_restarts = c.parallel_restarts;
  validate(cfg);

  TrainResult res;
  try {
    res = train(net, data, cfg);
  } catch (const TrainingFailed&) {
    r.metrics["mean_abs_error"] = kNaN;
    r.metrics["diverged_restarts"] = o.restarts;
    return r;
  }

  std::vector<std::vector<CsvCell>> rs;
  int diverged = 0;
  for (std::size_t i = 0; i < res.restarts.size(); ++i) {
    const auto& ro = res.restarts[i];
    diverged += ro.diverged;
    rs.push_back({static_cast<double>(i), std::to_string(ro.seed), ro.diverged ? 1.0 : 0.0,
                  static_cast<double>(ro.diverged_at), ro.final_loss});
  }
  write_csv(art.path("restarts.csv"), {"restart", "seed", "diverged", "diverged_at", "final_loss"}, rs);

  std::vector<std::vector<CsvCell>> hist;
  for (std::size_t i = 0; i < res.loss_history.size(); ++i)
    hist.push_back({static_cast<double>(i), res.loss_history[i]});
  write_csv(art.path("loss.csv"), {"iteration", "loss"}, hist);

  const auto eval = [&](double x) { return forward_scalar(res.net, std::vector<double>{x}); };
  std::vector<std::vector<CsvCell>> fit;
  Series target{"g", {}, {}}, learned{"network", {}, {}};
  const oracles::GridSpec grid{o.lo, o.hi, o.grid};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.at(i);
    fit.push_back({x, oracles::horner(g, x), eval(x)});
    target.x.push_back(x);
    target.y.push_back(oracles::horner(g, x));
    learned.x.push_back(x);
    learned.y.push_back(eval(x));
  }
  write_csv(art.path("fit.csv"), {"x", "target", "network"}, fit);

  nlohmann::json learned_json;
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& n : res.net.layers.front().neurons)
    factors.push_back(neuron_polynomial(std::get<QuadraticNeuron>(n)).coeffs);
  learned_json["factors"] = factors;
  const auto& out = std::get<ConventionalNeuron>(res.net.layers.back().neurons.front());
  learned_json["output_weight"] = out.w.front();
  learned_json["output_bias"] = out.b;
  nlohmann::json sc = nlohmann::json::array();
  for (const auto& s : res.net.shortcuts)
    sc.push_back({{"from", {s.from.layer, s.from.neuron}}, {"weight", s.weight}});
  learned_json["shortcuts"] = sc;
  write_json_file(art.path("learned.json"), learned_json);
  write_json_file(art.path("network.json"), to_json(res.net));
  if (c.svg) {
    write_svg_lines(art.path("fit.svg"), "factorization fit", "x", "value", {target, learned});
    Series loss{"loss", {}, {}};
    for (std::size_t i = 0; i < res.loss_history.size(); ++i) {
      loss.x.push_back(static_cast<double>(i));
      loss.y.push_back(res.loss_history[i]);
    }
    write_svg_lines(art.path("loss.svg"), "training loss (best restart)", "iteration", "loss", {loss}, true);
  }

  r.metrics["mean_abs_error"] = mean_absolute_error(res.net, data);
  r.metrics["grid_sup_error"] = oracles::grid_sup(eval, [&](double x) { return oracles::horner(g, x); }, grid);
  r.metrics["final_loss"] = res.final_loss;
  r.metrics["best_restart"] = static_cast<double>(res.best_restart);
  r.metrics["diverged_restarts"] = diverged;
  return r;
}

RunReport run_bernstein(const Common& c, const BernsteinOptions& o) {
  std::function<double(double)> f;
  if (o.function == "x") {
    f = [](double x) { return x; };
  } else if (o.function == "x2") {
    f = [](double x) { return x * x; };
  } else if (o.function == "abs-half") {
    f = [](double x) { return std::abs(x - 0.5); };
  } else if (o.function == "sqrt") {
    f = [](double x) { return std::sqrt(x); };
  } else {
    throw InvalidInput("bernstein: unknown function '" + o.function + "'");
  }
  if (o.degrees.empty()) throw InvalidInput("bernstein: need at least one degree");
  for (int n : o.degrees)
    if (n < 1) throw InvalidInput("bernstein: degrees must be >= 1");
  RunReport r = start("bernstein", c, {{"function", o.function}, {"degrees", o.degrees}, {"grid", o.grid}});
  Artifacts art{r};
  const oracles::GridSpec grid{0.0, 1.0, o.grid};

  std::vector<std::vector<CsvCell>> rows;
  Series err{"sup error", {}, {}};
  int built = 0;
  for (int n : o.degrees) {
    const double e = oracles::grid_sup([&](double x) { return bernstein_eval(f, n, x); }, f, grid);
    r.metrics["sup_error_n" + std::to_string(n)] = e;
    err.x.push_back(n);
    err.y.push_back(e);

    // Network through the factorization pipeline; high degrees can fail
    // because the monomial coefficients are too ill-conditioned.
    double net_err = kNaN;
    double depth = kNaN;
    const auto p = bernstein_coeffs(f, n).trimmed();
    if (p.degree() >= 1) {
      try {
        const auto net = build_poly_net(factor_polynomial(p));
        net_err = oracles::grid_sup([&](double x) { return forward_scalar(net, std::vector<double>{x}); },
                                    [&](double x) { return bernstein_eval(f, n, x); }, grid);
        depth = static_cast<double>(net.depth());
        ++built;
      } catch (const FactorizationError&) {
      }
    }
    rows.push_back({static_cast<double>(n), e, net_err, depth});
  }
  r.metrics["networks_built"] = built;
  write_csv(art.path("sup_error.csv"), {"n", "sup_error", "network_vs_bernstein", "network_depth"}, rows);
  if (c.svg) write_svg_lines(art.path("sup_error.svg"), "Bernstein sup error", "n", "sup error", {err}, true);
  return r;
}

RunReport run_width_sweep(const Common& c, const WidthSweepOptions& o) {
  if (o.dims.empty() || o.widths.empty()) throw InvalidInput("width-sweep: need dims and widths");
  for (auto w : o.widths)
    if (w == 0) throw InvalidInput("width-sweep: widths must be >= 1");
  for (auto d : o.dims)
    if (d == 0) throw InvalidInput("width-sweep: dims must be >= 1");
  if (o.seeds < 1) throw InvalidInput("width-sweep: seeds must be >= 1");
  RunReport r = start("width-sweep", c,
                      {{"dims", o.dims}, {"widths", o.widths}, {"seeds", o.seeds},
                       {"samples", o.samples}, {"annuli", o.annuli},
                       {"learning_rate", o.learning_rate}, {"iterations", o.iterations},
                       {"restarts", o.restarts}});
  Artifacts art{r};
  TrainConfig cfg;
  cfg.learning_rate = o.learning_rate;
  cfg.iterations = o.iterations;
  cfg.restarts = o.restarts;
  cfg.parallel_restarts = c.parallel_restarts;
  validate(cfg);

  std::vector<std::vector<CsvCell>> rows;
  std::vector<std::vector<CsvCell>> summary;
  std::vector<Series> series;
  for (auto d : o.dims) {
    Series sq{"quadratic d=" + std::to_string(d), {}, {}};
    Series sc{"conventional d=" + std::to_string(d), {}, {}};
    for (auto w : o.widths) {
      double mq = 0.0, mc = 0.0;
      int wins = 0;
      for (int s = 0; s < o.seeds; ++s) {
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(s);
        const auto target = make_random_annuli(o.annuli, 1.0, seed);
        const auto data = make_annuli_dataset(target, d, o.samples, restart_seed(seed, 1000));
        TrainConfig local = cfg;
        local.seed = seed;
        const double q = train(build_hidden_layer_net(d, w, NeuronKind::quadratic), data, local).final_loss;
        const double cv = train(build_hidden_layer_net(d, w, NeuronKind::conventional), data, local).final_loss;
        rows.push_back({static_cast<double>(d), static_cast<double>(w), static_cast<double>(seed), q, cv});
        mq += q;
        mc += cv;
        wins += q < cv;
      }
      mq /= o.seeds;
      mc /= o.seeds;
      summary.push_back({static_cast<double>(d), static_cast<double>(w), mq, mc, static_cast<double>(wins)});
      const std::string key = "d" + std::to_string(d) + "_w" + std::to_string(w);
      r.metrics[key + "_mean_mse_quadratic"] = mq;
      r.metrics[key + "_mean_mse_conventional"] = mc;
      r.metrics[key + "_quadratic_wins"] = wins;
      sq.x.push_back(static_cast<double>(w));
      sq.y.push_back(mq);
      sc.x.push_back(static_cast<double>(w));
      sc.y.push_back(mc);
    }
    series.push_back(std::move(sq));
    series.push_back(std::move(sc));
  }
  write_csv(art.path("width_mse.csv"), {"dim", "width", "seed", "mse_quadratic", "mse_conventional"}, rows);
  write_csv(art.path("summary.csv"), {"dim", "width", "mean_mse_quadratic", "mean_mse_conventional", "quadratic_wins"},
            summary);
  if (c.svg) write_svg_lines(art.path("width_mse.svg"), "width sweep", "width", "mean mse", series, true);
  return r;
}

}  // namespace qnn::cli
