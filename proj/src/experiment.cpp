#include "minimax/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "nlohmann/json.hpp"

#include "minimax/errors.hpp"
#include "minimax/games.hpp"
#include "minimax/io.hpp"

namespace minimax {
namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& path, const char* key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError(path + "." + key, "expected a number");
  return j[key].get<double>();
}

std::int64_t get_int(const json& j, const std::string& path, const char* key,
                     std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw ConfigError(path + "." + key, "expected an integer");
  return j[key].get<std::int64_t>();
}

DenseMatrix parse_matrix(const json& j, const std::string& path) {
  if (j.is_number()) {
    DenseMatrix m(1, 1);
    m(0, 0) = j.get<double>();
    return m;
  }
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ConfigError(path, "expected a scalar or a matrix (array of rows)");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ConfigError(path, "ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw ConfigError(path, "non-numeric entry");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

Vec parse_vector(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(path, "non-numeric entry");
    v.push_back(e.get<double>());
  }
  return v;
}

// |V(p)| guards for the contraction fit: below the floor the error is about
// to underflow, above the ceiling the iteration has blown up.
constexpr double kVNormFloor = 1e-200;
constexpr double kVNormCeil = 1e100;

}  // namespace

GamePtr make_game(const std::string& id, const std::string& params_json) {
  json params;
  try {
    params = json::parse(params_json);
  } catch (const json::parse_error& e) {
    throw ConfigError("game.params", e.what());
  }
  if (!params.is_object())
    throw ConfigError("game.params", "expected a JSON object");

  try {
    if (id == "bilinear") {
      if (!params.contains("b"))
        throw ConfigError("game.params.b", "bilinear game needs b");
      return bilinear_game(parse_matrix(params["b"], "game.params.b"));
    }
    if (id == "quadratic") {
      if (!params.contains("a_xx") || !params.contains("a_yy") ||
          !params.contains("b"))
        throw ConfigError("game.params", "quadratic game needs a_xx, a_yy, b");
      DenseMatrix axx = parse_matrix(params["a_xx"], "game.params.a_xx");
      DenseMatrix ayy = parse_matrix(params["a_yy"], "game.params.a_yy");
      DenseMatrix b = parse_matrix(params["b"], "game.params.b");
      Vec bx, by;
      if (params.contains("b_x")) bx = parse_vector(params["b_x"], "game.params.b_x");
      if (params.contains("b_y")) by = parse_vector(params["b_y"], "game.params.b_y");
      return quadratic_game(std::move(axx), std::move(ayy), std::move(b),
                            std::move(bx), std::move(by));
    }
    if (id == "dirac") return dirac_gan_game();
    if (id == "mlp") {
      MlpGanConfig cfg;
      cfg.seed = static_cast<std::uint64_t>(
          get_int(params, "game.params", "seed", static_cast<std::int64_t>(cfg.seed)));
      cfg.hidden = static_cast<int>(
          get_int(params, "game.params", "hidden", cfg.hidden));
      cfg.batch = static_cast<int>(get_int(params, "game.params", "batch", cfg.batch));
      cfg.mode_sigma = get_number(params, "game.params", "sigma", cfg.mode_sigma);
      if (params.contains("modes")) {
        if (!params["modes"].is_array() || params["modes"].empty())
          throw ConfigError("game.params.modes", "expected a non-empty array");
        cfg.modes.clear();
        for (const auto& m : params["modes"]) {
          if (!m.is_array() || m.size() != 2)
            throw ConfigError("game.params.modes", "each mode is [x, y]");
          cfg.modes.push_back({m[0].get<double>(), m[1].get<double>()});
        }
      }
      if (params.contains("gen_loss")) {
        const std::string gl = params["gen_loss"].get<std::string>();
        if (gl == "zero_sum")
          cfg.gen_loss = MlpGanConfig::GenLoss::kZeroSum;
        else if (gl == "non_saturating")
          cfg.gen_loss = MlpGanConfig::GenLoss::kNonSaturating;
        else
          throw ConfigError("game.params.gen_loss",
                            "expected zero_sum or non_saturating");
      }
      return mlp_gan_game(cfg);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("game.params", e.what());
  }
  throw ConfigError("game.id", "unknown game '" + id +
                                   "' (known: bilinear, quadratic, dirac, mlp)");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  ExperimentConfig cfg;

  if (j.contains("game")) {
    const json& g = j["game"];
    if (!g.is_object()) throw ConfigError("game", "expected an object");
    if (g.contains("id")) {
      if (!g["id"].is_string()) throw ConfigError("game.id", "expected a string");
      cfg.game_id = g["id"].get<std::string>();
    }
    if (g.contains("params")) {
      if (!g["params"].is_object())
        throw ConfigError("game.params", "expected an object");
      cfg.game_params = g["params"].dump();
    }
  }

  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    if (!o.is_object()) throw ConfigError("optimizer", "expected an object");
    Rule rule = Rule::kGda;
    if (o.contains("rule")) {
      if (!o["rule"].is_string())
        throw ConfigError("optimizer.rule", "expected a string");
      const auto parsed = rule_from_name(o["rule"].get<std::string>());
      if (!parsed)
        throw ConfigError("optimizer.rule",
                          "unknown rule '" + o["rule"].get<std::string>() + "'");
      rule = *parsed;
    }
    cfg.opt = OptimizerConfig::defaults(rule);
    cfg.opt.alpha = get_number(o, "optimizer", "alpha", cfg.opt.alpha);
    cfg.opt.beta1 = get_number(o, "optimizer", "beta1", cfg.opt.beta1);
    cfg.opt.beta2 = get_number(o, "optimizer", "beta2", cfg.opt.beta2);
    cfg.opt.gamma = get_number(o, "optimizer", "gamma", cfg.opt.gamma);
    cfg.opt.eta = get_number(o, "optimizer", "eta", cfg.opt.eta);
    cfg.opt.eps = get_number(o, "optimizer", "eps", cfg.opt.eps);
    cfg.opt.cg_tol = get_number(o, "optimizer", "cg_tol", cfg.opt.cg_tol);
    cfg.opt.cg_max_iter = static_cast<std::size_t>(get_int(
        o, "optimizer", "cg_max_iter",
        static_cast<std::int64_t>(cfg.opt.cg_max_iter)));
  }

  if (j.contains("init")) {
    const json& in = j["init"];
    if (!in.is_object()) throw ConfigError("init", "expected an object");
    if (in.contains("point")) cfg.init.point = parse_vector(in["point"], "init.point");
    if (in.contains("seed"))
      cfg.init.seed = static_cast<std::uint64_t>(get_int(in, "init", "seed", 0));
    cfg.init.scale = get_number(in, "init", "scale", cfg.init.scale);
  }

  cfg.max_steps = static_cast<std::size_t>(
      get_int(j, "config", "max_steps", static_cast<std::int64_t>(cfg.max_steps)));
  cfg.record_every = static_cast<std::size_t>(get_int(
      j, "config", "record_every", static_cast<std::int64_t>(cfg.record_every)));
  cfg.convergence_threshold = get_number(j, "config", "convergence_threshold",
                                         cfg.convergence_threshold);
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string())
      throw ConfigError("output_dir", "expected a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  cfg.seed = static_cast<std::uint64_t>(
      get_int(j, "config", "seed", static_cast<std::int64_t>(cfg.seed)));

  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (max_steps < 1) throw ConfigError("max_steps", "must be >= 1");
  if (record_every < 1) throw ConfigError("record_every", "must be >= 1");
  if (!(convergence_threshold > 0.0))
    throw ConfigError("convergence_threshold", "must be > 0");
  try {
    opt.validate();
  } catch (const std::invalid_argument& e) {
    // e.what() is "<field>: <reason>"
    const std::string what = e.what();
    const auto colon = what.find(':');
    throw ConfigError("optimizer." + what.substr(0, colon),
                      what.substr(colon == std::string::npos ? 0 : colon + 2));
  }
  if (init.scale <= 0.0) throw ConfigError("init.scale", "must be > 0");
}

json ExperimentConfig::to_json() const {
  json j;
  j["game"] = {{"id", game_id}, {"params", json::parse(game_params)}};
  j["optimizer"] = {
      {"rule", std::string(rule_name(opt.rule))},
      {"alpha", opt.alpha},
      {"beta1", opt.beta1},
      {"beta2", opt.beta2},
      {"gamma", opt.gamma},
      {"eta", opt.eta},
      {"eps", opt.eps},
      {"cg_tol", opt.cg_tol},
      {"cg_max_iter", opt.cg_max_iter},
  };
  json init_j;
  if (init.point) init_j["point"] = *init.point;
  if (init.seed) init_j["seed"] = *init.seed;
  init_j["scale"] = init.scale;
  j["init"] = init_j;
  j["max_steps"] = max_steps;
  j["record_every"] = record_every;
  j["convergence_threshold"] = convergence_threshold;
  j["output_dir"] = output_dir.string();
  j["seed"] = seed;
  return j;
}

JointPoint resolve_initial_point(const GameOracle& game,
                                 const ExperimentConfig& cfg) {
  if (cfg.init.point) {
    const Vec& p = *cfg.init.point;
    if (p.size() != game.dim_x() + game.dim_y())
      throw ConfigError("init.point",
                        "expected " + std::to_string(game.dim_x() + game.dim_y()) +
                            " entries, got " + std::to_string(p.size()));
    if (!all_finite(p)) throw ConfigError("init.point", "non-finite entries");
    return JointPoint::split(p, game.dim_x());
  }
  const std::uint64_t seed = cfg.init.seed ? *cfg.init.seed : cfg.seed;
  JointPoint p = game.initial_point(seed);
  if (cfg.init.scale != 1.0) {
    scale(cfg.init.scale, p.x);
    scale(cfg.init.scale, p.y);
  }
  return p;
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& dir) {
  if (const char* root = std::getenv("MINIMAX_OUT_DIR")) {
    if (dir.is_absolute()) return dir;
    return std::filesystem::path(root) / dir;
  }
  return dir;
}

RunOutput run_experiment(const GameOracle& game, const ExperimentConfig& cfg) {
  JointPoint p = resolve_initial_point(game, cfg);
  OptimizerState state = OptimizerState::initial(p);
  RunOutput out;

  const auto record = [&](std::int64_t t, double step_us) {
    TrajectoryRecord r;
    r.t = t;
    r.f = game.loss_x(p);
    r.g = game.loss_y(p);
    const Vec gx = game.grad_x(p);
    const Vec gy = game.grad_y(p);
    r.gx_norm = norm2(gx);
    r.gy_norm = norm2(gy);
    r.p_norm = norm2(p.flat());
    r.step_us = step_us;
    out.records.push_back(r);
    return std::sqrt(r.gx_norm * r.gx_norm + r.gy_norm * r.gy_norm);
  };

  double vnorm = record(0, 0);
  std::int64_t total_ns = 0;
  std::int64_t t = 0;
  bool converged = vnorm <= cfg.convergence_threshold;

  while (!converged && t < static_cast<std::int64_t>(cfg.max_steps)) {
    StepResult sr;
    try {
      sr = step(game, cfg.opt, p, state);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at step " +
                           std::to_string(t + 1));
    }
    p = std::move(sr.point);
    ++t;
    total_ns += sr.elapsed.count();
    const double step_us = static_cast<double>(sr.elapsed.count()) / 1000.0;

    const bool is_record_step = (t % static_cast<std::int64_t>(cfg.record_every)) == 0;
    const bool is_last = t == static_cast<std::int64_t>(cfg.max_steps);
    const Vec v = vector_field(game, p);
    vnorm = norm2(v);
    converged = vnorm <= cfg.convergence_threshold;
    if (is_record_step || is_last || converged) record(t, step_us);
  }

  out.final_point = p;
  out.converged = converged;
  out.steps = t;
  out.final_vnorm = vnorm;
  out.total_us = total_ns / 1000;
  out.mean_step_us = t > 0 ? static_cast<double>(total_ns) / 1000.0 / t : 0.0;
  return out;
}

std::filesystem::path write_run_outputs(const ExperimentConfig& cfg,
                                        const RunOutput& out) {
  const auto dir = resolve_output_dir(cfg.output_dir);

  CsvWriter csv({"t", "f", "g", "grad_x_norm", "grad_y_norm", "point_norm",
                 "step_us"});
  for (const auto& r : out.records)
    csv.row({std::to_string(r.t), format_double(r.f), format_double(r.g),
             format_double(r.gx_norm), format_double(r.gy_norm),
             format_double(r.p_norm), format_double(r.step_us)});
  csv.write(dir / "trajectory.csv");

  json summary;
  summary["config"] = cfg.to_json();
  summary["converged"] = out.converged;
  summary["steps"] = out.steps;
  summary["final_vnorm"] = out.final_vnorm;
  summary["final_point"] = out.final_point.flat();
  summary["timing"] = {{"total_us", out.total_us},
                       {"mean_step_us", out.mean_step_us}};
  atomic_write(dir / "summary.json", summary.dump(2) + "\n");
  return dir;
}

EmpiricalRate measure_contraction(const GameOracle& game,
                                  const OptimizerConfig& cfg,
                                  const JointPoint& start, std::size_t steps,
                                  std::size_t tail) {
  JointPoint p = start;
  OptimizerState state = OptimizerState::initial(p);
  std::vector<double> vnorms;
  vnorms.reserve(steps + 1);
  vnorms.push_back(norm2(vector_field(game, p)));

  EmpiricalRate out;
  if (vnorms[0] == 0.0) {
    out.converged = true;
    out.rate = 0.0;
    return out;
  }
  bool hit_floor = false;
  for (std::size_t k = 0; k < steps; ++k) {
    StepResult sr = step(game, cfg, p, state);
    p = std::move(sr.point);
    const double v = norm2(vector_field(game, p));
    out.steps_run = k + 1;
    if (v < kVNormFloor) {
      // about to underflow; fit the rate over the clean prefix
      hit_floor = true;
      break;
    }
    vnorms.push_back(v);
    if (v > kVNormCeil || !std::isfinite(v)) break;
  }

  // Geometric-mean contraction over the trailing window.
  const std::size_t count = vnorms.size();
  std::size_t window = std::min(tail, (count - 1) / 2);
  if (window == 0) window = count - 1;
  const double head = vnorms[count - 1 - window];
  const double last = vnorms[count - 1];
  if (window == 0 || head <= 0.0) {
    out.rate = 0.0;
  } else if (std::isfinite(last)) {
    out.rate = std::pow(last / head, 1.0 / static_cast<double>(window));
  } else {
    out.rate = std::numeric_limits<double>::infinity();
  }
  out.converged = hit_floor || (out.rate < 1.0 && last < vnorms[0]);
  return out;
}

std::vector<SweepRow> sweep_experiment(const GameOracle& game,
                                       const ExperimentConfig& cfg,
                                       const std::vector<double>& h_values,
                                       std::size_t steps) {
  // Analysis point: the origin, which is stationary for the unshifted zoo
  // games this operation targets.
  JointPoint origin{Vec(game.dim_x(), 0.0), Vec(game.dim_y(), 0.0)};
  const JointPoint start = resolve_initial_point(game, cfg);

  std::vector<SweepRow> rows;
  rows.reserve(h_values.size());
  for (double h : h_values) {
    OptimizerConfig oc = cfg.opt;
    oc.alpha = h;
    SweepRow row;
    row.h = h;
    const SpectralReport rep = certify(game, origin, oc);
    row.certified = rep.certified;
    row.predicted_rho = rep.spectral_radius_f;
    row.h_bound_value = rep.bound.value;
    row.h_bound_defined = rep.bound.defined;
    const EmpiricalRate emp = measure_contraction(game, oc, start, steps);
    row.empirical_converged = emp.converged;
    row.empirical_rate = emp.rate;
    row.agree = row.certified == row.empirical_converged;
    rows.push_back(row);
  }

  // Flag the grid cell closest to the bound (when one exists).
  double bound = 0.0;
  bool have_bound = false;
  for (const auto& r : rows)
    if (r.h_bound_defined && std::isfinite(r.h_bound_value)) {
      bound = r.h_bound_value;
      have_bound = true;
      break;
    }
  if (have_bound && !rows.empty()) {
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (std::abs(rows[i].h - bound) < std::abs(rows[nearest].h - bound))
        nearest = i;
    rows[nearest].boundary = true;
  }
  return rows;
}

std::filesystem::path write_sweep_outputs(const ExperimentConfig& cfg,
                                          const std::vector<SweepRow>& rows) {
  const auto dir = resolve_output_dir(cfg.output_dir);
  CsvWriter csv({"h", "certified", "predicted_rho", "h_bound",
                 "h_bound_defined", "empirical_converged", "empirical_rate",
                 "boundary", "agree"});
  for (const auto& r : rows)
    csv.row({format_double(r.h), r.certified ? "1" : "0",
             format_double(r.predicted_rho),
             r.h_bound_defined ? format_double(r.h_bound_value) : "",
             r.h_bound_defined ? "1" : "0", r.empirical_converged ? "1" : "0",
             format_double(r.empirical_rate), r.boundary ? "1" : "0",
             r.agree ? "1" : "0"});
  csv.write(dir / "sweep.csv");
  return dir;
}

std::vector<BenchRow> bench_experiment(const GameOracle& game,
                                       const ExperimentConfig& cfg,
                                       const std::vector<Rule>& rules,
                                       std::size_t steps, std::size_t warmup) {
  const JointPoint start = resolve_initial_point(game, cfg);
  std::vector<BenchRow> rows;
  for (Rule rule : rules) {
    OptimizerConfig oc = OptimizerConfig::defaults(rule);
    // Shared knobs from the experiment config where they make sense.
    oc.cg_tol = cfg.opt.cg_tol;
    oc.cg_max_iter = cfg.opt.cg_max_iter;

    JointPoint p = start;
    OptimizerState state = OptimizerState::initial(p);
    std::vector<double> us;
    us.reserve(steps);
    double cg_total = 0.0;
    for (std::size_t k = 0; k < warmup + steps; ++k) {
      StepResult sr = step(game, oc, p, state);
      p = std::move(sr.point);
      if (k >= warmup) {
        us.push_back(static_cast<double>(sr.elapsed.count()) / 1000.0);
        cg_total += static_cast<double>(sr.cg_iterations);
      }
    }
    std::sort(us.begin(), us.end());
    BenchRow row;
    row.rule = rule;
    row.mean_us = std::accumulate(us.begin(), us.end(), 0.0) / us.size();
    row.p50_us = us[us.size() / 2];
    row.p95_us = us[std::min(us.size() - 1, (us.size() * 95) / 100)];
    row.mean_cg_iters = cg_total / static_cast<double>(steps);
    rows.push_back(row);
  }
  return rows;
}

std::filesystem::path write_bench_outputs(const ExperimentConfig& cfg,
                                          const std::vector<BenchRow>& rows) {
  const auto dir = resolve_output_dir(cfg.output_dir);
  CsvWriter csv({"rule", "mean_us", "p50_us", "p95_us", "mean_cg_iters"});
  for (const auto& r : rows)
    csv.row({std::string(rule_name(r.rule)), format_double(r.mean_us),
             format_double(r.p50_us), format_double(r.p95_us),
             format_double(r.mean_cg_iters)});
  csv.write(dir / "bench.csv");
  return dir;
}

SpectralReport spectrum_experiment(const GameOracle& game,
                                   const ExperimentConfig& cfg) {
  const JointPoint p = cfg.init.point
                           ? resolve_initial_point(game, cfg)
                           : JointPoint{Vec(game.dim_x(), 0.0),
                                        Vec(game.dim_y(), 0.0)};
  return certify(game, p, cfg.opt);
}

std::filesystem::path write_spectrum_outputs(const ExperimentConfig& cfg,
                                             const SpectralReport& report) {
  const auto dir = resolve_output_dir(cfg.output_dir);
  atomic_write(dir / "spectrum.json", report.to_json().dump(2) + "\n");

  CsvWriter csv({"block", "re", "im"});
  for (const auto& e : report.eigs_vprime)
    csv.row({"vprime", format_double(e.real()), format_double(e.imag())});
  for (double e : report.eigs_dxx)
    csv.row({"dxx", format_double(e), format_double(0.0)});
  for (double e : report.eigs_dyy)
    csv.row({"dyy", format_double(e), format_double(0.0)});
  for (const auto& e : report.eigs_a)
    csv.row({"A", format_double(e.real()), format_double(e.imag())});
  csv.write(dir / "spectrum_eigs.csv");
  return dir;
}

}  // namespace minimax
