// minimax: trajectories, spectral certification, step-size sweeps and
// per-step cost benchmarks for two-player smooth games.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical abort.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"

#include "minimax/errors.hpp"
#include "minimax/experiment.hpp"
#include "minimax/games.hpp"
#include "minimax/io.hpp"
#include "minimax/kernels.hpp"

namespace {

using minimax::ConfigError;
using minimax::ExperimentConfig;
using nlohmann::json;

constexpr const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plots whichever result files exist next to this script."""
import csv
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required to render the plots")


def read(name):
    path = os.path.join(HERE, name)
    if not os.path.exists(path):
        return None
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def save(fig, name):
    out = os.path.join(HERE, name)
    fig.savefig(out, dpi=130, bbox_inches="tight")
    print("wrote", out)


rows = read("trajectory.csv")
if rows:
    t = [int(r["t"]) for r in rows]
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.2))
    axes[0].plot(t, [float(r["f"]) for r in rows], label="f (x-player)")
    axes[0].plot(t, [float(r["g"]) for r in rows], label="g (y-player)")
    axes[0].set_xlabel("step"), axes[0].set_ylabel("loss"), axes[0].legend()
    axes[1].semilogy(t, [max(float(r["grad_x_norm"]), 1e-300) for r in rows],
                     label="|grad_x f|")
    axes[1].semilogy(t, [max(float(r["grad_y_norm"]), 1e-300) for r in rows],
                     label="|grad_y g|")
    axes[1].set_xlabel("step"), axes[1].legend()
    save(fig, "trajectory.png")

rows = read("sweep.csv")
if rows:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    h = [float(r["h"]) for r in rows]
    ax.plot(h, [float(r["predicted_rho"]) for r in rows], "o-",
            label="predicted rho")
    ax.plot(h, [float(r["empirical_rate"]) for r in rows], "s--",
            label="empirical rate")
    ax.axhline(1.0, color="k", lw=0.8)
    ax.set_xlabel("h"), ax.set_ylabel("per-step contraction"), ax.legend()
    save(fig, "sweep.png")

rows = read("bench.csv")
if rows:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar([r["rule"] for r in rows], [float(r["mean_us"]) for r in rows])
    ax.set_ylabel("mean step time (us)")
    save(fig, "bench.png")

rows = read("spectrum_eigs.csv")
if rows:
    fig, ax = plt.subplots(figsize=(4.4, 4))
    for block, marker in (("vprime", "o"), ("A", "x"), ("dxx", "^"), ("dyy", "v")):
        pts = [(float(r["re"]), float(r["im"])) for r in rows if r["block"] == block]
        if pts:
            ax.scatter([p[0] for p in pts], [p[1] for p in pts], marker=marker,
                       label=block, alpha=0.8)
    ax.axvline(0.0, color="k", lw=0.8), ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("Re"), ax.set_ylabel("Im"), ax.legend()
    save(fig, "spectrum.png")
)PY";

struct Overrides {
  std::optional<std::string> game, params, rule, point;
  std::optional<double> alpha, beta1, beta2, gamma, eta, eps, threshold, scale;
  std::optional<std::int64_t> steps, record_every, seed, init_seed;
  std::optional<std::string> out;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--game", o.game, "game id (bilinear|quadratic|dirac|mlp)");
  cmd->add_option("--params", o.params, "game parameter JSON object");
  cmd->add_option("--rule", o.rule, "optimizer rule");
  cmd->add_option("--alpha", o.alpha, "learning rate / step size");
  cmd->add_option("--beta1", o.beta1, "first decay rate");
  cmd->add_option("--beta2", o.beta2, "second decay rate");
  cmd->add_option("--gamma", o.gamma, "second-order coefficient");
  cmd->add_option("--eta", o.eta, "cgd regularization");
  cmd->add_option("--eps", o.eps, "numerical floor");
  cmd->add_option("--steps", o.steps, "max steps");
  cmd->add_option("--record-every", o.record_every, "trajectory stride");
  cmd->add_option("--threshold", o.threshold, "|V(p)| convergence threshold");
  cmd->add_option("--point", o.point, "initial joint point, comma separated");
  cmd->add_option("--init-seed", o.init_seed, "seed for the initial point");
  cmd->add_option("--init-scale", o.scale, "scale for the seeded start");
  cmd->add_option("--seed", o.seed, "experiment seed");
  cmd->add_option("--out", o.out, "output directory");
}

ExperimentConfig build_config(const std::optional<std::string>& config_path,
                              const Overrides& o) {
  json base = json::object();
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw ConfigError("config", "cannot open " + *config_path);
    try {
      in >> base;
    } catch (const json::parse_error& e) {
      throw ConfigError("config", e.what());
    }
  }
  // A --rule flag participates in config parsing (defaults are rule-scoped),
  // so fields the file sets explicitly still win over the new rule's defaults.
  if (o.rule) {
    if (!minimax::rule_from_name(*o.rule))
      throw ConfigError("optimizer.rule", "unknown rule '" + *o.rule + "'");
    base["optimizer"]["rule"] = *o.rule;
  }
  ExperimentConfig cfg = ExperimentConfig::from_json(base);

  if (o.game) cfg.game_id = *o.game;
  if (o.params) {
    try {
      cfg.game_params = json::parse(*o.params).dump();
    } catch (const json::parse_error& e) {
      throw ConfigError("game.params", e.what());
    }
  }
  if (o.alpha) cfg.opt.alpha = *o.alpha;
  if (o.beta1) cfg.opt.beta1 = *o.beta1;
  if (o.beta2) cfg.opt.beta2 = *o.beta2;
  if (o.gamma) cfg.opt.gamma = *o.gamma;
  if (o.eta) cfg.opt.eta = *o.eta;
  if (o.eps) cfg.opt.eps = *o.eps;
  if (o.steps) cfg.max_steps = static_cast<std::size_t>(*o.steps);
  if (o.record_every) cfg.record_every = static_cast<std::size_t>(*o.record_every);
  if (o.threshold) cfg.convergence_threshold = *o.threshold;
  if (o.point) {
    minimax::Vec p;
    std::stringstream ss(*o.point);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        p.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("init.point", "bad entry '" + cell + "'");
      }
    }
    cfg.init.point = std::move(p);
  }
  if (o.init_seed) cfg.init.seed = static_cast<std::uint64_t>(*o.init_seed);
  if (o.scale) cfg.init.scale = *o.scale;
  if (o.seed) cfg.seed = static_cast<std::uint64_t>(*o.seed);
  if (o.out) cfg.output_dir = *o.out;

  cfg.validate();
  return cfg;
}

void emit_plot_script(const std::filesystem::path& dir) {
  minimax::atomic_write(dir / "plot.py", kPlotScript);
}

int run_command(const std::optional<std::string>& config_path, const Overrides& o) {
  ExperimentConfig cfg = build_config(config_path, o);
  auto game = minimax::make_game(cfg.game_id, cfg.game_params);
  const minimax::RunOutput out = minimax::run_experiment(*game, cfg);
  const auto dir = minimax::write_run_outputs(cfg, out);
  emit_plot_script(dir);
  std::cout << "game=" << cfg.game_id << " rule=" << rule_name(cfg.opt.rule)
            << " steps=" << out.steps
            << " converged=" << (out.converged ? "true" : "false")
            << " final_vnorm=" << minimax::format_double(out.final_vnorm)
            << "\nwrote " << (dir / "trajectory.csv").string() << ", "
            << (dir / "summary.json").string() << "\n";
  return 0;
}

int spectrum_command(const std::optional<std::string>& config_path,
                     const Overrides& o) {
  ExperimentConfig cfg = build_config(config_path, o);
  auto game = minimax::make_game(cfg.game_id, cfg.game_params);
  const minimax::SpectralReport rep = minimax::spectrum_experiment(*game, cfg);
  const auto dir = minimax::write_spectrum_outputs(cfg, rep);
  emit_plot_script(dir);
  std::cout << "rule=" << rep.rule << " certified=" << (rep.certified ? "true" : "false")
            << " spectral_radius_F=" << minimax::format_double(rep.spectral_radius_f)
            << " h_bound="
            << (rep.bound.defined ? minimax::format_double(rep.bound.value)
                                  : std::string("undefined"))
            << "\nwrote " << (dir / "spectrum.json").string() << "\n";
  return 0;
}

int sweep_command(const std::optional<std::string>& config_path, const Overrides& o,
                  const std::vector<double>& h_values, std::int64_t sweep_steps) {
  if (h_values.empty()) throw ConfigError("sweep.h", "need at least one h value");
  ExperimentConfig cfg = build_config(config_path, o);
  auto game = minimax::make_game(cfg.game_id, cfg.game_params);
  const auto rows = minimax::sweep_experiment(*game, cfg, h_values,
                                              static_cast<std::size_t>(sweep_steps));
  const auto dir = minimax::write_sweep_outputs(cfg, rows);
  emit_plot_script(dir);
  std::size_t agree = 0, scored = 0;
  for (const auto& r : rows) {
    if (r.boundary) continue;
    ++scored;
    agree += r.agree ? 1 : 0;
  }
  std::cout << "cells=" << rows.size() << " scored=" << scored
            << " agree=" << agree << "\nwrote " << (dir / "sweep.csv").string()
            << "\n";
  return 0;
}

int bench_command(const std::optional<std::string>& config_path, const Overrides& o,
                  const std::string& rules_csv, std::int64_t steps,
                  std::int64_t warmup) {
  ExperimentConfig cfg = build_config(config_path, o);
  std::vector<minimax::Rule> rules;
  std::stringstream ss(rules_csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto rule = minimax::rule_from_name(cell);
    if (!rule) throw ConfigError("bench.rules", "unknown rule '" + cell + "'");
    rules.push_back(*rule);
  }
  if (rules.empty()) throw ConfigError("bench.rules", "need at least one rule");
  auto game = minimax::make_game(cfg.game_id, cfg.game_params);
  const auto rows = minimax::bench_experiment(*game, cfg, rules,
                                              static_cast<std::size_t>(steps),
                                              static_cast<std::size_t>(warmup));
  const auto dir = minimax::write_bench_outputs(cfg, rows);
  emit_plot_script(dir);
  for (const auto& r : rows)
    std::cout << rule_name(r.rule) << ": mean=" << minimax::format_double(r.mean_us)
              << "us p50=" << minimax::format_double(r.p50_us)
              << "us p95=" << minimax::format_double(r.p95_us) << "us\n";
  std::cout << "wrote " << (dir / "bench.csv").string() << "\n";
  return 0;
}

void list_games() {
  std::cout << "bilinear   f = x'By, g = -f; params: {\"b\": scalar|matrix}\n"
            << "quadratic  blocks D2xx f = a_xx, D2xy f = b, D2yy f = a_yy;\n"
            << "           params: {\"a_xx\", \"a_yy\", \"b\": scalar|matrix,"
               " \"b_x\", \"b_y\": array}\n"
            << "dirac      1-D GAN caricature softplus(theta*psi); params: {}\n"
            << "mlp        2-D GAN, tanh MLPs; params: {\"seed\", \"hidden\","
               " \"modes\", \"batch\", \"sigma\", \"gen_loss\"}\n";
}

void list_rules() {
  for (std::size_t i = 0; i < minimax::kRuleCount; ++i)
    std::cout << rule_name(minimax::rule_at(i)) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"competitive-optimization toolkit"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  Overrides o;

  auto* run = app.add_subcommand("run", "run one trajectory");
  run->add_option("--config", config_path, "JSON config file");
  add_override_flags(run, o);

  auto* spectrum = app.add_subcommand("spectrum", "fixed-point spectral report");
  spectrum->add_option("--config", config_path, "JSON config file");
  add_override_flags(spectrum, o);

  std::vector<double> h_values;
  std::int64_t sweep_steps = 2000;
  auto* sweep = app.add_subcommand("sweep", "step-size sweep vs certification");
  sweep->add_option("--config", config_path, "JSON config file");
  sweep->add_option("--h-values", h_values, "step sizes to test")->delimiter(',');
  sweep->add_option("--sweep-steps", sweep_steps, "steps per empirical run");
  add_override_flags(sweep, o);

  std::string bench_rules = "gda,adam,acom_adam,conopt,cgd";
  std::int64_t bench_steps = 100, bench_warmup = 10;
  auto* bench = app.add_subcommand("bench", "per-step cost comparison");
  bench->add_option("--config", config_path, "JSON config file");
  bench->add_option("--rules", bench_rules, "comma-separated rule list");
  bench->add_option("--bench-steps", bench_steps, "timed steps per rule");
  bench->add_option("--warmup", bench_warmup, "discarded warm-up steps");
  add_override_flags(bench, o);

  auto* lg = app.add_subcommand("list-games", "describe the game zoo");
  auto* lr = app.add_subcommand("list-rules", "list optimizer rules");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lg->parsed()) {
      list_games();
      return 0;
    }
    if (lr->parsed()) {
      list_rules();
      return 0;
    }
    if (run->parsed()) return run_command(config_path, o);
    if (spectrum->parsed()) return spectrum_command(config_path, o);
    if (sweep->parsed())
      return sweep_command(config_path, o, h_values, sweep_steps);
    if (bench->parsed())
      return bench_command(config_path, o, bench_rules, bench_steps, bench_warmup);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const minimax::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
