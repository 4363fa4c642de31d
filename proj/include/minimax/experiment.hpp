#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nlohmann/json_fwd.hpp"

#include "minimax/game.hpp"
#include "minimax/optimizer.hpp"
#include "minimax/spectral.hpp"

namespace minimax {

struct InitSpec {
  std::optional<Vec> point;           // explicit joint vector (x then y)
  std::optional<std::uint64_t> seed;  // else: seeded draw from the game
  double scale = 1.0;
};

struct ExperimentConfig {
  std::string game_id = "quadratic";
  std::string game_params = "{}";  // JSON object text
  OptimizerConfig opt = OptimizerConfig::defaults(Rule::kGda);
  InitSpec init;
  std::size_t max_steps = 1000;
  std::size_t record_every = 1;
  double convergence_threshold = 1e-8;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;

  // Parses and validates; throws ConfigError carrying the field path.
  static ExperimentConfig from_json(const nlohmann::json& j);
  void validate() const;
  nlohmann::json to_json() const;
};

// Instantiates the game named by (game_id, game_params); ConfigError on
// unknown ids or bad parameters.
GamePtr make_game(const std::string& id, const std::string& params_json);

// Resolves the starting point (explicit vector or seeded draw).
JointPoint resolve_initial_point(const GameOracle& game,
                                 const ExperimentConfig& cfg);

// Applies the MINIMAX_OUT_DIR root override.
std::filesystem::path resolve_output_dir(const std::filesystem::path& dir);

struct TrajectoryRecord {
  std::int64_t t = 0;
  double f = 0.0, g = 0.0;
  double gx_norm = 0.0, gy_norm = 0.0;
  double p_norm = 0.0;
  double step_us = 0.0;  // wall time of the step that produced this point
};

struct RunOutput {
  std::vector<TrajectoryRecord> records;
  JointPoint final_point;
  bool converged = false;
  std::int64_t steps = 0;
  double final_vnorm = 0.0;
  std::int64_t total_us = 0;
  double mean_step_us = 0.0;
};

// Steps until max_steps or |V(p)| <= convergence_threshold.
RunOutput run_experiment(const GameOracle& game, const ExperimentConfig& cfg);

// trajectory.csv, summary.json and plot.py (atomically). Returns the
// resolved output directory.
std::filesystem::path write_run_outputs(const ExperimentConfig& cfg,
                                        const RunOutput& out);

struct SweepRow {
  double h = 0.0;
  bool certified = false;
  double predicted_rho = 0.0;
  double h_bound_value = 0.0;
  bool h_bound_defined = false;
  bool empirical_converged = false;
  double empirical_rate = 0.0;
  bool boundary = false;  // grid cell nearest the h-bound, excluded from scoring
  bool agree = false;
};

// Certification at the stationary analysis point vs. an empirical run from
// the configured start, one row per step size.
std::vector<SweepRow> sweep_experiment(const GameOracle& game,
                                       const ExperimentConfig& cfg,
                                       const std::vector<double>& h_values,
                                       std::size_t steps = 2000);

std::filesystem::path write_sweep_outputs(const ExperimentConfig& cfg,
                                          const std::vector<SweepRow>& rows);

// Fitted asymptotic per-step contraction of |V(p_k)| (geometric mean over the
// trailing window) plus a converged/diverged verdict. Used by sweep and the
// acceptance suite.
struct EmpiricalRate {
  double rate = 1.0;
  bool converged = false;
  std::size_t steps_run = 0;
};
EmpiricalRate measure_contraction(const GameOracle& game,
                                  const OptimizerConfig& cfg,
                                  const JointPoint& start, std::size_t steps,
                                  std::size_t tail = 200);

struct BenchRow {
  Rule rule = Rule::kGda;
  double mean_us = 0.0;
  double p50_us = 0.0;
  double p95_us = 0.0;
  double mean_cg_iters = 0.0;
};

// Times `steps` updates per rule from the same initial point; the first
// `warmup` steps are discarded.
std::vector<BenchRow> bench_experiment(const GameOracle& game,
                                       const ExperimentConfig& cfg,
                                       const std::vector<Rule>& rules,
                                       std::size_t steps,
                                       std::size_t warmup = 10);

std::filesystem::path write_bench_outputs(const ExperimentConfig& cfg,
                                          const std::vector<BenchRow>& rows);

SpectralReport spectrum_experiment(const GameOracle& game,
                                   const ExperimentConfig& cfg);

std::filesystem::path write_spectrum_outputs(const ExperimentConfig& cfg,
                                             const SpectralReport& report);

}  // namespace minimax
