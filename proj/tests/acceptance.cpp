// Acceptance suite: one check per release criterion, one PASS/FAIL line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "minimax/experiment.hpp"
#include "minimax/finite_diff.hpp"
#include "minimax/games.hpp"
#include "minimax/linear_solvers.hpp"
#include "minimax/optimizer.hpp"
#include "minimax/spectral.hpp"
#include "test_util.hpp"

using minimax::DenseMatrix;
using minimax::JointPoint;
using minimax::NormalSampler;
using minimax::OptimizerConfig;
using minimax::OptimizerState;
using minimax::Rule;
using minimax::Vec;

namespace {

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

class Harness {
 public:
  void criterion(int number, const std::string& title,
                 const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      body();
    } catch (const Failure& f) {
      ok = false;
      detail = f.detail;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("criterion %2d: %s  %s (%.2fs)%s%s\n", number,
                ok ? "PASS" : "FAIL", title.c_str(), secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    failures_ += ok ? 0 : 1;
  }

  int finish() const {
    std::printf("%s: %d criterion(s) failed\n",
                failures_ == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                failures_);
    return failures_ == 0 ? 0 : 1;
  }

 private:
  int failures_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<minimax::GamePtr> acceptance_zoo() {
  NormalSampler rng(2026);
  minimax::MlpGanConfig mlp;
  mlp.seed = 9;
  mlp.hidden = 8;
  mlp.batch = 16;
  return {
      minimax::bilinear_game(testutil::random_matrix(rng, 3, 2)),
      minimax::quadratic_game(testutil::random_symmetric(rng, 3),
                              testutil::random_symmetric(rng, 2),
                              testutil::random_matrix(rng, 3, 2),
                              rng.vector(3), rng.vector(2)),
      minimax::dirac_gan_game(),
      minimax::mlp_gan_game(mlp),
  };
}

// ---- criterion 1 -----------------------------------------------------------

void check_derivative_fidelity() {
  const auto start = std::chrono::steady_clock::now();
  NormalSampler rng(404);
  for (const auto& game : acceptance_zoo()) {
    const bool quadratic_exact =
        game->name() == "bilinear" || game->name() == "quadratic";
    const double hvp_tol = quadratic_exact ? 1e-10 : 1e-4;
    for (int trial = 0; trial < 50; ++trial) {
      const JointPoint p{rng.vector(game->dim_x()), rng.vector(game->dim_y())};

      const auto f_of_x = [&](std::span<const double> xs) {
        return game->loss_x({Vec(xs.begin(), xs.end()), p.y});
      };
      const auto g_of_y = [&](std::span<const double> ys) {
        return game->loss_y({p.x, Vec(ys.begin(), ys.end())});
      };
      const Vec fdx = minimax::fd_gradient(f_of_x, p.x,
                                           minimax::default_gradient_step(p.x));
      const Vec fdy = minimax::fd_gradient(g_of_y, p.y,
                                           minimax::default_gradient_step(p.y));
      require(testutil::rel_err(game->grad_x(p), fdx) <= 1e-5,
              game->name() == "mlp" ? "mlp grad_x vs fd" : "grad_x vs fd");
      require(testutil::rel_err(game->grad_y(p), fdy) <= 1e-5, "grad_y vs fd");

      const Vec vx = rng.vector(game->dim_x());
      const Vec vy = rng.vector(game->dim_y());
      const auto grad_x_of_x = [&](std::span<const double> xs) {
        return game->grad_x({Vec(xs.begin(), xs.end()), p.y});
      };
      const auto grad_y_of_y = [&](std::span<const double> ys) {
        return game->grad_y({p.x, Vec(ys.begin(), ys.end())});
      };
      const auto grad_x_of_y = [&](std::span<const double> ys) {
        return game->grad_x({p.x, Vec(ys.begin(), ys.end())});
      };
      const auto grad_yf_of_x = [&](std::span<const double> xs) {
        Vec g = game->grad_y({Vec(xs.begin(), xs.end()), p.y});
        minimax::scale(-1.0, g);  // grad_y f = -grad_y g (zero-sum zoo)
        return g;
      };
      const double sx = minimax::default_hvp_step(p.x);
      const double sy = minimax::default_hvp_step(p.y);

      require(testutil::rel_err(game->hvp_xx(p, vx),
                                minimax::fd_hvp(grad_x_of_x, p.x, vx, sx)) <=
                  hvp_tol,
              "hvp_xx vs fd");
      require(testutil::rel_err(game->hvp_yy(p, vy),
                                minimax::fd_hvp(grad_y_of_y, p.y, vy, sy)) <=
                  hvp_tol,
              "hvp_yy vs fd");
      require(testutil::rel_err(game->hvp_xy(p, vy),
                                minimax::fd_hvp(grad_x_of_y, p.y, vy, sy)) <=
                  hvp_tol,
              "hvp_xy vs fd");
      require(testutil::rel_err(game->hvp_yx(p, vx),
                                minimax::fd_hvp(grad_yf_of_x, p.x, vx, sx)) <=
                  hvp_tol,
              "hvp_yx vs fd");
    }
  }
  require(seconds_since(start) < 10.0, "runtime exceeded 10 s");
}

// ---- criterion 2 -----------------------------------------------------------

void check_taylor_exactness() {
  NormalSampler rng(505);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t m = 2 + trial % 3;
    const std::size_t n = 1 + trial % 4;
    const auto game = minimax::quadratic_game(
        testutil::random_symmetric(rng, m), testutil::random_symmetric(rng, n),
        testutil::random_matrix(rng, m, n), rng.vector(m), rng.vector(n));
    const JointPoint p{rng.vector(m), rng.vector(n)};
    const JointPoint prev{rng.vector(m), rng.vector(n)};
    const auto [dx, dy] = minimax::corrected_gradient(*game, p, prev);

    Vec shifted_x = p.x;
    minimax::axpy(1.0, p.x, shifted_x);
    minimax::axpy(-1.0, prev.x, shifted_x);
    require(testutil::rel_err(dx, game->grad_x({shifted_x, p.y})) <= 1e-12,
            "x-side Taylor identity");
    Vec shifted_y = p.y;
    minimax::axpy(1.0, p.y, shifted_y);
    minimax::axpy(-1.0, prev.y, shifted_y);
    require(testutil::rel_err(dy, game->grad_y({p.x, shifted_y})) <= 1e-12,
            "y-side Taylor identity");
  }
}

// ---- criterion 3 -----------------------------------------------------------

void check_gda_cycling_vs_conopt() {
  DenseMatrix b(1, 1);
  b(0, 0) = 1.0;
  const auto bilinear = minimax::bilinear_game(b);
  OptimizerConfig gda = OptimizerConfig::defaults(Rule::kGda);
  gda.alpha = 0.1;
  JointPoint p{{1.0}, {1.0}};
  OptimizerState st = OptimizerState::initial(p);
  for (int k = 0; k < 1000; ++k) p = minimax::step(*bilinear, gda, p, st).point;
  const double norm_end = minimax::norm2(p.flat());
  const double expected = std::pow(1.0 + 0.1 * 0.1, 500.0) * std::sqrt(2.0);
  require(std::abs(norm_end - expected) <= 1e-6 * expected,
          "gda growth law (1+a^2)^500");

  const auto quad = minimax::quadratic_game_1d(-1.0, 1.0, -1.0);
  OptimizerConfig conopt = OptimizerConfig::defaults(Rule::kConOpt);
  conopt.alpha = 0.5;  // below the contraction threshold of the damped map
  conopt.gamma = 1.0;
  JointPoint q{{1.0}, {1.0}};
  OptimizerState st2 = OptimizerState::initial(q);
  for (int k = 0; k < 1000; ++k) q = minimax::step(*quad, conopt, q, st2).point;
  require(minimax::norm2(q.flat()) <= 1e-3, "conopt contraction to 1e-3");

  // the second-order adaptive stepper stays bounded on the same rotational game
  OptimizerConfig acom = OptimizerConfig::defaults(Rule::kAcomAdam);
  JointPoint r{{1.0}, {1.0}};
  OptimizerState st3 = OptimizerState::initial(r);
  for (int k = 0; k < 1000; ++k) r = minimax::step(*quad, acom, r, st3).point;
  require(minimax::norm2(r.flat()) <= 10.0, "acom_adam bounded");
}

// ---- criterion 4 -----------------------------------------------------------

void check_h_bound_values() {
  const auto complex_pair = minimax::h_bound({{-1.0, 1.0}, {-1.0, -1.0}});
  require(complex_pair.defined, "bound defined for -1 +- i");
  require(std::abs(complex_pair.value - 1.0) <= 1e-12, "bound(-1 +- i) == 1");
  const auto real_one = minimax::h_bound({{-1.0, 0.0}});
  require(real_one.defined, "bound defined for -1");
  require(std::abs(real_one.value - 2.0) <= 1e-12, "bound(-1) == 2");
}

// ---- criterion 5 -----------------------------------------------------------

void check_certification_dynamics_agreement() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<minimax::GamePtr> games = {
      minimax::quadratic_game_1d(0.2, -0.2, -1.0),
      minimax::quadratic_game_1d(0.1, -0.1, 1.0),
  };
  const double fractions[8] = {0.15, 0.3, 0.45, 0.6, 0.75, 0.9, 1.05, 1.5};
  const JointPoint origin{{0.0}, {0.0}};
  const JointPoint start_pt{{0.3}, {-0.25}};

  int scored = 0, agreed = 0;
  for (const auto& game : games) {
    for (Rule rule : {Rule::kGda, Rule::kAcomRmsProp}) {
      OptimizerConfig base = OptimizerConfig::defaults(rule);
      base.eps = 1.0;
      base.beta1 = 0.5;
      base.beta2 = 0.99;
      base.alpha = 0.05;
      const auto probe = minimax::certify(*game, origin, base);
      require(probe.bound.defined, "bound defined on the weakly-curved zoo");
      const double bound = probe.bound.value;

      // nearest-to-bound cell (the 1.05 fraction) is the excluded boundary
      std::size_t boundary_idx = 0;
      for (std::size_t i = 1; i < 8; ++i)
        if (std::abs(fractions[i] - 1.0) < std::abs(fractions[boundary_idx] - 1.0))
          boundary_idx = i;

      for (std::size_t i = 0; i < 8; ++i) {
        OptimizerConfig cfg = base;
        cfg.alpha = fractions[i] * bound;
        const auto rep = minimax::certify(*game, origin, cfg);
        const auto emp = minimax::measure_contraction(*game, cfg, start_pt, 2000);
        if (i != boundary_idx) {
          ++scored;
          agreed += (rep.certified == emp.converged) ? 1 : 0;
        }
        if (rep.certified) {
          const double rho = rep.spectral_radius_f;
          std::ostringstream msg;
          msg << "tail ratio " << emp.rate << " outside [rho/2, min(1,2rho)] of "
              << rho << " (" << rule_name(rule) << ", h=" << cfg.alpha << ")";
          require(emp.rate >= rho / 2.0 && emp.rate <= std::min(1.0, 2.0 * rho),
                  msg.str());
        }
      }
    }
  }
  std::ostringstream msg;
  msg << "agreement " << agreed << "/" << scored;
  require(agreed >= static_cast<int>(std::ceil(0.95 * scored)), msg.str());
  require(seconds_since(start) < 60.0, "runtime exceeded 60 s");
}

// ---- criterion 6 -----------------------------------------------------------

void check_lemma1_biconditional() {
  NormalSampler rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform01() * 4);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 4);
    const auto game = minimax::quadratic_game(
        testutil::random_symmetric(rng, m), testutil::random_symmetric(rng, n),
        testutil::random_matrix(rng, m, n));
    const JointPoint origin{Vec(m, 0.0), Vec(n, 0.0)};
    const auto nash = minimax::check_nash_conditions(*game, origin);
    require(nash.vprime_nsd == (nash.dxx_nsd && nash.dyy_psd),
            "biconditional instance " + std::to_string(trial));
  }
}

// ---- criterion 7 -----------------------------------------------------------

void check_cgd_correctness() {
  // scalar bilinear: delta_x = -0.9/1.01
  DenseMatrix b1(1, 1);
  b1(0, 0) = 1.0;
  const auto scalar_game = minimax::bilinear_game(b1);
  OptimizerConfig cfg = OptimizerConfig::defaults(Rule::kCgd);
  cfg.alpha = 1.0;
  cfg.eta = 0.1;
  cfg.gamma = 0.1;
  OptimizerState st = OptimizerState::initial({{1.0}, {1.0}});
  const auto stepped = minimax::step(*scalar_game, cfg, {{1.0}, {1.0}}, st);
  require(std::abs((stepped.point.x[0] - 1.0) - (-0.9 / 1.01)) <= 1e-12,
          "scalar delta_x = -0.9/1.01");

  // m = n = 25: matrix-free cg vs dense lu solve
  NormalSampler rng(707);
  for (int variant = 0; variant < 2; ++variant) {
    const auto b_mat = testutil::random_matrix(rng, 25, 25, 0.4);
    minimax::GamePtr game;
    if (variant == 0) {
      game = minimax::bilinear_game(b_mat);
    } else {
      game = minimax::quadratic_game(testutil::random_symmetric(rng, 25, 0.3),
                                     testutil::random_symmetric(rng, 25, 0.3),
                                     b_mat);
    }
    const JointPoint p{rng.vector(25), rng.vector(25)};
    OptimizerConfig c = OptimizerConfig::defaults(Rule::kCgd);
    c.alpha = 1.0;
    c.eta = 0.3;
    c.gamma = 0.3;
    OptimizerState s = OptimizerState::initial(p);
    const auto next = minimax::step(*game, c, p, s).point;

    const Vec gy = game->grad_y(p);
    Vec rhs = game->grad_x(p);
    minimax::axpy(c.gamma, game->hvp_xy(p, gy), rhs);
    DenseMatrix sys(25, 25);
    for (std::size_t i = 0; i < 25; ++i)
      for (std::size_t j = 0; j < 25; ++j) {
        double acc = i == j ? 1.0 : 0.0;
        for (std::size_t k = 0; k < 25; ++k)
          acc += c.eta * c.eta * b_mat(i, k) * b_mat(j, k);
        sys(i, j) = acc;
      }
    const Vec dense = minimax::lu_solve(sys, rhs);
    Vec cg_delta(25);
    for (std::size_t i = 0; i < 25; ++i) cg_delta[i] = p.x[i] - next.x[i];
    require(testutil::rel_err(cg_delta, dense) <= 1e-8,
            variant == 0 ? "bilinear 25x25 cg vs lu" : "quadratic 25x25 cg vs lu");
  }
}

// ---- criterion 8 -----------------------------------------------------------

void check_step_cost_ordering() {
  minimax::MlpGanConfig mlp;
  mlp.seed = 3;
  mlp.hidden = 16;
  mlp.batch = 64;
  mlp.modes = {{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}};
  const auto game = minimax::mlp_gan_game(mlp);

  minimax::ExperimentConfig cfg;
  cfg.init.seed = 11;
  const auto rows = minimax::bench_experiment(
      *game, cfg,
      {Rule::kGda, Rule::kAcomAdam, Rule::kConOpt, Rule::kCgd}, 500, 10);
  const double gda = rows[0].mean_us;
  const double acom = rows[1].mean_us;
  const double conopt = rows[2].mean_us;
  const double cgd = rows[3].mean_us;

  std::ostringstream msg;
  msg << "mean us: gda=" << gda << " acom_adam=" << acom
      << " conopt=" << conopt << " cgd=" << cgd;
  require(gda / acom <= 0.95, "gda < acom_adam by ratio 0.95 -- " + msg.str());
  require(acom / conopt <= 0.95, "acom_adam < conopt by ratio 0.95 -- " + msg.str());
  require(acom / cgd <= 0.95, "acom_adam < cgd by ratio 0.95 -- " + msg.str());
}

// ---- criterion 9 -----------------------------------------------------------

void check_fixed_point_identity() {
  const auto quad = minimax::quadratic_game_1d(-1.0, 1.0, -1.0);
  const auto dirac = minimax::dirac_gan_game();
  for (const auto& game : {quad, dirac}) {
    const JointPoint p{Vec(game->dim_x(), 0.0), Vec(game->dim_y(), 0.0)};
    for (Rule rule : {Rule::kAcomAdam, Rule::kAcomRmsProp}) {
      OptimizerConfig cfg = OptimizerConfig::defaults(rule);
      OptimizerState st = OptimizerState::initial(p);
      const auto res = minimax::step(*game, cfg, p, st);
      require(res.point.x == p.x && res.point.y == p.y,
              std::string(rule_name(rule)) + " moved a stationary point");
      require(st.m_x == Vec(game->dim_x(), 0.0) &&
                  st.v_x == Vec(game->dim_x(), 0.0),
              "state picked up nonzero moments");
    }
  }
}

// ---- criterion 10 ----------------------------------------------------------

void check_mlp_smoke() {
  const auto start = std::chrono::steady_clock::now();
  minimax::MlpGanConfig mlp;
  mlp.seed = 7;
  mlp.hidden = 16;
  mlp.batch = 64;
  mlp.modes = {{1.5, 1.5}, {-1.5, 1.5}, {1.5, -1.5}, {-1.5, -1.5}};
  mlp.gen_loss = minimax::MlpGanConfig::GenLoss::kNonSaturating;
  const auto game = minimax::mlp_gan_game(mlp);

  OptimizerConfig cfg = OptimizerConfig::defaults(Rule::kAcomAdam);
  // pinned default hyperparameters of the corrected adaptive stepper
  require(cfg.alpha == 2e-4 && cfg.beta1 == 0.5 && cfg.beta2 == 0.99 &&
              cfg.eps == 1e-8,
          "acom_adam defaults");

  JointPoint p = game->initial_point(1);
  OptimizerState st = OptimizerState::initial(p);
  for (int k = 0; k < 2000; ++k) {
    p = minimax::step(*game, cfg, p, st).point;  // throws on non-finite
    if (k % 100 == 0 || k == 1999) {
      const double f = game->loss_x(p);
      const double g = game->loss_y(p);
      std::ostringstream msg;
      msg << "losses out of [0, 10] at step " << k << ": f=" << f << " g=" << g;
      require(f >= 0.0 && f <= 10.0 && g >= 0.0 && g <= 10.0, msg.str());
    }
  }
  require(minimax::all_finite(p.x) && minimax::all_finite(p.y), "finite point");
  require(seconds_since(start) < 300.0, "runtime exceeded 5 min");
}

}  // namespace

int main() {
  Harness h;
  h.criterion(1, "derivative fidelity (grads 1e-5, hvps 1e-4 / 1e-10 quadratics)",
              check_derivative_fidelity);
  h.criterion(2, "Taylor-update exactness on quadratics (1e-12)",
              check_taylor_exactness);
  h.criterion(3, "gda cycling growth law vs conopt contraction",
              check_gda_cycling_vs_conopt);
  h.criterion(4, "h-bound values for -1 +- i and -1 (1e-12)",
              check_h_bound_values);
  h.criterion(5, "certification-dynamics agreement on 8-point h-grids (>=95%)",
              check_certification_dynamics_agreement);
  h.criterion(6, "definiteness biconditional on 100 random zero-sum quadratics",
              check_lemma1_biconditional);
  h.criterion(7, "cgd: cg matches dense solve at m=n=25; scalar -0.9/1.01",
              check_cgd_correctness);
  h.criterion(8, "per-step cost ordering on the mlp game (ratios <= 0.95)",
              check_step_cost_ordering);
  h.criterion(9, "stationary point with zeroed state is bitwise fixed",
              check_fixed_point_identity);
  h.criterion(10, "mlp gan smoke: 2000 adaptive steps, losses within [0, 10]",
              check_mlp_smoke);
  return h.finish();
}
