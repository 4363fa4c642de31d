#include "minimax/optimizer.hpp"

#include <cmath>
#include <sstream>

#include "minimax/errors.hpp"
#include "minimax/linear_solvers.hpp"

namespace minimax {
namespace {

constexpr std::string_view kRuleNames[kRuleCount] = {
    "gda",  "sga",     "conopt",    "ogda",         "cgd",
    "adam", "rmsprop", "acom_adam", "acom_rmsprop",
};

void require_finite(std::span<const double> v, Rule rule, std::string_view phase,
                    std::string_view player) {
  if (!all_finite(v)) {
    std::ostringstream msg;
    msg << rule_name(rule) << ": non-finite " << phase << " (" << player
        << "-player)";
    throw NumericalError(msg.str());
  }
}

bool any_nonzero(std::span<const double> v) {
  for (double x : v)
    if (x != 0.0) return true;
  return false;
}

Vec delta(const Vec& current, const Vec& prev) {
  Vec d = current;
  axpy(-1.0, prev, d);
  return d;
}

// Table-I second-order family. `xx_sign`: -1 ConOpt, +1 OGDA, 0 SGA.
// Cross terms resolve the f-only notation through g = -f:
//   x-row: dx = -(gx + gamma*D2xy f*(grad_y f) + s*gamma*D2xx f*gx)
//               = -gx + gamma*hvp_xy(gy) - s*gamma*hvp_xx(gx)
//   y-row (g-symmetric): dy = -gy - gamma*hvp_yx(gx) - s*gamma*hvp_yy(gy)
JointPoint table_step(const GameOracle& game, const OptimizerConfig& cfg,
                      const JointPoint& p, double xx_sign, Rule rule) {
  Vec gx = game.grad_x(p);
  Vec gy = game.grad_y(p);
  require_finite(gx, rule, "gradient", "x");
  require_finite(gy, rule, "gradient", "y");

  Vec dx = gx;
  scale(-1.0, dx);
  Vec dy = gy;
  scale(-1.0, dy);
  if (cfg.gamma != 0.0) {
    axpy(cfg.gamma, game.hvp_xy(p, gy), dx);
    axpy(-cfg.gamma, game.hvp_yx(p, gx), dy);
    if (xx_sign != 0.0) {
      axpy(xx_sign * cfg.gamma, game.hvp_xx(p, gx), dx);
      axpy(xx_sign * cfg.gamma, game.hvp_yy(p, gy), dy);
    }
  }

  JointPoint next = p;
  axpy(cfg.alpha, dx, next.x);
  axpy(cfg.alpha, dy, next.y);
  require_finite(next.x, rule, "parameter update", "x");
  require_finite(next.y, rule, "parameter update", "y");
  return next;
}

JointPoint cgd_step(const GameOracle& game, const OptimizerConfig& cfg,
                    const JointPoint& p, std::int64_t& cg_iters) {
  Vec gx = game.grad_x(p);
  Vec gy = game.grad_y(p);
  require_finite(gx, Rule::kCgd, "gradient", "x");
  require_finite(gy, Rule::kCgd, "gradient", "y");

  // rhs_x = grad_x f - gamma D2xy f (grad_y f) = gx + gamma*hvp_xy(gy)
  Vec rhs_x = gx;
  if (cfg.gamma != 0.0) axpy(cfg.gamma, game.hvp_xy(p, gy), rhs_x);
  // rhs_y = grad_y g - gamma D2yx g (grad_x g) = gy - gamma*hvp_yx(gx)
  Vec rhs_y = gy;
  if (cfg.gamma != 0.0) axpy(-cfg.gamma, game.hvp_yx(p, gx), rhs_y);

  const double eta2 = cfg.eta * cfg.eta;
  const auto op_x = [&](std::span<const double> v) {
    Vec r(v.begin(), v.end());
    axpy(eta2, game.hvp_xy(p, game.hvp_yx(p, v)), r);
    return r;
  };
  const auto op_y = [&](std::span<const double> v) {
    Vec r(v.begin(), v.end());
    axpy(eta2, game.hvp_yx(p, game.hvp_xy(p, v)), r);
    return r;
  };

  const std::size_t iters_x = cfg.cg_max_iter ? cfg.cg_max_iter : 10 * p.x.size();
  const std::size_t iters_y = cfg.cg_max_iter ? cfg.cg_max_iter : 10 * p.y.size();
  CgResult sx = cg_solve(op_x, rhs_x, cfg.cg_tol, iters_x);
  CgResult sy = cg_solve(op_y, rhs_y, cfg.cg_tol, iters_y);
  cg_iters = static_cast<std::int64_t>(sx.iterations + sy.iterations);

  JointPoint next = p;
  axpy(-cfg.alpha, sx.x, next.x);
  axpy(-cfg.alpha, sy.x, next.y);
  require_finite(next.x, Rule::kCgd, "parameter update", "x");
  require_finite(next.y, Rule::kCgd, "parameter update", "y");
  return next;
}

// ADAM family, with or without the second-order correction (Algorithm-style):
//   D = grad (+ diagonal-block hvp of the previous displacement)
//   m <- b1 m + (1-b1) D,  v <- b2 v + (1-b2) D^2
//   x <- x - alpha * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
JointPoint adam_step(const GameOracle& game, const OptimizerConfig& cfg,
                     const JointPoint& p, OptimizerState& st, bool corrected,
                     Rule rule) {
  auto [d_x, d_y] = corrected
                        ? corrected_gradient(game, p, st.prev)
                        : std::pair<Vec, Vec>{game.grad_x(p), game.grad_y(p)};
  require_finite(d_x, rule, corrected ? "corrected gradient" : "gradient", "x");
  require_finite(d_y, rule, corrected ? "corrected gradient" : "gradient", "y");

  const auto& k = kernels::active();
  const std::int64_t t = st.t + 1;
  k.ema(st.m_x.data(), d_x.data(), cfg.beta1, d_x.size());
  k.ema(st.m_y.data(), d_y.data(), cfg.beta1, d_y.size());
  k.ema_sq(st.v_x.data(), d_x.data(), cfg.beta2, d_x.size());
  k.ema_sq(st.v_y.data(), d_y.data(), cfg.beta2, d_y.size());

  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  JointPoint next = p;
  k.adam_apply(next.x.data(), st.m_x.data(), st.v_x.data(), cfg.alpha, bc1, bc2,
               cfg.eps, next.x.size());
  k.adam_apply(next.y.data(), st.m_y.data(), st.v_y.data(), cfg.alpha, bc1, bc2,
               cfg.eps, next.y.size());
  require_finite(next.x, rule, "parameter update", "x");
  require_finite(next.y, rule, "parameter update", "y");
  return next;
}

// RMSprop family, following the fixed-point map componentwise (with the
// descent sign): v_x <- (1-b1) v_x + b1 D^2, x <- x - h D / sqrt(v_x + eps);
// the y side decays with b2. No first moment, no bias correction.
JointPoint rmsprop_step(const GameOracle& game, const OptimizerConfig& cfg,
                        const JointPoint& p, OptimizerState& st, bool corrected,
                        Rule rule) {
  auto [d_x, d_y] = corrected
                        ? corrected_gradient(game, p, st.prev)
                        : std::pair<Vec, Vec>{game.grad_x(p), game.grad_y(p)};
  require_finite(d_x, rule, corrected ? "corrected gradient" : "gradient", "x");
  require_finite(d_y, rule, corrected ? "corrected gradient" : "gradient", "y");

  const auto& k = kernels::active();
  k.ema_sq(st.v_x.data(), d_x.data(), 1.0 - cfg.beta1, d_x.size());
  k.ema_sq(st.v_y.data(), d_y.data(), 1.0 - cfg.beta2, d_y.size());

  JointPoint next = p;
  k.rmsprop_apply(next.x.data(), d_x.data(), st.v_x.data(), cfg.alpha, cfg.eps,
                  next.x.size());
  k.rmsprop_apply(next.y.data(), d_y.data(), st.v_y.data(), cfg.alpha, cfg.eps,
                  next.y.size());
  require_finite(next.x, rule, "parameter update", "x");
  require_finite(next.y, rule, "parameter update", "y");
  return next;
}

}  // namespace

std::string_view rule_name(Rule rule) {
  return kRuleNames[static_cast<std::size_t>(rule)];
}

std::optional<Rule> rule_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRuleCount; ++i)
    if (kRuleNames[i] == name) return static_cast<Rule>(i);
  return std::nullopt;
}

Rule rule_at(std::size_t index) { return static_cast<Rule>(index); }

OptimizerConfig OptimizerConfig::defaults(Rule rule) {
  OptimizerConfig cfg;
  cfg.rule = rule;
  switch (rule) {
    case Rule::kGda:
      cfg.alpha = 0.01;
      cfg.gamma = 0.0;
      break;
    case Rule::kSga:
    case Rule::kConOpt:
    case Rule::kOgda:
      cfg.alpha = 0.01;
      cfg.gamma = 1.0;
      break;
    case Rule::kCgd:
      cfg.alpha = 1.0;
      cfg.gamma = 0.1;  // single knob: gamma defaults to eta
      cfg.eta = 0.1;
      break;
    case Rule::kAdam:
      cfg.alpha = 1e-3;
      cfg.beta1 = 0.9;
      cfg.beta2 = 0.999;
      break;
    case Rule::kRmsProp:
      cfg.alpha = 1e-3;
      cfg.beta1 = 0.99;
      cfg.beta2 = 0.99;
      break;
    case Rule::kAcomAdam:
    case Rule::kAcomRmsProp:
      cfg.alpha = 2e-4;
      cfg.beta1 = 0.5;
      cfg.beta2 = 0.99;
      break;
  }
  return cfg;
}

void OptimizerConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha: must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0))
    throw std::invalid_argument("beta1: must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0))
    throw std::invalid_argument("beta2: must be in [0, 1)");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma: must be >= 0");
  if (!(eta > 0.0)) throw std::invalid_argument("eta: must be > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("eps: must be > 0");
  if (!(cg_tol > 0.0)) throw std::invalid_argument("cg_tol: must be > 0");
}

OptimizerState OptimizerState::initial(const JointPoint& p) {
  OptimizerState st;
  st.prev = p;
  st.m_x.assign(p.x.size(), 0.0);
  st.m_y.assign(p.y.size(), 0.0);
  st.v_x.assign(p.x.size(), 0.0);
  st.v_y.assign(p.y.size(), 0.0);
  st.t = 0;
  return st;
}

std::pair<Vec, Vec> corrected_gradient(const GameOracle& game,
                                       const JointPoint& p,
                                       const JointPoint& prev) {
  Vec d_x = game.grad_x(p);
  Vec d_y = game.grad_y(p);
  const Vec delta_x = delta(p.x, prev.x);
  const Vec delta_y = delta(p.y, prev.y);
  // Skipping the zero-displacement product keeps the first corrected step
  // bit-identical to the uncorrected one.
  if (any_nonzero(delta_x)) axpy(1.0, game.hvp_xx(p, delta_x), d_x);
  if (any_nonzero(delta_y)) axpy(1.0, game.hvp_yy(p, delta_y), d_y);
  return {std::move(d_x), std::move(d_y)};
}

StepResult step(const GameOracle& game, const OptimizerConfig& cfg,
                const JointPoint& p, OptimizerState& state) {
  game.check_point(p);
  StepResult result;
  const auto start = std::chrono::steady_clock::now();
  switch (cfg.rule) {
    case Rule::kGda: {
      OptimizerConfig plain = cfg;
      plain.gamma = 0.0;
      result.point = table_step(game, plain, p, 0.0, Rule::kGda);
      break;
    }
    case Rule::kSga:
      result.point = table_step(game, cfg, p, 0.0, Rule::kSga);
      break;
    case Rule::kConOpt:
      result.point = table_step(game, cfg, p, -1.0, Rule::kConOpt);
      break;
    case Rule::kOgda:
      result.point = table_step(game, cfg, p, +1.0, Rule::kOgda);
      break;
    case Rule::kCgd:
      result.point = cgd_step(game, cfg, p, result.cg_iterations);
      break;
    case Rule::kAdam:
      result.point = adam_step(game, cfg, p, state, false, Rule::kAdam);
      break;
    case Rule::kAcomAdam:
      result.point = adam_step(game, cfg, p, state, true, Rule::kAcomAdam);
      break;
    case Rule::kRmsProp:
      result.point = rmsprop_step(game, cfg, p, state, false, Rule::kRmsProp);
      break;
    case Rule::kAcomRmsProp:
      result.point =
          rmsprop_step(game, cfg, p, state, true, Rule::kAcomRmsProp);
      break;
  }
  result.elapsed = std::chrono::steady_clock::now() - start;
  state.prev = p;
  state.t += 1;
  return result;
}

}  // namespace minimax
