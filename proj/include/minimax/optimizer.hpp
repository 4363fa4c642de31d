#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "minimax/game.hpp"

namespace minimax {

enum class Rule {
  kGda,
  kSga,
  kConOpt,
  kOgda,
  kCgd,
  kAdam,
  kRmsProp,
  kAcomAdam,
  kAcomRmsProp,
};

std::string_view rule_name(Rule rule);
std::optional<Rule> rule_from_name(std::string_view name);
constexpr std::size_t kRuleCount = 9;
Rule rule_at(std::size_t index);

struct OptimizerConfig {
  Rule rule = Rule::kGda;
  double alpha = 0.01;   // learning rate / step size h
  double beta1 = 0.9;    // first-moment decay (ADAM) / x-side v decay (RMSprop)
  double beta2 = 0.999;  // second-moment decay (ADAM) / y-side v decay (RMSprop)
  double gamma = 1.0;    // second-order coefficient (SGA/ConOpt/OGDA/CGD)
  double eta = 0.1;      // CGD regularization
  double eps = 1e-8;     // numerical floor
  double cg_tol = 1e-10;
  std::size_t cg_max_iter = 0;  // 0: 10 * dimension

  static OptimizerConfig defaults(Rule rule);
  void validate() const;  // throws std::invalid_argument naming the field
};

struct OptimizerState {
  JointPoint prev;  // previous iterate; delta_x = x_t - prev.x
  Vec m_x, m_y;     // first moments
  Vec v_x, v_y;     // second moments, elementwise >= 0
  std::int64_t t = 0;

  static OptimizerState initial(const JointPoint& p);
};

struct StepResult {
  JointPoint point;
  std::chrono::nanoseconds elapsed{0};  // update computation only
  std::int64_t cg_iterations = 0;       // CGD inner-solver work, else 0
};

// One simultaneous update: all derivatives are evaluated at `p`, the state is
// advanced (prev <- p, t <- t+1, moments updated where the rule uses them).
// Throws NumericalError on non-finite intermediates, naming the phase.
StepResult step(const GameOracle& game, const OptimizerConfig& cfg,
                const JointPoint& p, OptimizerState& state);

// The second-order corrected gradients
//   D_x = grad_x f + D2xx f (x - x_prev),  D_y = grad_y g + D2yy g (y - y_prev).
std::pair<Vec, Vec> corrected_gradient(const GameOracle& game,
                                       const JointPoint& p,
                                       const JointPoint& prev);

}  // namespace minimax
