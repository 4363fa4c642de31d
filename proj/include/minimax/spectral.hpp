#pragma once

#include <complex>
#include <string>
#include <vector>

#include "nlohmann/json_fwd.hpp"

#include "minimax/eig.hpp"
#include "minimax/game.hpp"
#include "minimax/optimizer.hpp"

namespace minimax {

// V(p) = (grad_x f, grad_y g), the simultaneous own-loss gradient field; the
// steppers descend along it.
Vec vector_field(const GameOracle& game, const JointPoint& p);

// Jacobian of V for zero-sum games, assembled blockwise as
//   [[ D2xx f,  D2xy f ],
//    [-D2yx f, -D2yy f ]]
// from dense blocks when available, otherwise column-by-column through the
// matrix-free products (joint dimension <= 200). Rejects non-zero-sum games.
DenseMatrix assemble_vprime(const GameOracle& game, const JointPoint& p);

struct NashCheck {
  bool vprime_nsd = false;  // symmetric part of V' negative semi-definite
  bool dxx_nsd = false;     // D2xx f NSD
  bool dyy_psd = false;     // D2yy f PSD
};

// Semi-definiteness decided against +-1e-10 on the extremal eigenvalues. For
// zero-sum games the three verdicts satisfy vprime_nsd <=> dxx_nsd && dyy_psd
// (the cross blocks of sym(V') cancel exactly).
NashCheck check_nash_conditions(const GameOracle& game, const JointPoint& p);

// Which moment-decay convention the fixed-point matrices mirror:
//   kFixedPointMap - diagonal -beta/h (matches the RMSprop-style stepper);
//   kAlgorithm1    - diagonal -(1-beta)/h (ADAM-style accumulator).
enum class MomentConvention { kFixedPointMap, kAlgorithm1 };

// Fixed-point matrices A with F' = I + hA for one descent step at a
// stationary point. Game blocks carry the descent sign (-V'/sqrt(eps)); the
// moment block is diagonal per parameter.
DenseMatrix build_a_rmsprop(const GameOracle& game, const JointPoint& p,
                            double beta1, double beta2, double h, double eps,
                            MomentConvention conv = MomentConvention::kFixedPointMap);

// State order (x, y, m_x, m_y, v_x, v_y); see the companion derivation in
// spectral.cpp.
DenseMatrix build_a_adam(const GameOracle& game, const JointPoint& p,
                         double beta1, double beta2, double h, double eps,
                         MomentConvention conv = MomentConvention::kFixedPointMap);

struct HBound {
  double value = 0.0;  // +inf when no eigenvalue constrains the step
  bool defined = false;
};

// Largest step size keeping every |1 + h*lambda| < 1:
//   min over lambda of (1/|Re|) * 2 / (1 + (Im/Re)^2).
// Undefined (flagged) when any eigenvalue has nonnegative real part.
HBound h_bound(const std::vector<std::complex<double>>& eigs);

struct SpectralReport {
  std::string rule;
  std::string game;
  std::vector<std::complex<double>> eigs_vprime;
  std::vector<double> eigs_dxx;  // spectrum of D2xx f
  std::vector<double> eigs_dyy;  // spectrum of D2yy f
  std::vector<std::complex<double>> eigs_a;
  double spectral_radius_f = 0.0;  // max |1 + h*lambda| over eigs_a
  HBound bound;
  bool certified = false;  // spectral_radius_f < 1
  double h_used = 0.0;
  double eps_used = 0.0;
  double stationarity = 0.0;  // |V(p)|
  bool at_fixed_point = false;
  MomentConvention convention = MomentConvention::kFixedPointMap;

  nlohmann::json to_json() const;
};

// Builds the rule-appropriate A (GDA: -V'; ACOM variants: the matrices
// above with h = cfg.alpha, eps = cfg.eps), its spectrum, the Lemma-style
// h-bound and the certification verdict. Only GDA, ACOM_RMSPROP and
// ACOM_ADAM support fixed-point analysis.
SpectralReport certify(const GameOracle& game, const JointPoint& p,
                       const OptimizerConfig& cfg,
                       MomentConvention conv = MomentConvention::kFixedPointMap);

}  // namespace minimax
