#include "minimax/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace minimax {
namespace {

constexpr double kSemiDefTol = 1e-10;

DenseBlocks blocks_at(const GameOracle& game, const JointPoint& p) {
  if (!game.has_dense_blocks())
    throw std::invalid_argument(
        "spectral analysis needs dense blocks (joint dimension <= 200)");
  return game.dense_blocks(p);
}

void require_zero_sum(const GameOracle& game) {
  if (!game.is_zero_sum())
    throw std::invalid_argument(
        "spectral analysis assumes a zero-sum game (g = -f)");
}

// D2yy f = -D2yy g for zero-sum games.
DenseMatrix dyy_f_from(const DenseBlocks& blocks) {
  DenseMatrix dyy = blocks.dyy_g;
  for (std::size_t i = 0; i < dyy.rows(); ++i)
    for (std::size_t j = 0; j < dyy.cols(); ++j) dyy(i, j) = -dyy(i, j);
  return dyy;
}

double max_abs(const std::vector<std::complex<double>>& eigs) {
  double m = 0.0;
  for (const auto& e : eigs) m = std::max(m, std::abs(e));
  return m;
}

}  // namespace

Vec vector_field(const GameOracle& game, const JointPoint& p) {
  Vec v = game.grad_x(p);
  const Vec gy = game.grad_y(p);
  v.insert(v.end(), gy.begin(), gy.end());
  return v;
}

DenseMatrix assemble_vprime(const GameOracle& game, const JointPoint& p) {
  require_zero_sum(game);
  const DenseBlocks blocks = blocks_at(game, p);
  const std::size_t m = game.dim_x();
  const std::size_t n = game.dim_y();
  DenseMatrix v(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) v(i, j) = blocks.dxx_f(i, j);
    for (std::size_t j = 0; j < n; ++j) v(i, m + j) = blocks.dxy_f(i, j);
  }
  // Rows of grad_y g: -D2yx f and -D2yy f = +D2yy g.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) v(m + i, j) = -blocks.dyx_f(i, j);
    for (std::size_t j = 0; j < n; ++j) v(m + i, m + j) = blocks.dyy_g(i, j);
  }
  return v;
}

NashCheck check_nash_conditions(const GameOracle& game, const JointPoint& p) {
  require_zero_sum(game);
  const DenseBlocks blocks = blocks_at(game, p);
  const double scale_xx = 1.0 + blocks.dxx_f.norm_inf();
  const double scale_yy = 1.0 + blocks.dyy_g.norm_inf();
  if (!blocks.dxx_f.is_symmetric(1e-8 * scale_xx) ||
      !blocks.dyy_g.is_symmetric(1e-8 * scale_yy))
    throw std::invalid_argument(
        "check_nash_conditions: asymmetric diagonal blocks");

  const DenseMatrix vprime = assemble_vprime(game, p);
  DenseMatrix sym(vprime.rows(), vprime.cols());
  for (std::size_t i = 0; i < vprime.rows(); ++i)
    for (std::size_t j = 0; j < vprime.cols(); ++j)
      sym(i, j) = 0.5 * (vprime(i, j) + vprime(j, i));

  const auto sym_eigs = symmetric_eigenvalues(sym);
  const auto dxx_eigs = symmetric_eigenvalues(blocks.dxx_f);
  const auto dyy_eigs = symmetric_eigenvalues(dyy_f_from(blocks));

  NashCheck out;
  out.vprime_nsd = sym_eigs.back() <= kSemiDefTol;
  out.dxx_nsd = dxx_eigs.back() <= kSemiDefTol;
  out.dyy_psd = dyy_eigs.front() >= -kSemiDefTol;
  return out;
}

DenseMatrix build_a_rmsprop(const GameOracle& game, const JointPoint& p,
                            double beta1, double beta2, double h, double eps,
                            MomentConvention conv) {
  require_zero_sum(game);
  if (!(h > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("build_a_rmsprop: h and eps must be > 0");
  const DenseMatrix vprime = assemble_vprime(game, p);
  const std::size_t m = game.dim_x();
  const std::size_t n = game.dim_y();
  const std::size_t d = m + n;
  const double inv_sqrt_eps = 1.0 / std::sqrt(eps);

  // State (x, y, v_x, v_y). One descent step at a stationary point
  // linearizes to F' = I + hA with the game block -V'/sqrt(eps) and the
  // moment coordinates decaying on their own.
  DenseMatrix a(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = -inv_sqrt_eps * vprime(i, j);
  const double bx = conv == MomentConvention::kFixedPointMap ? beta1 : 1.0 - beta1;
  const double by = conv == MomentConvention::kFixedPointMap ? beta2 : 1.0 - beta2;
  for (std::size_t i = 0; i < m; ++i) a(d + i, d + i) = -bx / h;
  for (std::size_t i = 0; i < n; ++i) a(d + m + i, d + m + i) = -by / h;
  return a;
}

DenseMatrix build_a_adam(const GameOracle& game, const JointPoint& p,
                         double beta1, double beta2, double h, double eps,
                         MomentConvention conv) {
  require_zero_sum(game);
  if (!(h > 0.0) || !(eps > 0.0))
    throw std::invalid_argument("build_a_adam: h and eps must be > 0");
  const DenseMatrix vprime = assemble_vprime(game, p);
  const std::size_t d = game.dim_x() + game.dim_y();
  const double inv_sqrt_eps = 1.0 / std::sqrt(eps);

  // State (x, y, m_x, m_y, v_x, v_y); at a stationary point with zeroed
  // moments one descent step linearizes to F' = I + hA with
  //   position rows:  d(next_p)/dm = -h/sqrt(eps)
  //   m rows:         m' = (1-b1) m + b1 D  =>  (b1/h) V' and -(b1/h) I
  //   v rows:         v' = (1-b2) v + O(D^2) =>  -(b2/h) I
  // (the kAlgorithm1 convention swaps beta <-> 1-beta in the m/v rows).
  const double bm = conv == MomentConvention::kFixedPointMap ? beta1 : 1.0 - beta1;
  const double bv = conv == MomentConvention::kFixedPointMap ? beta2 : 1.0 - beta2;
  DenseMatrix a(3 * d, 3 * d);
  for (std::size_t i = 0; i < d; ++i) {
    a(i, d + i) = -inv_sqrt_eps;
    for (std::size_t j = 0; j < d; ++j) a(d + i, j) = (bm / h) * vprime(i, j);
    a(d + i, d + i) = -bm / h;
    a(2 * d + i, 2 * d + i) = -bv / h;
  }
  return a;
}

HBound h_bound(const std::vector<std::complex<double>>& eigs) {
  HBound out;
  const double scale = max_abs(eigs);
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (const auto& e : eigs) {
    if (e.real() >= -tol) return out;  // not certifiable: flagged undefined
  }
  out.defined = true;
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& e : eigs) {
    const double ratio = e.imag() / e.real();
    const double b = (1.0 / std::abs(e.real())) * 2.0 / (1.0 + ratio * ratio);
    out.value = std::min(out.value, b);
  }
  return out;
}

SpectralReport certify(const GameOracle& game, const JointPoint& p,
                       const OptimizerConfig& cfg, MomentConvention conv) {
  require_zero_sum(game);
  SpectralReport report;
  report.rule = std::string(rule_name(cfg.rule));
  report.game = std::string(game.name());
  report.h_used = cfg.alpha;
  report.eps_used = cfg.eps;
  report.convention = conv;

  const DenseMatrix vprime = assemble_vprime(game, p);
  report.eigs_vprime = eigenvalues(vprime);
  const DenseBlocks blocks = blocks_at(game, p);
  report.eigs_dxx = symmetric_eigenvalues(blocks.dxx_f);
  report.eigs_dyy = symmetric_eigenvalues(dyy_f_from(blocks));

  const Vec v = vector_field(game, p);
  report.stationarity = norm2(v);
  report.at_fixed_point =
      report.stationarity <= 1e-8 * (1.0 + norm2(p.flat()));

  DenseMatrix a;
  switch (cfg.rule) {
    case Rule::kGda: {
      // Descent map p - hV: A = -V' with no eps scaling.
      const std::size_t d = vprime.rows();
      a = DenseMatrix(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a(i, j) = -vprime(i, j);
      break;
    }
    case Rule::kAcomRmsProp:
      a = build_a_rmsprop(game, p, cfg.beta1, cfg.beta2, cfg.alpha, cfg.eps,
                          conv);
      break;
    case Rule::kAcomAdam:
      a = build_a_adam(game, p, cfg.beta1, cfg.beta2, cfg.alpha, cfg.eps, conv);
      break;
    default:
      throw std::invalid_argument(
          "certify: fixed-point analysis supports gda, acom_rmsprop and "
          "acom_adam only");
  }

  report.eigs_a = eigenvalues(a);
  report.bound = h_bound(report.eigs_a);
  double rho = 0.0;
  for (const auto& lambda : report.eigs_a)
    rho = std::max(rho, std::abs(1.0 + cfg.alpha * lambda));
  report.spectral_radius_f = rho;
  report.certified = rho < 1.0;
  return report;
}

nlohmann::json SpectralReport::to_json() const {
  auto complex_list = [](const std::vector<std::complex<double>>& eigs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : eigs) arr.push_back({e.real(), e.imag()});
    return arr;
  };
  nlohmann::json j;
  j["rule"] = rule;
  j["game"] = game;
  j["eigs_vprime"] = complex_list(eigs_vprime);
  j["eigs_dxx"] = eigs_dxx;
  j["eigs_dyy"] = eigs_dyy;
  j["eigs_A"] = complex_list(eigs_a);
  j["spectral_radius_F"] = spectral_radius_f;
  j["h_bound"] = bound.defined
                     ? (std::isinf(bound.value)
                            ? nlohmann::json("inf")
                            : nlohmann::json(bound.value))
                     : nlohmann::json();
  j["h_bound_defined"] = bound.defined;
  j["certified"] = certified;
  j["h_used"] = h_used;
  j["eps_used"] = eps_used;
  j["stationarity"] = stationarity;
  j["at_fixed_point"] = at_fixed_point;
  j["moment_convention"] = convention == MomentConvention::kFixedPointMap
                               ? "fixed_point_map"
                               : "algorithm1";
  return j;
}

}  // namespace minimax
