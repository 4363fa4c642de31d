#include <cmath>
#include <stdexcept>
#include <utility>

#include "minimax/games.hpp"
#include "minimax/tape.hpp"

// The analytic zoo: bilinear, quadratic and the 1-D GAN caricature. All are
// zero-sum with hand-written derivatives; the finite-difference oracles in
// the tests referee every formula here.

namespace minimax {
namespace {

class BilinearGame final : public GameOracle {
 public:
  explicit BilinearGame(DenseMatrix b) : b_(std::move(b)) {
    for (std::size_t i = 0; i < b_.rows(); ++i)
      for (std::size_t j = 0; j < b_.cols(); ++j)
        if (!std::isfinite(b_(i, j)))
          throw std::invalid_argument("bilinear_game: B has non-finite entries");
  }

  std::string_view name() const override { return "bilinear"; }
  std::size_t dim_x() const override { return b_.rows(); }
  std::size_t dim_y() const override { return b_.cols(); }
  bool is_zero_sum() const override { return true; }

  double loss_x(const JointPoint& p) const override {
    check_point(p);
    return dot(p.x, b_.apply(p.y));
  }
  double loss_y(const JointPoint& p) const override { return -loss_x(p); }

  Vec grad_x(const JointPoint& p) const override {
    check_point(p);
    return b_.apply(p.y);
  }
  Vec grad_y(const JointPoint& p) const override {
    check_point(p);
    Vec g = b_.apply_transposed(p.x);
    scale(-1.0, g);
    return g;
  }

  Vec hvp_xx(const JointPoint& p, std::span<const double>) const override {
    check_point(p);
    return Vec(dim_x(), 0.0);
  }
  Vec hvp_yy(const JointPoint& p, std::span<const double>) const override {
    check_point(p);
    return Vec(dim_y(), 0.0);
  }
  Vec hvp_xy(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    return b_.apply(v);
  }
  Vec hvp_yx(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    return b_.apply_transposed(v);
  }

  DenseBlocks dense_blocks(const JointPoint& p) const override {
    check_point(p);
    return {DenseMatrix(dim_x(), dim_x()), DenseMatrix(dim_y(), dim_y()), b_,
            b_.transposed()};
  }

 private:
  DenseMatrix b_;
};

class QuadraticGame final : public GameOracle {
 public:
  QuadraticGame(DenseMatrix a_xx, DenseMatrix a_yy, DenseMatrix b, Vec b_x,
                Vec b_y)
      : a_xx_(std::move(a_xx)),
        a_yy_(std::move(a_yy)),
        b_(std::move(b)),
        b_x_(std::move(b_x)),
        b_y_(std::move(b_y)) {
    const std::size_t m = a_xx_.rows();
    const std::size_t n = a_yy_.rows();
    if (!a_xx_.square() || !a_yy_.square())
      throw std::invalid_argument("quadratic_game: Axx/Ayy must be square");
    if (b_.rows() != m || b_.cols() != n)
      throw std::invalid_argument("quadratic_game: B must be m x n");
    if (!a_xx_.is_symmetric(1e-10 * (1.0 + a_xx_.norm_inf())))
      throw std::invalid_argument("quadratic_game: Axx not symmetric");
    if (!a_yy_.is_symmetric(1e-10 * (1.0 + a_yy_.norm_inf())))
      throw std::invalid_argument("quadratic_game: Ayy not symmetric");
    if (b_x_.empty()) b_x_.assign(m, 0.0);
    if (b_y_.empty()) b_y_.assign(n, 0.0);
    if (b_x_.size() != m || b_y_.size() != n)
      throw std::invalid_argument("quadratic_game: linear term size mismatch");
  }

  std::string_view name() const override { return "quadratic"; }
  std::size_t dim_x() const override { return a_xx_.rows(); }
  std::size_t dim_y() const override { return a_yy_.rows(); }
  bool is_zero_sum() const override { return true; }

  double loss_x(const JointPoint& p) const override {
    check_point(p);
    const Vec axx_x = a_xx_.apply(p.x);
    const Vec by = b_.apply(p.y);
    const Vec ayy_y = a_yy_.apply(p.y);
    return 0.5 * dot(p.x, axx_x) + dot(p.x, by) + 0.5 * dot(p.y, ayy_y) +
           dot(b_x_, p.x) + dot(b_y_, p.y);
  }
  double loss_y(const JointPoint& p) const override { return -loss_x(p); }

  Vec grad_x(const JointPoint& p) const override {
    check_point(p);
    Vec g = a_xx_.apply(p.x);
    const Vec by = b_.apply(p.y);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += by[i] + b_x_[i];
    return g;
  }
  Vec grad_y(const JointPoint& p) const override {
    check_point(p);
    // grad_y g = -(B'x + Ayy y + by)
    Vec g = b_.apply_transposed(p.x);
    const Vec ay = a_yy_.apply(p.y);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -(g[i] + ay[i] + b_y_[i]);
    return g;
  }

  Vec hvp_xx(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    return a_xx_.apply(v);
  }
  Vec hvp_yy(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    Vec r = a_yy_.apply(v);  // D2yy g = -Ayy
    scale(-1.0, r);
    return r;
  }
  Vec hvp_xy(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    return b_.apply(v);
  }
  Vec hvp_yx(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    return b_.apply_transposed(v);
  }

  DenseBlocks dense_blocks(const JointPoint& p) const override {
    check_point(p);
    DenseMatrix dyy_g = a_yy_;
    for (std::size_t i = 0; i < dyy_g.rows(); ++i)
      for (std::size_t j = 0; j < dyy_g.cols(); ++j) dyy_g(i, j) = -a_yy_(i, j);
    return {a_xx_, dyy_g, b_, b_.transposed()};
  }

  // Stationary point: solve [[Axx, B], [B', Ayy]] p = -(bx, by).
  const DenseMatrix& a_xx() const { return a_xx_; }
  const DenseMatrix& a_yy() const { return a_yy_; }
  const DenseMatrix& b() const { return b_; }

 private:
  DenseMatrix a_xx_, a_yy_, b_;
  Vec b_x_, b_y_;
};

class DiracGanGame final : public GameOracle {
 public:
  std::string_view name() const override { return "dirac"; }
  std::size_t dim_x() const override { return 1; }
  std::size_t dim_y() const override { return 1; }
  bool is_zero_sum() const override { return true; }

  double loss_x(const JointPoint& p) const override {
    check_point(p);
    return stable::softplus(p.x[0] * p.y[0]);
  }
  double loss_y(const JointPoint& p) const override { return -loss_x(p); }

  Vec grad_x(const JointPoint& p) const override {
    check_point(p);
    return {stable::logistic(p.x[0] * p.y[0]) * p.y[0]};
  }
  Vec grad_y(const JointPoint& p) const override {
    check_point(p);
    return {-stable::logistic(p.x[0] * p.y[0]) * p.x[0]};
  }

  // With u = theta*psi and s = logistic(u): f'' blocks are
  //   D2xx f = s(1-s) psi^2,  D2xy f = s(1-s) theta psi + s,
  //   D2yy f = s(1-s) theta^2.
  Vec hvp_xx(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    return {curvature(p) * p.y[0] * p.y[0] * v[0]};
  }
  Vec hvp_yy(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    return {-curvature(p) * p.x[0] * p.x[0] * v[0]};
  }
  Vec hvp_xy(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    return {mixed(p) * v[0]};
  }
  Vec hvp_yx(const JointPoint& p, std::span<const double> v) const override {
    check_point(p);
    return {mixed(p) * v[0]};
  }

  DenseBlocks dense_blocks(const JointPoint& p) const override {
    check_point(p);
    DenseMatrix dxx(1, 1), dyy_g(1, 1), dxy(1, 1), dyx(1, 1);
    dxx(0, 0) = curvature(p) * p.y[0] * p.y[0];
    dyy_g(0, 0) = -curvature(p) * p.x[0] * p.x[0];
    dxy(0, 0) = dyx(0, 0) = mixed(p);
    return {dxx, dyy_g, dxy, dyx};
  }

 private:
  static double curvature(const JointPoint& p) {
    const double s = stable::logistic(p.x[0] * p.y[0]);
    return s * (1.0 - s);
  }
  static double mixed(const JointPoint& p) {
    const double u = p.x[0] * p.y[0];
    const double s = stable::logistic(u);
    return s * (1.0 - s) * u + s;
  }
};

}  // namespace

GamePtr bilinear_game(DenseMatrix b) {
  return std::make_shared<BilinearGame>(std::move(b));
}

GamePtr quadratic_game(DenseMatrix a_xx, DenseMatrix a_yy, DenseMatrix b,
                       Vec b_x, Vec b_y) {
  return std::make_shared<QuadraticGame>(std::move(a_xx), std::move(a_yy),
                                         std::move(b), std::move(b_x),
                                         std::move(b_y));
}

GamePtr quadratic_game_1d(double a_xx, double a_yy, double b, double b_x,
                          double b_y) {
  DenseMatrix axx(1, 1), ayy(1, 1), bm(1, 1);
  axx(0, 0) = a_xx;
  ayy(0, 0) = a_yy;
  bm(0, 0) = b;
  return quadratic_game(axx, ayy, bm, {b_x}, {b_y});
}

GamePtr dirac_gan_game() { return std::make_shared<DiracGanGame>(); }

}  // namespace minimax
