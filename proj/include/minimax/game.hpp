#pragma once

#include <memory>
#include <span>
#include <string_view>

#include "minimax/dense_matrix.hpp"
#include "minimax/vec.hpp"

namespace minimax {

// Concatenated player parameters: x (player 1, descends f) and y (player 2,
// descends g). For zero-sum games g = -f.
struct JointPoint {
  Vec x;
  Vec y;

  std::size_t dim() const { return x.size() + y.size(); }

  Vec flat() const {
    Vec p;
    p.reserve(dim());
    p.insert(p.end(), x.begin(), x.end());
    p.insert(p.end(), y.begin(), y.end());
    return p;
  }

  static JointPoint split(std::span<const double> p, std::size_t m) {
    return {Vec(p.begin(), p.begin() + m), Vec(p.begin() + m, p.end())};
  }
};

// Second-derivative blocks as dense matrices (small games only).
// dxx_f = D2xx f, dyy_g = D2yy g, dxy_f = D2xy f, dyx_f = D2yx f.
struct DenseBlocks {
  DenseMatrix dxx_f;
  DenseMatrix dyy_g;
  DenseMatrix dxy_f;
  DenseMatrix dyx_f;
};

// A two-player game supplying losses, own-loss gradients and matrix-free
// second-derivative products, all evaluated at a joint point. Instances are
// immutable after construction; evaluations are pure functions of the point.
class GameOracle {
 public:
  virtual ~GameOracle() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t dim_x() const = 0;
  virtual std::size_t dim_y() const = 0;
  virtual bool is_zero_sum() const = 0;

  virtual double loss_x(const JointPoint& p) const = 0;  // f(x, y)
  virtual double loss_y(const JointPoint& p) const = 0;  // g(x, y)
  virtual Vec grad_x(const JointPoint& p) const = 0;     // grad_x f
  virtual Vec grad_y(const JointPoint& p) const = 0;     // grad_y g

  // D2xx f . v (v in R^m), D2yy g . v (v in R^n)
  virtual Vec hvp_xx(const JointPoint& p, std::span<const double> v) const = 0;
  virtual Vec hvp_yy(const JointPoint& p, std::span<const double> v) const = 0;
  // D2xy f . v (v in R^n), D2yx f . v (v in R^m)
  virtual Vec hvp_xy(const JointPoint& p, std::span<const double> v) const = 0;
  virtual Vec hvp_yx(const JointPoint& p, std::span<const double> v) const = 0;

  // Dense blocks are offered only up to joint dimension 200 (spectral cost).
  virtual bool has_dense_blocks() const { return dim_x() + dim_y() <= 200; }
  // Default implementation assembles the blocks from hvps on basis vectors.
  virtual DenseBlocks dense_blocks(const JointPoint& p) const;

  // Seeded starting point; games may override with a sensible scale.
  virtual JointPoint initial_point(std::uint64_t seed) const;

  // Throws std::invalid_argument on dimension mismatch or non-finite entries.
  void check_point(const JointPoint& p) const;
};

using GamePtr = std::shared_ptr<const GameOracle>;

}  // namespace minimax
