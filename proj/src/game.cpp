#include "minimax/game.hpp"

#include <stdexcept>

namespace minimax {

DenseBlocks GameOracle::dense_blocks(const JointPoint& p) const {
  // Column-by-column assembly through the matrix-free products. Only called
  // at small joint dimension, so the m+n oracle evaluations are affordable.
  if (!has_dense_blocks())
    throw std::invalid_argument("dense_blocks: joint dimension too large");
  check_point(p);
  const std::size_t m = dim_x();
  const std::size_t n = dim_y();
  DenseBlocks blocks{DenseMatrix(m, m), DenseMatrix(n, n), DenseMatrix(m, n),
                     DenseMatrix(n, m)};
  Vec e_x(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    e_x[j] = 1.0;
    const Vec cxx = hvp_xx(p, e_x);
    const Vec cyx = hvp_yx(p, e_x);
    for (std::size_t i = 0; i < m; ++i) blocks.dxx_f(i, j) = cxx[i];
    for (std::size_t i = 0; i < n; ++i) blocks.dyx_f(i, j) = cyx[i];
    e_x[j] = 0.0;
  }
  Vec e_y(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e_y[j] = 1.0;
    const Vec cyy = hvp_yy(p, e_y);
    const Vec cxy = hvp_xy(p, e_y);
    for (std::size_t i = 0; i < n; ++i) blocks.dyy_g(i, j) = cyy[i];
    for (std::size_t i = 0; i < m; ++i) blocks.dxy_f(i, j) = cxy[i];
    e_y[j] = 0.0;
  }
  return blocks;
}

void GameOracle::check_point(const JointPoint& p) const {
  if (p.x.size() != dim_x() || p.y.size() != dim_y())
    throw std::invalid_argument("point dimensions do not match game");
  if (!all_finite(p.x) || !all_finite(p.y))
    throw std::invalid_argument("point has non-finite entries");
}

JointPoint GameOracle::initial_point(std::uint64_t seed) const {
  NormalSampler rng(seed);
  return {rng.vector(dim_x()), rng.vector(dim_y())};
}

}  // namespace minimax
