#pragma once

#include <functional>

#include "minimax/dense_matrix.hpp"
#include "minimax/vec.hpp"

namespace minimax {

// LU factorization with partial pivoting. Throws NumericalError when a pivot
// falls below 1e-14 * |M|_inf (matrix numerically singular).
struct LuFactors {
  DenseMatrix lu;             // L (unit diagonal, strictly lower) and U packed
  std::vector<std::size_t> perm;
  int sign = 1;               // permutation parity, for the determinant
};

LuFactors lu_factor(const DenseMatrix& m);
Vec lu_solve(const LuFactors& f, std::span<const double> rhs);
Vec lu_solve(const DenseMatrix& m, std::span<const double> rhs);
double lu_det(const LuFactors& f);

struct CgResult {
  Vec x;
  std::size_t iterations = 0;
  double residual = 0.0;  // final |r| / |rhs|
};

using LinearOperator = std::function<Vec(std::span<const double>)>;

// Conjugate gradients for a symmetric positive definite operator. Converges
// when |A x - b| <= tol * |b|; throws NumericalError with the final residual
// if max_iter is exhausted.
CgResult cg_solve(const LinearOperator& apply, std::span<const double> rhs,
                  double tol = 1e-10, std::size_t max_iter = 0);

}  // namespace minimax
