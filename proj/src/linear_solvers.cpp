#include "minimax/linear_solvers.hpp"

#include <cmath>
#include <sstream>

#include "minimax/errors.hpp"

namespace minimax {

LuFactors lu_factor(const DenseMatrix& m) {
  if (!m.square()) throw std::invalid_argument("lu_factor: matrix not square");
  const std::size_t n = m.rows();
  LuFactors f{m, std::vector<std::size_t>(n), 1};
  const double pivot_floor = 1e-14 * m.norm_inf();
  DenseMatrix& a = f.lu;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    }
    if (best <= pivot_floor) {
      std::ostringstream msg;
      msg << "lu_factor: pivot " << best << " below floor " << pivot_floor
          << " at column " << k << " (matrix singular)";
      throw NumericalError(msg.str());
    }
    f.perm[k] = p;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      f.sign = -f.sign;
    }
    const double inv_pivot = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a(i, k) * inv_pivot;
      a(i, k) = l;
      if (l != 0.0)
        kernels::active().axpy(-l, &a(k, k + 1), &a(i, k + 1), n - k - 1);
    }
  }
  return f;
}

Vec lu_solve(const LuFactors& f, std::span<const double> rhs) {
  const std::size_t n = f.lu.rows();
  if (rhs.size() != n) throw std::invalid_argument("lu_solve: size mismatch");
  Vec x(rhs.begin(), rhs.end());
  // The factorization swaps full rows, so all permutations apply up front.
  for (std::size_t k = 0; k < n; ++k) std::swap(x[k], x[f.perm[k]]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i < n; ++i) x[i] -= f.lu(i, k) * x[k];
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

Vec lu_solve(const DenseMatrix& m, std::span<const double> rhs) {
  return lu_solve(lu_factor(m), rhs);
}

double lu_det(const LuFactors& f) {
  double d = f.sign;
  for (std::size_t i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
  return d;
}

CgResult cg_solve(const LinearOperator& apply, std::span<const double> rhs,
                  double tol, std::size_t max_iter) {
  const std::size_t n = rhs.size();
  if (max_iter == 0) max_iter = 10 * n;
  const double rhs_norm = norm2(rhs);

  CgResult res;
  res.x.assign(n, 0.0);
  if (rhs_norm == 0.0) return res;

  Vec r(rhs.begin(), rhs.end());
  Vec p = r;
  double rr = dot(r, r);
  const double target = tol * rhs_norm;

  for (std::size_t it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= target) {
      res.iterations = it;
      res.residual = std::sqrt(rr) / rhs_norm;
      return res;
    }
    Vec ap = apply(p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      std::ostringstream msg;
      msg << "cg_solve: operator not positive definite (p'Ap = " << pap << ")";
      throw NumericalError(msg.str());
    }
    const double alpha = rr / pap;
    axpy(alpha, p, res.x);
    axpy(-alpha, ap, r);
    const double rr_next = dot(r, r);
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  if (std::sqrt(rr) <= target) {
    res.iterations = max_iter;
    res.residual = std::sqrt(rr) / rhs_norm;
    return res;
  }
  std::ostringstream msg;
  msg << "cg_solve: no convergence after " << max_iter
      << " iterations (residual " << std::sqrt(rr) / rhs_norm << ", tol " << tol
      << ")";
  throw NumericalError(msg.str());
}

}  // namespace minimax
