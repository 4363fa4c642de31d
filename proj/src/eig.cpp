#include "minimax/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "minimax/errors.hpp"

namespace minimax {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double sign_like(double magnitude, double sign_of) {
  return sign_of >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Iterative row/column norm equalization by powers of two (similarity
// transform, so eigenvalues are unchanged and no back-transform is needed).
void balance(DenseMatrix& a) {
  const std::size_t n = a.rows();
  const double radix = 2.0;
  const double sq = radix * radix;
  bool converging = true;
  while (converging) {
    converging = false;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sq;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sq;
      }
      if ((c + r) / f < 0.95 * s) {
        converging = true;
        const double inv_f = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv_f;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form.
void hessenberg(DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (n < 3) return;
  Vec v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double col_norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) col_norm += a(i, k) * a(i, k);
    col_norm = std::sqrt(col_norm);
    if (col_norm == 0.0) continue;

    const double alpha = -sign_like(col_norm, a(k + 1, k));
    double vtv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k);
      if (i == k + 1) v[i] -= alpha;
      vtv += v[i] * v[i];
    }
    if (vtv == 0.0) continue;
    const double scale = 2.0 / vtv;

    // A <- H A, rows k+1..n-1
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
      s *= scale;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    // A <- A H, columns k+1..n-1
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= scale;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
// Classic EISPACK-style sweep with exceptional shifts at iterations 10 and 20
// and a cap of 30 per eigenvalue.
void hqr(DenseMatrix& h, std::vector<std::complex<double>>& out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(h.rows());
  out.assign(n, {});
  auto at = [&h](std::ptrdiff_t i, std::ptrdiff_t j) -> double& {
    return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };

  double anorm = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(i - 1, 0); j < n; ++j)
      anorm += std::abs(at(i, j));
  if (anorm == 0.0) return;  // zero matrix

  std::ptrdiff_t nn = n - 1;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, x = 0.0, y = 0.0, z = 0.0, w = 0.0;

  while (nn >= 0) {
    int its = 0;
    std::ptrdiff_t l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(at(l, l - 1)) <= kEps * s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      if (l < 0) l = 0;
      x = at(nn, nn);
      if (l == nn) {
        out[nn--] = {x + t, 0.0};
      } else {
        y = at(nn - 1, nn - 1);
        w = at(nn, nn - 1) * at(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_like(z, p);
            out[nn - 1] = out[nn] = {x + z, 0.0};
            if (z != 0.0) out[nn] = {x - w / z, 0.0};
          } else {
            out[nn - 1] = {x + p, z};
            out[nn] = {x + p, -z};
          }
          nn -= 2;
        } else {
          if (its == 30) {
            std::ostringstream msg;
            msg << "eigenvalues: qr iteration stalled; unreduced block of order "
                << (nn - l + 1) << " (rows " << l << ".." << nn << ")";
            throw NumericalError(msg.str());
          }
          if (its == 10 || its == 20) {
            t += x;
            for (std::ptrdiff_t i = 0; i <= nn; ++i) at(i, i) -= x;
            double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          std::ptrdiff_t m;
          for (m = nn - 2; m >= l; --m) {
            z = at(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / at(m + 1, m) + at(m, m + 1);
            q = at(m + 1, m + 1) - z - r - s;
            r = at(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) +
                               std::abs(at(m + 1, m + 1)));
            if (u <= kEps * v) break;
          }
          if (m < l) m = l;
          for (std::ptrdiff_t i = m + 2; i <= nn; ++i) {
            at(i, i - 2) = 0.0;
            if (i != m + 2) at(i, i - 3) = 0.0;
          }
          for (std::ptrdiff_t k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = at(k, k - 1);
              q = at(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = at(k + 2, k - 1);
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = sign_like(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) at(k, k - 1) = -at(k, k - 1);
            } else {
              at(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (std::ptrdiff_t j = k; j <= nn; ++j) {
              p = at(k, j) + q * at(k + 1, j);
              if (k != nn - 1) {
                p += r * at(k + 2, j);
                at(k + 2, j) -= p * z;
              }
              at(k + 1, j) -= p * y;
              at(k, j) -= p * x;
            }
            const std::ptrdiff_t mmin = nn < k + 3 ? nn : k + 3;
            for (std::ptrdiff_t i = l; i <= mmin; ++i) {
              p = x * at(i, k) + y * at(i, k + 1);
              if (k != nn - 1) {
                p += z * at(i, k + 2);
                at(i, k + 2) -= p * r;
              }
              at(i, k + 1) -= p * q;
              at(i, k) -= p;
            }
          }
        }
      }
    } while (l < nn - 1);
  }
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const DenseMatrix& m) {
  if (!m.square()) throw std::invalid_argument("eigenvalues: matrix not square");
  if (m.rows() > 400)
    throw std::invalid_argument("eigenvalues: order > 400 not supported");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j)))
        throw std::invalid_argument("eigenvalues: non-finite entry");

  DenseMatrix a = m;
  std::vector<std::complex<double>> eigs;
  if (a.rows() == 0) return eigs;
  if (a.rows() == 1) return {{a(0, 0), 0.0}};
  balance(a);
  hessenberg(a);
  hqr(a, eigs);
  return eigs;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& m) {
  if (!m.is_symmetric(1e-8 * (1.0 + m.norm_inf())))
    throw std::invalid_argument("symmetric_eigenvalues: matrix not symmetric");
  auto eigs = eigenvalues(m);
  std::vector<double> out;
  out.reserve(eigs.size());
  const double tol = 1e-7 * (1.0 + m.norm_inf());
  for (const auto& e : eigs) {
    if (std::abs(e.imag()) > tol)
      throw NumericalError("symmetric_eigenvalues: complex eigenvalue from symmetric input");
    out.push_back(e.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace minimax
