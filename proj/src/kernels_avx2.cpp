// AVX2 variants. Compiled with -mavx2 (see CMakeLists); only reachable after
// the runtime cpu probe succeeds. Elementwise kernels mirror the scalar
// per-element operation order exactly (mul/add/div/sqrt, no fma), so they are
// bit-identical to the reference. dot/matvec accumulate in four lanes and
// reassociate the sum.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "minimax/kernels.hpp"

namespace minimax::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(xv, yv));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    __m256d xv = _mm256_loadu_pd(x + i);
    yv = _mm256_add_pd(yv, _mm256_mul_pd(av, xv));
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(double a, double* x, std::size_t n) {
  __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void matvec_avx2(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = m + i * cols;
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      __m256d rv = _mm256_loadu_pd(row + j);
      __m256d xv = _mm256_loadu_pd(x + j);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(rv, xv));
    }
    double r = hsum(acc);
    for (; j < cols; ++j) r += row[j] * x[j];
    y[i] = r;
  }
}

void matvec_t_avx2(const double* m, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = m + i * cols;
    __m256d xi = _mm256_set1_pd(x[i]);
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      __m256d yv = _mm256_loadu_pd(y + j);
      yv = _mm256_add_pd(yv, _mm256_mul_pd(_mm256_loadu_pd(row + j), xi));
      _mm256_storeu_pd(y + j, yv);
    }
    for (; j < cols; ++j) y[j] += row[j] * x[i];
  }
}

void ema_avx2(double* acc, const double* d, double beta, std::size_t n) {
  const double w = 1.0 - beta;
  __m256d bv = _mm256_set1_pd(beta);
  __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d av = _mm256_mul_pd(bv, _mm256_loadu_pd(acc + i));
    __m256d dv = _mm256_mul_pd(wv, _mm256_loadu_pd(d + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(av, dv));
  }
  for (; i < n; ++i) acc[i] = beta * acc[i] + w * d[i];
}

void ema_sq_avx2(double* acc, const double* d, double beta, std::size_t n) {
  const double w = 1.0 - beta;
  __m256d bv = _mm256_set1_pd(beta);
  __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d dv = _mm256_loadu_pd(d + i);
    __m256d av = _mm256_mul_pd(bv, _mm256_loadu_pd(acc + i));
    __m256d sq = _mm256_mul_pd(dv, dv);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(av, _mm256_mul_pd(wv, sq)));
  }
  for (; i < n; ++i) acc[i] = beta * acc[i] + w * (d[i] * d[i]);
}

void adam_apply_avx2(double* x, const double* m, const double* v, double alpha,
                     double bc1, double bc2, double eps, std::size_t n) {
  __m256d av = _mm256_set1_pd(alpha);
  __m256d b1 = _mm256_set1_pd(bc1);
  __m256d b2 = _mm256_set1_pd(bc2);
  __m256d ev = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d mhat = _mm256_div_pd(_mm256_loadu_pd(m + i), b1);
    __m256d vhat = _mm256_div_pd(_mm256_loadu_pd(v + i), b2);
    __m256d den = _mm256_add_pd(_mm256_sqrt_pd(vhat), ev);
    __m256d upd = _mm256_mul_pd(av, _mm256_div_pd(mhat, den));
    _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), upd));
  }
  for (; i < n; ++i) {
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    x[i] -= alpha * (mhat / (std::sqrt(vhat) + eps));
  }
}

void rmsprop_apply_avx2(double* x, const double* d, const double* v, double h,
                        double eps, std::size_t n) {
  __m256d hv = _mm256_set1_pd(h);
  __m256d ev = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d den = _mm256_sqrt_pd(_mm256_add_pd(_mm256_loadu_pd(v + i), ev));
    __m256d upd = _mm256_mul_pd(hv, _mm256_div_pd(_mm256_loadu_pd(d + i), den));
    _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), upd));
  }
  for (; i < n; ++i) x[i] -= h * (d[i] / std::sqrt(v[i] + eps));
}

}  // namespace

const Backend& avx2() {
  static const Backend table{
      "avx2",         dot_avx2,    axpy_avx2,
      scal_avx2,      matvec_avx2, matvec_t_avx2,
      ema_avx2,       ema_sq_avx2, adam_apply_avx2,
      rmsprop_apply_avx2,
  };
  return table;
}

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

}  // namespace minimax::kernels

#endif  // x86_64
