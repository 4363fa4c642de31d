#pragma once

#include <cstddef>
#include <string_view>

// Hot arithmetic loops behind a runtime-dispatched backend table. Every
// backend implements the same contract:
//
//   * elementwise kernels (axpy, scal, ema, ema_sq, adam_apply,
//     rmsprop_apply) produce bit-identical results across backends --
//     per-element operation order is fixed and no fma contraction is used;
//   * reduction kernels (dot, matvec, matvec_t) may reassociate the sum and
//     agree with the scalar reference only to rounding.
//
// The active backend is picked once: MINIMAX_KERNELS=scalar|avx2 overrides,
// otherwise the best supported one wins.

namespace minimax::kernels {

struct Backend {
  const char* name;

  // sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a*x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= a
  void (*scal)(double a, double* x, std::size_t n);
  // y = M x, M row-major rows x cols
  void (*matvec)(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
  // y = M^T x
  void (*matvec_t)(const double* m, std::size_t rows, std::size_t cols,
                   const double* x, double* y);
  // acc[i] = beta*acc[i] + (1-beta)*d[i]
  void (*ema)(double* acc, const double* d, double beta, std::size_t n);
  // acc[i] = beta*acc[i] + (1-beta)*d[i]^2
  void (*ema_sq)(double* acc, const double* d, double beta, std::size_t n);
  // x[i] -= alpha * (m[i]/bc1) / (sqrt(v[i]/bc2) + eps)
  void (*adam_apply)(double* x, const double* m, const double* v, double alpha,
                     double bc1, double bc2, double eps, std::size_t n);
  // x[i] -= h * d[i] / sqrt(v[i] + eps)
  void (*rmsprop_apply)(double* x, const double* d, const double* v, double h,
                        double eps, std::size_t n);
};

const Backend& scalar();

#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2();
bool avx2_supported();
#endif

// Backend used by the library. First call resolves it (env var, then CPU
// probe); `select` forces one by name and throws on an unknown/unsupported
// backend.
const Backend& active();
void select(std::string_view name);

}  // namespace minimax::kernels
