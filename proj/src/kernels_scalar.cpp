#include <cmath>
#include <cstddef>

#include "minimax/kernels.hpp"

// Reference kernels. Deliberately plain loops: these define the numerical
// contract the SIMD backends are tested against.

namespace minimax::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void matvec_scalar(const double* m, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = m + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec_t_scalar(const double* m, std::size_t rows, std::size_t cols,
                     const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = m + i * cols;
    const double xi = x[i];
    for (std::size_t j = 0; j < cols; ++j) y[j] += row[j] * xi;
  }
}

void ema_scalar(double* acc, const double* d, double beta, std::size_t n) {
  const double w = 1.0 - beta;
  for (std::size_t i = 0; i < n; ++i) acc[i] = beta * acc[i] + w * d[i];
}

void ema_sq_scalar(double* acc, const double* d, double beta, std::size_t n) {
  const double w = 1.0 - beta;
  for (std::size_t i = 0; i < n; ++i)
    acc[i] = beta * acc[i] + w * (d[i] * d[i]);
}

void adam_apply_scalar(double* x, const double* m, const double* v,
                       double alpha, double bc1, double bc2, double eps,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    x[i] -= alpha * (mhat / (std::sqrt(vhat) + eps));
  }
}

void rmsprop_apply_scalar(double* x, const double* d, const double* v,
                          double h, double eps, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    x[i] -= h * (d[i] / std::sqrt(v[i] + eps));
}

}  // namespace

const Backend& scalar() {
  static const Backend table{
      "scalar",         dot_scalar,    axpy_scalar,
      scal_scalar,      matvec_scalar, matvec_t_scalar,
      ema_scalar,       ema_sq_scalar, adam_apply_scalar,
      rmsprop_apply_scalar,
  };
  return table;
}

}  // namespace minimax::kernels
