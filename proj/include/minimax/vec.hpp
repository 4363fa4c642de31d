#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "minimax/kernels.hpp"

namespace minimax {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels::active().dot(a.data(), b.data(), a.size());
}

// y += a*x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  kernels::active().axpy(a, x.data(), y.data(), x.size());
}

inline void scale(double a, std::span<double> x) {
  kernels::active().scal(a, x.data(), x.size());
}

inline double norm2(std::span<const double> v) {
  return std::sqrt(dot(v, v));
}

inline double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Deterministic normal draws: splitmix64 stream + Box-Muller. Kept
// self-contained so seeded draws are identical across platforms/stdlibs.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : state_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    // u1 in (0,1]: avoid log(0)
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Vec vector(std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = next();
    return v;
  }

  double uniform01() {
    std::uint64_t z = (state_ += 0x9E3779B97f4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace minimax
