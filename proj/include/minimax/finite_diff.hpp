#pragma once

#include <functional>
#include <span>

#include "minimax/vec.hpp"

// Central-difference oracles. These stay deliberately independent of the
// tape so they can referee every analytic derivative in the repository.

namespace minimax {

using ScalarFn = std::function<double(std::span<const double>)>;
using VectorFn = std::function<Vec(std::span<const double>)>;

inline double default_gradient_step(std::span<const double> p) {
  return 1e-5 * (1.0 + norm_inf(p));
}

inline double default_hvp_step(std::span<const double> p) {
  return 1e-4 * (1.0 + norm_inf(p));
}

// (f(p + s e_i) - f(p - s e_i)) / 2s per coordinate.
Vec fd_gradient(const ScalarFn& f, std::span<const double> point, double step);

// (grad(p + s v) - grad(p - s v)) / 2s.
Vec fd_hvp(const VectorFn& grad, std::span<const double> point,
           std::span<const double> direction, double step);

}  // namespace minimax
