#include "minimax/finite_diff.hpp"

#include <stdexcept>

namespace minimax {

Vec fd_gradient(const ScalarFn& f, std::span<const double> point, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_gradient: step must be > 0");
  Vec p(point.begin(), point.end());
  Vec g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double saved = p[i];
    p[i] = saved + step;
    const double fp = f(p);
    p[i] = saved - step;
    const double fm = f(p);
    p[i] = saved;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

Vec fd_hvp(const VectorFn& grad, std::span<const double> point,
           std::span<const double> direction, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_hvp: step must be > 0");
  if (point.size() != direction.size())
    throw std::invalid_argument("fd_hvp: direction size mismatch");
  Vec plus(point.begin(), point.end());
  Vec minus(point.begin(), point.end());
  axpy(step, direction, plus);
  axpy(-step, direction, minus);
  Vec gp = grad(plus);
  Vec gm = grad(minus);
  for (std::size_t i = 0; i < gp.size(); ++i) gp[i] = (gp[i] - gm[i]) / (2.0 * step);
  return gp;
}

}  // namespace minimax
