#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>

#include "minimax/eig.hpp"
#include "minimax/errors.hpp"
#include "minimax/linear_solvers.hpp"
#include "test_util.hpp"

using minimax::DenseMatrix;
using minimax::NormalSampler;
using minimax::Vec;

namespace {

DenseMatrix mat2(double a, double b, double c, double d) {
  DenseMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

}  // namespace

TEST_CASE("eigenvalues: rotation block gives +-i") {
  // char poly: lambda^2 + 1
  const auto eigs = minimax::eigenvalues(mat2(0, 1, -1, 0));
  CHECK(testutil::spectra_match(eigs, {{0.0, 1.0}, {0.0, -1.0}}, 1e-12));
}

TEST_CASE("eigenvalues: identity has 1 with multiplicity n") {
  const auto eigs = minimax::eigenvalues(DenseMatrix::identity(7));
  REQUIRE(eigs.size() == 7);
  for (const auto& e : eigs) {
    CHECK(e.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.imag() == 0.0);
  }
}

TEST_CASE("eigenvalues: [[-1,-1],[1,-1]] gives -1 +- i") {
  // char poly: lambda^2 + 2 lambda + 2
  const auto eigs = minimax::eigenvalues(mat2(-1, -1, 1, -1));
  CHECK(testutil::spectra_match(eigs, {{-1.0, 1.0}, {-1.0, -1.0}}, 1e-12));
}

TEST_CASE("eigenvalues: conjugate pairs are exact mirror images") {
  NormalSampler rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testutil::random_matrix(rng, 9, 9);
    auto eigs = minimax::eigenvalues(m);
    for (const auto& e : eigs) {
      if (e.imag() == 0.0) continue;
      const std::complex<double> conj{e.real(), -e.imag()};
      bool found = false;
      for (const auto& other : eigs)
        if (other == conj) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("eigenvalues: det and trace oracles on random matrices") {
  NormalSampler rng(5);
  for (std::size_t n : {2u, 3u, 5u, 8u, 13u, 20u}) {
    for (int trial = 0; trial < 8; ++trial) {
      CAPTURE(n);
      CAPTURE(trial);
      const auto m = testutil::random_matrix(rng, n, n);
      const auto eigs = minimax::eigenvalues(m);
      REQUIRE(eigs.size() == n);

      std::complex<double> prod{1.0, 0.0};
      double trace_sum = 0.0;
      for (const auto& e : eigs) {
        prod *= e;
        trace_sum += e.real();
      }
      const double det = minimax::lu_det(minimax::lu_factor(m));
      double trace = 0.0;
      for (std::size_t i = 0; i < n; ++i) trace += m(i, i);

      CHECK(std::abs(prod.imag()) <= 1e-8 * (1.0 + std::abs(det)));
      CHECK(std::abs(prod.real() - det) <= 1e-8 * (1.0 + std::abs(det)));
      CHECK(std::abs(trace_sum - trace) <= 1e-8 * (1.0 + std::abs(trace)));
    }
  }
}

TEST_CASE("eigenvalues: defective Jordan block") {
  DenseMatrix j(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    j(i, i) = 2.0;
    if (i + 1 < 3) j(i, i + 1) = 1.0;
  }
  const auto eigs = minimax::eigenvalues(j);
  for (const auto& e : eigs) {
    CHECK(std::abs(e.real() - 2.0) <= 1e-5);  // defective: O(eps^(1/3)) accuracy
    CHECK(std::abs(e.imag()) <= 1e-5);
  }
}

TEST_CASE("eigenvalues: badly scaled matrix (balancing)") {
  // diag(1e8, 1, 1e-8)-similar matrix: spectrum {1, 2, 3}
  DenseMatrix m(3, 3);
  m(0, 0) = 1.0;
  m(0, 1) = 1e8;
  m(1, 1) = 2.0;
  m(1, 2) = 1e8;
  m(2, 2) = 3.0;
  m(1, 0) = 1e-9;
  m(2, 1) = 1e-9;
  const auto eigs = minimax::eigenvalues(m);
  auto s = testutil::sorted(eigs);
  // perturbation of the triangular spectrum is ~1e-1 * offdiag product scale
  CHECK(std::abs(s[0].real() - 1.0) < 0.3);
  CHECK(std::abs(s[1].real() - 2.0) < 0.3);
  CHECK(std::abs(s[2].real() - 3.0) < 0.3);
}

TEST_CASE("eigenvalues: companion matrix of (x-1)(x-2)(x-3)") {
  // x^3 - 6x^2 + 11x - 6
  DenseMatrix c(3, 3);
  c(0, 0) = 6.0;
  c(0, 1) = -11.0;
  c(0, 2) = 6.0;
  c(1, 0) = 1.0;
  c(2, 1) = 1.0;
  const auto eigs = minimax::eigenvalues(c);
  CHECK(testutil::spectra_match(eigs, {{1, 0}, {2, 0}, {3, 0}}, 1e-8));
}

TEST_CASE("eigenvalues: input validation") {
  CHECK_THROWS_AS(minimax::eigenvalues(DenseMatrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(minimax::eigenvalues(DenseMatrix(401, 401)),
                  std::invalid_argument);
  DenseMatrix bad(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(minimax::eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("symmetric_eigenvalues sorted real spectrum") {
  NormalSampler rng(17);
  const auto s = testutil::random_symmetric(rng, 12);
  const auto eigs = minimax::symmetric_eigenvalues(s);
  REQUIRE(eigs.size() == 12);
  for (std::size_t i = 1; i < eigs.size(); ++i) CHECK(eigs[i - 1] <= eigs[i]);
  double trace = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < 12; ++i) trace += s(i, i);
  for (double e : eigs) sum += e;
  CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
}

TEST_CASE("lu_solve: identity and diagonal") {
  const Vec rhs = {2.0, 1.0};
  CHECK(minimax::lu_solve(DenseMatrix::identity(2), rhs) == rhs);

  const auto sol = minimax::lu_solve(mat2(2, 0, 0, 0.5), rhs);
  CHECK(sol[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("lu_solve: permuted identity permutes the rhs") {
  DenseMatrix p(3, 3);
  p(0, 2) = 1.0;
  p(1, 0) = 1.0;
  p(2, 1) = 1.0;
  const Vec rhs = {1.0, 2.0, 3.0};
  const auto sol = minimax::lu_solve(p, rhs);
  // p x = rhs with x = (2, 3, 1)
  CHECK(sol[0] == doctest::Approx(2.0));
  CHECK(sol[1] == doctest::Approx(3.0));
  CHECK(sol[2] == doctest::Approx(1.0));
}

TEST_CASE("lu_solve: residual bound on random systems") {
  NormalSampler rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testutil::random_matrix(rng, 30, 30);
    const Vec rhs = rng.vector(30);
    const auto sol = minimax::lu_solve(m, rhs);
    Vec residual = m.apply(sol);
    minimax::axpy(-1.0, rhs, residual);
    CHECK(minimax::norm2(residual) <=
          1e-10 * m.norm_inf() * (1.0 + minimax::norm2(sol)));
  }
}

TEST_CASE("lu_factor: singular matrix rejected") {
  DenseMatrix s(2, 2);
  s(0, 0) = 1.0;
  s(0, 1) = 2.0;
  s(1, 0) = 2.0;
  s(1, 1) = 4.0;
  CHECK_THROWS_AS(minimax::lu_factor(s), minimax::NumericalError);
}

TEST_CASE("cg_solve: identity converges immediately") {
  const Vec rhs = {1.0, 2.0, 3.0};
  const auto res = minimax::cg_solve(
      [](std::span<const double> v) { return Vec(v.begin(), v.end()); }, rhs);
  CHECK(res.iterations <= 1);
  CHECK(testutil::rel_err(res.x, rhs) < 1e-12);
}

TEST_CASE("cg_solve: diagonal inversion") {
  const Vec rhs = {1.0, 2.0, 4.0};
  const auto res = minimax::cg_solve(
      [](std::span<const double> v) {
        return Vec{v[0], 2.0 * v[1], 4.0 * v[2]};
      },
      rhs);
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(res.x[2] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cg_solve matches lu_solve on random SPD systems") {
  NormalSampler rng(31);
  const auto spd = testutil::random_spd(rng, 50);
  const Vec rhs = rng.vector(50);
  const auto cg = minimax::cg_solve(
      [&](std::span<const double> v) { return spd.apply(v); }, rhs, 1e-12);
  const auto lu = minimax::lu_solve(spd, rhs);
  CHECK(testutil::rel_err(cg.x, lu) < 1e-8);
}

TEST_CASE("cg_solve: indefinite operator is rejected") {
  // diag(1, -1) produces negative curvature along the second coordinate
  const Vec rhs = {0.0, 1.0};
  CHECK_THROWS_AS(minimax::cg_solve(
                      [](std::span<const double> v) {
                        return Vec{v[0], -v[1]};
                      },
                      rhs),
                  minimax::NumericalError);
}

TEST_CASE("cg_solve: iteration cap raises with residual") {
  NormalSampler rng(37);
  const auto spd = testutil::random_spd(rng, 40);
  const Vec rhs = rng.vector(40);
  CHECK_THROWS_AS(minimax::cg_solve(
                      [&](std::span<const double> v) { return spd.apply(v); },
                      rhs, 1e-14, 2),
                  minimax::NumericalError);
}
