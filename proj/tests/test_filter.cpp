// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "core/eig.hpp"
#include "core/elliptic.hpp"
#include "core/rational_filter.hpp"
#include "core/random.hpp"
#include "support.hpp"

using namespace gcalb;

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

FilterSpec spec_of(double a, double b, double b_plus, int r)
{
  FilterSpec s;
  s.a = a;
  s.b = b;
  s.b_plus = b_plus;
  s.r = r;
  return s;
}

// Largest deviation from the indicator of [a, b] on [a, b] and on the part of
// the spectrum above the upper gap, out to ten interval widths and beyond.
double indicator_error(const RationalFilter &f)
{
  const double a = f.spec.a;
  const double b = f.spec.b;
  const double w = b - a;
  double worst = 0.0;
  const int n = 20000;
  for (int i = 0; i <= n; ++i)
  {
    worst = std::max(worst, std::abs(evaluate_filter(f, a + w * i / n) - 1.0));
    worst = std::max(worst, std::abs(evaluate_filter(f, f.spec.b_plus + 10.0 * w * i / n)));
  }
  for (double x : {1e2, 1e4, 1e8})
  {
    worst = std::max(worst, std::abs(evaluate_filter(f, b + x * w)));
  }
  return worst;
}

}  // namespace

TEST_CASE("complete elliptic integral")
{
  CHECK(std::abs(elliptic_K(0.0) - pi / 2) < 1e-15);
  CHECK(std::abs(elliptic_K(0.5) - 1.6857503548125961) < 1e-14);
  for (double k : {0.1, 0.5, 0.9, 0.99, 0.999999})
  {
    const double ref = std::comp_ellint_1(k);
    CHECK(std::abs(elliptic_K(k) - ref) <= 1e-14 * ref);
  }
  CHECK(elliptic_K(0.999999) > 7.0);
  // near k = 1 the complementary form keeps accuracy: K = ln(4 / k_c) + O(k_c^2 ln k_c)
  CHECK(std::abs(elliptic_K_complement(1e-9) - std::log(4e9)) < 1e-12);
  const double kc = 1e-4;
  CHECK(std::abs(elliptic_K_complement(kc) - std::comp_ellint_1(std::sqrt(1.0 - kc * kc))) < 1e-7);
}

TEST_CASE("jacobi elliptic functions")
{
  for (double u : {0.0, 0.4, 2.2, -1.3})
  {
    const JacobiValues v = jacobi_sn_cn_dn(u, 0.0);
    CHECK(std::abs(v.sn - std::sin(u)) < 1e-15);
    CHECK(std::abs(v.cn - std::cos(u)) < 1e-15);
    CHECK(std::abs(v.dn - 1.0) < 1e-15);
  }
  const JacobiValues z = jacobi_sn_cn_dn(0.0, 0.7);
  CHECK(std::abs(z.sn) < 1e-15);
  CHECK(std::abs(z.cn - 1.0) < 1e-15);
  CHECK(std::abs(z.dn - 1.0) < 1e-15);

  for (double k : {0.3, 0.8, 0.99})
  {
    for (double frac : {0.1, 0.5, 0.93})
    {
      const double u = frac * elliptic_K(k);
      const JacobiValues v = jacobi_sn_cn_dn(u, k);
      CHECK(std::abs(v.sn * v.sn + v.cn * v.cn - 1.0) < 1e-13);
      CHECK(std::abs(v.dn * v.dn + k * k * v.sn * v.sn - 1.0) < 1e-13);
    }
  }
  // sn(K) = 1 at the quarter period
  CHECK(std::abs(jacobi_sn_cn_dn(elliptic_K(0.8), 0.8).sn - 1.0) < 1e-13);
}

TEST_CASE("mobius map")
{
  SUBCASE("lower gap at minus infinity fixes gamma")
  {
    const MobiusMap t = solve_mobius(-inf, 0.0, 1.0, 2.0);
    CHECK(t.gamma == -1.0);
    const double r2 = std::sqrt(2.0);
    CHECK(std::abs(t.alpha - r2) < 1e-14);
    CHECK(std::abs(t.beta + r2) < 1e-14);
    CHECK(std::abs(t.ell - (r2 - 1.0) / (r2 + 1.0)) < 1e-14);
    CHECK(std::abs(t(0.0) - 1.0) < 1e-12);
    CHECK(std::abs(t(1.0) - t.ell) < 1e-12);
    CHECK(std::abs(t(2.0) + t.ell) < 1e-12);
    CHECK(mobius_residual(t, -inf, 0.0, 1.0, 2.0) < 1e-12);
  }
  SUBCASE("back-substitution on random quadruples")
  {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int i = 0; i < 20; ++i)
    {
      const double a = -10.0 + 2.0 * u(gen);
      const double b = a + u(gen);
      const double b_plus = b + u(gen);
      const double a_minus = (i % 2 == 0) ? -inf : a - u(gen);
      const MobiusMap t = solve_mobius(a_minus, a, b, b_plus);
      CHECK(t.ell > 0.0);
      CHECK(t.ell < 1.0);
      if (std::isinf(a_minus))
      {
        CHECK(std::abs(t.gamma + 1.0) < 1e-15);
      }
      else
      {
        CHECK(std::abs(t(a_minus) + 1.0) < 1e-10);
      }
      CHECK(std::abs(t(a) - 1.0) < 1e-10);
      CHECK(std::abs(t(b) - t.ell) < 1e-10);
      CHECK(std::abs(t(b_plus) + t.ell) < 1e-10);
    }
  }
  SUBCASE("invalid orderings")
  {
    CHECK_THROWS_AS(solve_mobius(-inf, 1.0, 0.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(solve_mobius(-inf, 0.0, 1.0, 1.0), InvalidArgument);
  }
}

TEST_CASE("zolotarev coefficients")
{
  SUBCASE("r = 1 equioscillates at both ends")
  {
    for (double ell : {0.05, 0.3, 0.7})
    {
      const ZolotarevCoeffs z = zolotarev_coeffs(1, ell);
      const double e_ell = std::abs(z(ell) - 1.0);
      const double e_one = std::abs(z(1.0) - 1.0);
      CHECK(std::abs(e_ell - e_one) <= 1e-9 * std::max(e_ell, 1e-300));
      double sampled = 0.0;
      for (int i = 0; i <= 100000; ++i)
      {
        sampled = std::max(sampled, std::abs(z(ell + (1.0 - ell) * i / 100000.0) - 1.0));
      }
      CHECK(sampled <= e_ell * (1.0 + 1e-9));
    }
  }
  SUBCASE("r = 16 with ell = 0.0839")
  {
    const ZolotarevCoeffs z = zolotarev_coeffs(16, 0.0839);
    CHECK(z.max_error() <= 1e-10);
  }
  SUBCASE("odd symmetry")
  {
    const ZolotarevCoeffs z = zolotarev_coeffs(8, 0.1);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 50; ++i)
    {
      const double t = u(gen);
      CHECK(z(-t) == -z(t));
    }
  }
  SUBCASE("error decreases with the number of poles")
  {
    const MobiusMap t = solve_mobius(-inf, -1.0, 1.0, 1.1);
    const double e4 = zolotarev_coeffs(4, t.ell).max_error();
    const double e8 = zolotarev_coeffs(8, t.ell).max_error();
    const double e16 = zolotarev_coeffs(16, t.ell).max_error();
    CHECK(e8 <= e4);
    CHECK(e16 <= e8);
  }
}

TEST_CASE("filter for a 10 percent relative gap")
{
  const RationalFilter f = build_filter(spec_of(-1.0, 1.0, 1.1, 16));
  CHECK(f.poles.size() == 16);
  for (const cplx &p : f.poles)
  {
    CHECK(p.imag() > 0.0);
  }
  CHECK(std::abs(evaluate_filter(f, 0.0) - 1.0) < 1e-10);
  CHECK(std::abs(evaluate_filter(f, 10.0)) < 1e-10);
  const double far = evaluate_filter(f, 1e12);
  CHECK(far >= -1e-10);
  CHECK(far <= 1e-10);
  CHECK(indicator_error(f) <= 1e-10);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  double worst = 0.0;
  double worst_imag = 0.0;
  for (int i = 0; i < 500; ++i)
  {
    const double x = u(gen);
    worst = std::max(worst, std::abs(evaluate_filter(f, x) - f.composed(x)));
    worst_imag = std::max(worst_imag, std::abs(evaluate_filter_complex(f, x).imag()));
  }
  CHECK(worst < 1e-11);
  CHECK(worst_imag < 1e-13);

  for (std::size_t j = 0; j < f.poles.size(); ++j)
  {
    const cplx w = numerical_residue(f, j);
    CHECK(std::abs(w - f.weights[j]) <= 1e-5 * std::abs(f.weights[j]));
  }
}

TEST_CASE("filter accuracy holds across gaps of at least 5 percent")
{
  for (double rel : {0.05, 0.1, 0.5, 2.0})
  {
    for (double a : {-7.3, 0.0, 4.0})
    {
      const double b = a + 2.5;
      const RationalFilter f = build_filter(spec_of(a, b, b + rel * 2.5, 16));
      CHECK(indicator_error(f) <= 1e-10);
    }
  }
}

TEST_CASE("filter error is non-increasing in the pole count")
{
  const double e4 = indicator_error(build_filter(spec_of(-1.0, 1.0, 1.1, 4)));
  const double e8 = indicator_error(build_filter(spec_of(-1.0, 1.0, 1.1, 8)));
  const double e16 = indicator_error(build_filter(spec_of(-1.0, 1.0, 1.1, 16)));
  CHECK(e8 <= e4);
  CHECK(e16 <= e8);
}

TEST_CASE("applying the filter matches the dense spectral oracle")
{
  const Hamiltonian h = test::wells_1d(32);
  const EigResult dense = dense_reference_eig(h);
  const RealVector &lam = dense.eigenvalues;
  const double b = 0.5 * (lam[3] + lam[4]);
  const RationalFilter f = build_filter(spec_of(lam[0] - 0.5, b, lam[4], 16));

  const RealMatrix r = gaussian_matrix(32, 4, 8);
  SolverConfig cfg;
  FilterApplyStats stats;
  const RealMatrix out = apply_filter(f, h, r, cfg, &stats);

  RealVector fl(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
  {
    fl[i] = evaluate_filter(f, lam[i]);
  }
  const RealMatrix &psi = dense.eigenvectors;
  const RealMatrix ref = psi * fl.asDiagonal() * psi.transpose() * r;
  CHECK((out - ref).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(stats.solves == 16 * 4);
  CHECK(stats.total_iterations > 0);
  CHECK(stats.iterations_per_rhs == doctest::Approx(double(stats.total_iterations) / 4.0));

  // an eigenvector deep inside [a, b] passes through unchanged
  const RealMatrix one = apply_filter(f, h, psi.col(1), cfg);
  CHECK((one.col(0) - psi.col(1)).cwiseAbs().maxCoeff() < 1e-8);
}
