// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/rational_filter.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include <Eigen/Dense>

#include "core/elliptic.hpp"
#include "core/fft.hpp"

namespace gcalb
{

MobiusMap solve_mobius(double a_minus, double a, double b, double b_plus)
{
  require(a < b && b < b_plus && a_minus < a, "solve_mobius: need a_minus < a < b < b_plus");
  MobiusMap t;
  if (std::isinf(a_minus))
  {
    // gamma = -1 and T(a) = 1 give alpha + beta = 2a; the remaining two
    // conditions fix the half distance s = sqrt((b - a)(b_plus - a)).
    const double s = std::sqrt((b - a) * (b_plus - a));
    t.gamma = -1.0;
    t.alpha = a + s;
    t.beta = a - s;
    const double rd = std::sqrt(b - a);
    const double re = std::sqrt(b_plus - a);
    t.ell = (re - rd) / (re + rd);
  }
  else
  {
    // The cross ratio of the four abscissae equals that of (-1, 1, ell, -ell).
    const double x = ((a_minus - b) * (a - b_plus)) / ((a_minus - b_plus) * (a - b));
    if (!(x > 1.0))
    {
      throw InvalidArgument("solve_mobius: infeasible gap");
    }
    const double q = std::sqrt(x);
    t.ell = (q - 1.0) / (q + 1.0);
    // gamma x_i - (gamma alpha) + y_i beta = y_i x_i through three points
    Eigen::Matrix3d m;
    Eigen::Vector3d rhs;
    const double xs[3] = {a_minus, a, b};
    const double ys[3] = {-1.0, 1.0, t.ell};
    for (int i = 0; i < 3; ++i)
    {
      m(i, 0) = xs[i];
      m(i, 1) = -1.0;
      m(i, 2) = ys[i];
      rhs[i] = ys[i] * xs[i];
    }
    const Eigen::Vector3d sol = m.colPivHouseholderQr().solve(rhs);
    t.gamma = sol[0];
    t.alpha = sol[1] / sol[0];
    t.beta = sol[2];
  }
  if (!(t.ell > 0.0 && t.ell < 1.0))
  {
    throw InvalidArgument("solve_mobius: infeasible gap");
  }
  const double res = mobius_residual(t, a_minus, a, b, b_plus);
  if (!(res < 1e-10))
  {
    throw NumericalError("solve_mobius: back-substitution residual " + std::to_string(res));
  }
  return t;
}

double mobius_residual(const MobiusMap &t, double a_minus, double a, double b, double b_plus)
{
  double res = std::isinf(a_minus) ? std::abs(t.gamma + 1.0) : std::abs(t(a_minus) + 1.0);
  res = std::max(res, std::abs(t(a) - 1.0));
  res = std::max(res, std::abs(t(b) - t.ell));
  res = std::max(res, std::abs(t(b_plus) + t.ell));
  return res;
}

double ZolotarevCoeffs::operator()(double t) const
{
  double s = 0.0;
  for (int j = 0; j < r; ++j)
  {
    s += a_part[std::size_t(j)] / (t * t + odd_c(j));
  }
  return m_scale * t * s;
}

double ZolotarevCoeffs::max_error(int samples) const
{
  double err = 0.0;
  const double la = std::log(ell);
  for (int i = 0; i <= samples; ++i)
  {
    const double t = std::exp(la * (1.0 - double(i) / samples));
    err = std::max(err, std::abs((*this)(t)-1.0));
  }
  return err;
}

ZolotarevCoeffs zolotarev_coeffs(int r, double ell)
{
  require(r >= 1, "zolotarev_coeffs: r must be at least 1");
  require(ell > 0.0 && ell < 1.0, "zolotarev_coeffs: ell must lie in (0, 1)");
  ZolotarevCoeffs z;
  z.r = r;
  z.ell = ell;
  // Modulus k' = sqrt(1 - ell^2); its complement is ell itself.
  const double kp = elliptic_K_complement(ell);
  z.c.resize(std::size_t(2 * r - 1));
  for (int i = 1; i <= 2 * r - 1; ++i)
  {
    const JacobiValues v = jacobi_sn_cn_dn_complement(i * kp / (2.0 * r), ell * ell);
    const double ci = ell * ell * (v.sn * v.sn) / (v.cn * v.cn);
    if (!(ci >= 1e-300) || !std::isfinite(ci))
    {
      throw NumericalError("zolotarev_coeffs: coefficients lost to underflow, reduce r");
    }
    z.c[std::size_t(i - 1)] = ci;
  }
  z.a_part.resize(std::size_t(r));
  for (int j = 1; j <= r; ++j)
  {
    const double cj = z.c[std::size_t(2 * j - 2)];
    double num = 1.0;
    for (int i = 1; i <= r - 1; ++i)
    {
      num *= z.c[std::size_t(2 * i - 1)] - cj;
    }
    double den = 1.0;
    for (int i = 1; i <= r; ++i)
    {
      if (i != j)
      {
        den *= z.c[std::size_t(2 * i - 2)] - cj;
      }
    }
    z.a_part[std::size_t(j - 1)] = num / den;
  }

  // Scale so the error equioscillates: M = 2 / (max g + min g) on [ell, 1].
  z.m_scale = 1.0;
  const int samples = 4000;
  const double la = std::log(ell);
  auto tpos = [&](int i) { return std::exp(la * (1.0 - double(i) / samples)); };
  std::vector<double> g(samples + 1);
  for (int i = 0; i <= samples; ++i)
  {
    g[std::size_t(i)] = z(tpos(i));
  }
  auto refine = [&](int i, double sign) {
    double best = sign * g[std::size_t(i)];
    if (i == 0 || i == samples)
    {
      return best * sign;
    }
    const double lo = la * (1.0 - double(i - 1) / samples);
    const double hi = la * (1.0 - double(i + 1) / samples);
    auto fn = [&](double s) { return -sign * z(std::exp(s)); };
    const auto res = boost::math::tools::brent_find_minima(fn, lo, hi, 52);
    best = std::max(best, -res.second);
    return best * sign;
  };
  double gmax = -1e300, gmin = 1e300;
  for (int i = 0; i <= samples; ++i)
  {
    const bool local_max = (i == 0 || g[std::size_t(i)] >= g[std::size_t(i - 1)]) &&
                           (i == samples || g[std::size_t(i)] >= g[std::size_t(i + 1)]);
    const bool local_min = (i == 0 || g[std::size_t(i)] <= g[std::size_t(i - 1)]) &&
                           (i == samples || g[std::size_t(i)] <= g[std::size_t(i + 1)]);
    if (local_max)
    {
      gmax = std::max(gmax, refine(i, 1.0));
    }
    if (local_min)
    {
      gmin = std::min(gmin, refine(i, -1.0));
    }
  }
  z.m_scale = 2.0 / (gmax + gmin);
  return z;
}

double RationalFilter::composed(double x) const
{
  if (std::isinf(x))
  {
    return 0.5 * (zolotarev(mobius.gamma) + 1.0);
  }
  return 0.5 * (zolotarev(mobius(x)) + 1.0);
}

cplx evaluate_filter_complex(const RationalFilter &f, double x)
{
  cplx s = f.constant_term;
  for (std::size_t j = 0; j < f.poles.size(); ++j)
  {
    const cplx t = f.weights[j] / (x - f.poles[j]);
    s += t + std::conj(t);
  }
  return s;
}

double evaluate_filter(const RationalFilter &f, double x)
{
  if (std::isinf(x))
  {
    return f.constant_term;
  }
  double s = f.constant_term;
  for (std::size_t j = 0; j < f.poles.size(); ++j)
  {
    s += 2.0 * (f.weights[j] / (x - f.poles[j])).real();
  }
  return s;
}

namespace
{

cplx composed_complex(const RationalFilter &f, cplx x)
{
  const cplx t = f.mobius(x);
  cplx s = 0.0;
  for (int j = 0; j < f.zolotarev.r; ++j)
  {
    s += f.zolotarev.a_part[std::size_t(j)] / (t * t + f.zolotarev.odd_c(j));
  }
  return 0.5 * (f.zolotarev.m_scale * t * s + 1.0);
}

}  // namespace

cplx numerical_residue(const RationalFilter &f, std::size_t j)
{
  const cplx sigma = f.poles.at(j);
  const double e1 = 1e-5 * std::abs(sigma);
  const double e2 = 5e-6 * std::abs(sigma);
  const cplx g1 = e1 * composed_complex(f, sigma + e1);
  const cplx g2 = e2 * composed_complex(f, sigma + e2);
  // g(e) = w + e R0 + O(e^2); eliminate the linear term
  return (e1 * g2 - e2 * g1) / (e1 - e2);
}

RationalFilter build_filter(const FilterSpec &spec)
{
  RationalFilter f;
  f.spec = spec;
  f.mobius = solve_mobius(spec.a_minus, spec.a, spec.b, spec.b_plus);
  f.zolotarev = zolotarev_coeffs(spec.r, f.mobius.ell);
  const double gamma = f.mobius.gamma;
  const double m = f.zolotarev.m_scale;
  f.constant_term = 0.5;
  for (int j = 0; j < spec.r; ++j)
  {
    const double cj = f.zolotarev.odd_c(j);
    const double aj = f.zolotarev.a_part[std::size_t(j)];
    f.constant_term += 0.5 * m * aj * gamma / (gamma * gamma + cj);
    // Z has simple poles at t = +-i sqrt(c); each maps to a conjugate pair in x.
    cplx tau(0.0, std::sqrt(cj));
    cplx sigma = (gamma * f.mobius.alpha - tau * f.mobius.beta) / (gamma - tau);
    if (sigma.imag() < 0.0)
    {
      tau = std::conj(tau);
      sigma = std::conj(sigma);
    }
    f.poles.push_back(sigma);
    f.weights.push_back(m * aj * (sigma - f.mobius.beta) / (4.0 * (gamma - tau)));
  }

  // Validate the partial-fraction form against direct composition at spread-out
  // real points outside the gap.
  double worst = 0.0;
  const double width = spec.b - spec.a;
  for (int i = 0; i <= 400; ++i)
  {
    const double x = spec.a - 10.0 * width + 20.0 * width * i / 400.0 + 0.37 * width / 400.0;
    if (x > spec.b && x < spec.b_plus)
    {
      continue;
    }
    worst = std::max(worst, std::abs(evaluate_filter(f, x) - f.composed(x)));
  }
  if (!(worst <= 1e-11))
  {
    throw NumericalError("build_filter: pole expansion disagrees with composed form by " + std::to_string(worst));
  }
  return f;
}

RealMatrix apply_filter(const RationalFilter &f, const Hamiltonian &h, const RealMatrix &r, const SolverConfig &cfg,
                        FilterApplyStats *stats)
{
  require(std::size_t(r.rows()) == h.size(), "apply_filter: block size mismatch");
  RealMatrix out = f.constant_term * r;
  FilterApplyStats local;
  for (std::size_t j = 0; j < f.poles.size(); ++j)
  {
    const cplx sigma = f.poles[j];
    const ComplexOperator apply_a = [&](const ComplexVector &v) -> ComplexVector {
      return h.apply(ComplexMatrix(v)).col(0) - sigma * v;
    };
    const ComplexVector inv = (h.kinetic_symbol().cast<cplx>().array() - sigma).inverse().matrix();
    const ComplexOperator precond = [&](const ComplexVector &v) -> ComplexVector {
      ComplexVector t = v;
      fft_forward(h.grid, t);
      t.array() *= inv.array();
      fft_backward(h.grid, t);
      return t;
    };
    for (Eigen::Index c = 0; c < r.cols(); ++c)
    {
      SolveReport report;
      ComplexVector x;
      try
      {
        x = gmres(apply_a, r.col(c).cast<cplx>(), precond, cfg, report);
      }
      catch (const GmresError &e)
      {
        throw FilterApplicationError("apply_filter: shifted solve failed at pole " + std::to_string(j) + ": " +
                                         e.what(),
                                     j);
      }
      local.total_iterations += report.iterations;
      ++local.solves;
      out.col(c) += 2.0 * (f.weights[j] * x).real();
    }
  }
  local.iterations_per_rhs = r.cols() > 0 ? double(local.total_iterations) / double(r.cols()) : 0.0;
  if (stats != nullptr)
  {
    stats->total_iterations += local.total_iterations;
    stats->solves += local.solves;
    stats->iterations_per_rhs += local.iterations_per_rhs;
  }
  return out;
}

}  // namespace gcalb
