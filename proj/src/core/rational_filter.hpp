// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <vector>

#include "core/common.hpp"
#include "core/krylov.hpp"
#include "core/operator.hpp"

namespace gcalb
{

struct FilterSpec
{
  double a_minus = -std::numeric_limits<double>::infinity();
  double a = 0.0;
  double b = 1.0;
  double b_plus = 2.0;
  int r = 16;
};

// T(x) = gamma (x - alpha) / (x - beta)
struct MobiusMap
{
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = -1.0;
  double ell = 0.5;

  double operator()(double x) const { return gamma * (x - alpha) / (x - beta); }
  cplx operator()(cplx x) const { return gamma * (x - alpha) / (x - beta); }
};

MobiusMap solve_mobius(double a_minus, double a, double b, double b_plus);

// Largest violation of the four endpoint conditions (limit form for a_minus = -inf).
double mobius_residual(const MobiusMap &t, double a_minus, double a, double b, double b_plus);

// Z(t) = m_scale * t * sum_j a_j / (t^2 + c_{2j-1})
struct ZolotarevCoeffs
{
  int r = 0;
  double ell = 0.0;
  std::vector<double> c;       // c_1 .. c_{2r-1}, stored 0-based
  std::vector<double> a_part;  // a_1 .. a_r
  double m_scale = 1.0;

  double odd_c(int j) const { return c[std::size_t(2 * j)]; }  // c_{2j+1} for 0-based j
  double operator()(double t) const;
  // max |Z(t) - 1| over [ell, 1] from dense sampling.
  double max_error(int samples = 20000) const;
};

ZolotarevCoeffs zolotarev_coeffs(int r, double ell);

struct RationalFilter
{
  FilterSpec spec;
  MobiusMap mobius;
  ZolotarevCoeffs zolotarev;
  double constant_term = 0.0;
  std::vector<cplx> poles;
  std::vector<cplx> weights;

  // (Z(T(x)) + 1) / 2 evaluated directly.
  double composed(double x) const;
};

// Poles from the Moebius preimages of the upper t-plane poles, residues in
// closed form. Construction fails if the partial-fraction form disagrees with
// the composed form.
RationalFilter build_filter(const FilterSpec &spec);

double evaluate_filter(const RationalFilter &f, double x);
// Pole-sum value without discarding the imaginary part (should vanish).
cplx evaluate_filter_complex(const RationalFilter &f, double x);

// Residue of the composed form at pole j from two scaled offsets and Richardson
// extrapolation; an independent check of the closed-form weights.
cplx numerical_residue(const RationalFilter &f, std::size_t j);

struct FilterApplyStats
{
  long long total_iterations = 0;  // summed over poles and right-hand sides
  long long solves = 0;
  double iterations_per_rhs = 0.0;
};

class FilterApplicationError : public ConvergenceError
{
public:
  FilterApplicationError(const std::string &what, std::size_t pole) : ConvergenceError(what), pole_(pole) {}
  std::size_t pole() const { return pole_; }

private:
  std::size_t pole_;
};

// f(H) R = C0 R + sum_j 2 Re(w_j (H - sigma_j)^{-1} R), each shifted system
// solved by GMRES preconditioned with (-c_k Delta - sigma_j)^{-1}.
RealMatrix apply_filter(const RationalFilter &f, const Hamiltonian &h, const RealMatrix &r, const SolverConfig &cfg,
                        FilterApplyStats *stats = nullptr);

}  // namespace gcalb
