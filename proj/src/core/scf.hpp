// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/domain.hpp"
#include "core/krylov.hpp"
#include "core/operator.hpp"

namespace gcalb
{

enum class KernelMode
{
  periodic,    // periodic Green's function of the screened equation (image sum)
  free_space,  // 2 pi exp(-mu |x - y|) / (mu eps0) with the minimum-image distance
};

enum class InnerSolver
{
  gcalb,
  planewave,
};

struct HFModelSpec
{
  double length = 80.0;
  int nuclei = 8;
  double sigma = 3.0;
  double charge = 2.0;
  double mu = 0.01;
  double eps0 = 10.0;
  double alpha_x = 0.05;
  int occupied = 16;
  double kinetic = 0.5;
  KernelMode kernel = KernelMode::free_space;

  int grid_points = 320;
  int elements = 8;
  int n_b = 16;
  int oversampling = 5;
  int lgl_points = 40;
  double fermi_b = -2.79;  // converged highest occupied level of this model
  double b_plus = 0.0;
  int poles = 16;
  int lanczos_iterations = 30;
  double penalty_safety = 2.0;
  std::uint64_t seed = 2017;
  SolverConfig gmres;

  double eig_tol = 1e-9;  // planewave LOBPCG residual tolerance
  double inner_tol = 1e-6;
  int inner_max = 30;
  double outer_tol = 1e-5;
  int outer_max = 20;
  double mix_beta = 0.5;
  int mix_depth = 5;
};

// Fourier symbol 4 pi / (eps0 (k^2 + mu^2)).
double yukawa_symbol(double k, double mu, double eps0);

// Dense kernel samples K(x_i, x_j) on a 1D grid.
RealMatrix yukawa_kernel(const UniformGrid &grid, double mu, double eps0, KernelMode mode = KernelMode::periodic);

// h * sum_j K(x_i, x_j) v_j evaluated as a circular convolution by FFT.
RealVector hartree_potential(const UniformGrid &grid, const RealMatrix &kernel, const RealVector &charge);

// -h^2 sum_ij P_ij K_ij P_ij
double exchange_energy(const RealMatrix &projector, const RealMatrix &kernel, const UniformGrid &grid);

// Anderson acceleration of x = g(x) on the residual g(x) - x.
class AndersonMixer
{
public:
  AndersonMixer(int depth = 5, double beta = 0.5) : depth_(depth), beta_(beta) {}
  RealVector mix(const RealVector &input, const RealVector &output);
  int history_size() const { return int(inputs_.size()); }
  void reset();

private:
  int depth_;
  double beta_;
  std::deque<RealVector> inputs_;
  std::deque<RealVector> residuals_;
};

// Nuclear background m(x) = -sum_i Z / sqrt(2 pi sigma^2) exp(-d_i(x)^2 / (2 sigma^2)).
RealVector nuclear_background(const HFModelSpec &spec, const UniformGrid &grid);

struct SCFState
{
  RealVector density;
  RealVector local_potential;
  RealMatrix projector;  // P(x_i, x_j)
  RealMatrix orbitals;   // occupied states on the grid, unit Euclidean norm
  RealVector eigenvalues;
  double exchange_energy = 0.0;
  int inner_iterations = 0;
  std::vector<double> potential_errors;  // relative local-potential change per inner iteration
  double filter_iterations_per_rhs = 0.0;
};

struct OuterRecord
{
  int outer = 0;
  int inner_iterations = 0;
  double exchange_energy = 0.0;
  double relative_change = 0.0;
  std::vector<double> potential_errors;
};

struct SCFResult
{
  SCFState state;
  double initial_exchange_energy = 0.0;  // E_X of the starting projector
  RealVector initial_eigenvalues;
  std::vector<OuterRecord> outer;
  bool converged = false;
};

class SCFConvergenceError : public ConvergenceError
{
public:
  SCFConvergenceError(const std::string &what, SCFResult partial)
      : ConvergenceError(what), partial_(std::move(partial))
  {
  }
  const SCFResult &partial() const { return partial_; }

private:
  SCFResult partial_;
};

class HFModel
{
public:
  explicit HFModel(const HFModelSpec &spec);

  const HFModelSpec &spec() const { return spec_; }
  const UniformGrid &grid() const { return grid_; }
  const RealMatrix &kernel() const { return kernel_; }
  const RealVector &background() const { return background_; }

  // Self-consistency in the local potential with the exchange operator built
  // from `exchange_projector` held fixed (empty matrix: no exchange).
  SCFState inner_scf(const RealMatrix &exchange_projector, InnerSolver solver, const RealVector &initial_density,
                     const RealMatrix *initial_orbitals = nullptr) const;

  // Lowest states of the ion-only Hamiltonian (no electrons, no exchange).
  SCFState initial_state(InnerSolver solver) const;

  // Outer fixed-point iteration on the exchange operator, starting from
  // initial_state().
  SCFResult outer_scf(InnerSolver solver) const;

private:
  struct Step
  {
    RealVector density;
    RealMatrix projector;
    RealVector eigenvalues;
    RealMatrix orbitals;
    double filter_iterations_per_rhs = 0.0;
  };
  Step solve_step(const Hamiltonian &ham, InnerSolver solver, std::uint64_t seed, const RealMatrix &orbitals) const;
  std::shared_ptr<NonlocalExchange> exchange_for(const RealMatrix &projector) const;
  std::shared_ptr<const ElementMesh> mesh_;

  HFModelSpec spec_;
  UniformGrid grid_;
  RealMatrix kernel_;
  RealVector background_;
};

}  // namespace gcalb
