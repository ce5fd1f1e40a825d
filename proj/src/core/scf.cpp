// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/scf.hpp"

#include <cmath>
#include <memory>

#include <Eigen/QR>

#include "core/basis.hpp"
#include "core/dg.hpp"
#include "core/eig.hpp"
#include "core/fft.hpp"
#include "core/operator.hpp"
#include "core/rational_filter.hpp"

namespace gcalb
{

double yukawa_symbol(double k, double mu, double eps0)
{
  require(mu > 0.0 && eps0 > 0.0, "yukawa: mu and eps0 must be positive");
  return 4.0 * pi / (eps0 * (k * k + mu * mu));
}

RealMatrix yukawa_kernel(const UniformGrid &grid, double mu, double eps0, KernelMode mode)
{
  require(grid.dim == 1, "yukawa_kernel: 1D grids only");
  require(mu > 0.0 && eps0 > 0.0, "yukawa_kernel: mu and eps0 must be positive");
  const int n = grid.points[0];
  const double l = grid.lengths[0];
  const double h = grid.spacing(0);
  RealVector row(n);
  for (int j = 0; j < n; ++j)
  {
    double d = j * h;
    d = std::abs(d - l * std::round(d / l));
    if (mode == KernelMode::periodic)
    {
      // sum over all periodic images of the free-space kernel
      row[j] = 2.0 * pi / (mu * eps0) * std::cosh(mu * (0.5 * l - d)) / std::sinh(0.5 * mu * l);
    }
    else
    {
      row[j] = 2.0 * pi / (mu * eps0) * std::exp(-mu * d);
    }
  }
  RealMatrix k(n, n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      k(i, j) = row[((j - i) % n + n) % n];
    }
  }
  return k;
}

RealVector hartree_potential(const UniformGrid &grid, const RealMatrix &kernel, const RealVector &charge)
{
  const Eigen::Index n = Eigen::Index(grid.size());
  require(kernel.rows() == n && kernel.cols() == n && charge.size() == n, "hartree_potential: size mismatch");
  // The kernel depends on x - y only: convolve with its first column.
  ComplexVector k = kernel.col(0).cast<cplx>();
  ComplexVector v = charge.cast<cplx>();
  fft_forward(grid, k);
  fft_forward(grid, v);
  v.array() *= k.array();
  fft_backward(grid, v);
  return grid.cell_volume() * v.real();
}

double exchange_energy(const RealMatrix &projector, const RealMatrix &kernel, const UniformGrid &grid)
{
  require(projector.rows() == kernel.rows() && projector.cols() == kernel.cols(), "exchange_energy: size mismatch");
  const double h = grid.cell_volume();
  return -h * h * (projector.cwiseProduct(kernel).cwiseProduct(projector)).sum();
}

void AndersonMixer::reset()
{
  inputs_.clear();
  residuals_.clear();
}

RealVector AndersonMixer::mix(const RealVector &input, const RealVector &output)
{
  const RealVector f = output - input;
  RealVector next = input + beta_ * f;
  if (!inputs_.empty() && depth_ > 0)
  {
    const Eigen::Index m = Eigen::Index(inputs_.size());
    RealMatrix dx(input.size(), m), df(input.size(), m);
    for (Eigen::Index i = 0; i < m; ++i)
    {
      dx.col(i) = input - inputs_[std::size_t(i)];
      df.col(i) = f - residuals_[std::size_t(i)];
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(df);
    qr.setThreshold(1e-12);
    if (qr.rank() == m)
    {
      const RealVector gamma = qr.solve(f);
      next = input - dx * gamma + beta_ * (f - df * gamma);
    }
  }
  inputs_.push_front(input);
  residuals_.push_front(f);
  while (int(inputs_.size()) > depth_)
  {
    inputs_.pop_back();
    residuals_.pop_back();
  }
  return next;
}

RealVector nuclear_background(const HFModelSpec &spec, const UniformGrid &grid)
{
  RealVector m = RealVector::Zero(Eigen::Index(grid.size()));
  const double l = spec.length;
  const double norm = spec.charge / std::sqrt(2.0 * pi * spec.sigma * spec.sigma);
  for (int i = 0; i < spec.nuclei; ++i)
  {
    const double r = (i + 0.5) * l / spec.nuclei;
    for (std::size_t g = 0; g < grid.size(); ++g)
    {
      double d = grid.coordinate(0, int(g)) - r;
      d -= l * std::round(d / l);
      m[Eigen::Index(g)] -= norm * std::exp(-d * d / (2.0 * spec.sigma * spec.sigma));
    }
  }
  return m;
}

HFModel::HFModel(const HFModelSpec &spec) : spec_(spec)
{
  require(spec.charge > 0.0 && spec.mu > 0.0 && spec.eps0 > 0.0, "hf model: charge, mu and eps0 must be positive");
  require(spec.occupied > 0 && spec.grid_points > 2 * spec.occupied, "hf model: grid too small for occupied states");
  grid_ = UniformGrid::cube(1, spec.length, spec.grid_points);
  kernel_ = yukawa_kernel(grid_, spec.mu, spec.eps0, spec.kernel);
  background_ = nuclear_background(spec, grid_);
  const int el[1] = {spec.elements};
  mesh_ = std::make_shared<ElementMesh>(grid_, Partition::make(grid_, el), spec.lgl_points);
}

std::shared_ptr<NonlocalExchange> HFModel::exchange_for(const RealMatrix &projector) const
{
  if (projector.size() == 0 || spec_.alpha_x == 0.0)
  {
    return nullptr;
  }
  auto exchange = std::make_shared<NonlocalExchange>();
  exchange->kernel = kernel_;
  exchange->projector = projector;
  exchange->alpha_x = spec_.alpha_x;
  exchange->include_hartree = false;
  return exchange;
}

HFModel::Step HFModel::solve_step(const Hamiltonian &ham, InnerSolver solver, std::uint64_t seed,
                                  const RealMatrix &orbitals) const
{
  const double h = grid_.cell_volume();
  const int n = spec_.occupied;
  Step step;
  if (solver == InnerSolver::planewave)
  {
    LobpcgConfig cfg;
    cfg.tol = spec_.eig_tol;
    cfg.seed = seed;
    const EigResult r = lobpcg(ham, n, cfg, {}, orbitals.size() > 0 ? &orbitals : nullptr);
    step.orbitals = r.eigenvectors;
    const RealMatrix psi = r.eigenvectors / std::sqrt(h);
    step.density = psi.rowwise().squaredNorm();
    step.projector = psi * psi.transpose();
    step.eigenvalues = r.eigenvalues;
    return step;
  }
  const SpectrumBounds bounds = estimate_spectrum_bounds(ham, spec_.lanczos_iterations, seed);
  FilterSpec fs;
  fs.a = bounds.lambda_min_est;
  fs.b = spec_.fermi_b;
  fs.b_plus = spec_.b_plus;
  fs.r = spec_.poles;
  require(fs.a < fs.b, "inner SCF: smallest eigenvalue estimate lies above the Fermi level b");
  const RationalFilter filter = build_filter(fs);
  FilterApplyStats stats;
  const DGBasis basis = build_gcalb(
      [&](const RealMatrix &r) { return apply_filter(filter, ham, r, spec_.gmres, &stats); }, mesh_, spec_.n_b,
      spec_.oversampling, seed);
  const DGMatrix a = assemble_dg(ham, basis, estimate_penalties(basis, spec_.kinetic, spec_.penalty_safety));
  const DGEigenSolution sol = solve_dg_eig(a, n);
  step.density = reconstruct_density(sol, basis, n);
  step.projector = reconstruct_projector_kernel(sol, basis, n);
  step.eigenvalues = sol.eigenvalues;
  step.orbitals = dg_orbitals_on_grid(sol, basis, n) * std::sqrt(h);
  step.filter_iterations_per_rhs = stats.iterations_per_rhs;
  return step;
}

SCFState HFModel::initial_state(InnerSolver solver) const
{
  const RealVector v = hartree_potential(grid_, kernel_, background_);
  const Hamiltonian ham = Hamiltonian::make(grid_, spec_.kinetic, v);
  Step step = solve_step(ham, solver, spec_.seed, RealMatrix());
  SCFState state;
  state.density = std::move(step.density);
  state.local_potential = v;
  state.projector = std::move(step.projector);
  state.orbitals = std::move(step.orbitals);
  state.eigenvalues = std::move(step.eigenvalues);
  state.exchange_energy = exchange_energy(state.projector, kernel_, grid_);
  state.filter_iterations_per_rhs = step.filter_iterations_per_rhs;
  return state;
}

SCFState HFModel::inner_scf(const RealMatrix &exchange_projector, InnerSolver solver,
                            const RealVector &initial_density, const RealMatrix *initial_orbitals) const
{
  const std::shared_ptr<NonlocalExchange> exchange = exchange_for(exchange_projector);
  AndersonMixer mixer(spec_.mix_depth, spec_.mix_beta);
  SCFState state;
  RealVector rho_in = initial_density;
  RealMatrix orbitals = initial_orbitals != nullptr ? *initial_orbitals : RealMatrix();
  double filter_iters = 0.0;
  for (int it = 1; it <= spec_.inner_max; ++it)
  {
    const RealVector v_in = hartree_potential(grid_, kernel_, background_ + rho_in);
    const Hamiltonian ham = Hamiltonian::make(grid_, spec_.kinetic, v_in, exchange);
    Step step = solve_step(ham, solver, spec_.seed + std::uint64_t(it), orbitals);
    filter_iters += step.filter_iterations_per_rhs;
    orbitals = step.orbitals;
    const RealVector v_out = hartree_potential(grid_, kernel_, background_ + step.density);
    const double err = (v_out - v_in).norm() / v_in.norm();
    state.potential_errors.push_back(err);
    state.density = step.density;
    state.local_potential = v_out;
    state.projector = std::move(step.projector);
    state.eigenvalues = std::move(step.eigenvalues);
    state.orbitals = std::move(step.orbitals);
    state.inner_iterations = it;
    if (err <= spec_.inner_tol)
    {
      state.exchange_energy = exchange_energy(state.projector, kernel_, grid_);
      state.filter_iterations_per_rhs = filter_iters / it;
      return state;
    }
    rho_in = mixer.mix(rho_in, step.density);
  }
  throw ConvergenceError("inner SCF: no convergence in " + std::to_string(spec_.inner_max) +
                         " iterations (last relative potential change " +
                         std::to_string(state.potential_errors.back()) + ")");
}

SCFResult HFModel::outer_scf(InnerSolver solver) const
{
  SCFResult result;
  // The ion-only well is far deeper than the converged spectrum, so a filter
  // tuned to the converged Fermi level cannot resolve it. Both solvers start
  // from the same planewave projector.
  (void)solver;
  SCFState state = initial_state(InnerSolver::planewave);
  result.initial_exchange_energy = state.exchange_energy;
  result.initial_eigenvalues = state.eigenvalues;
  double previous = state.exchange_energy;
  for (int k = 1; k <= spec_.outer_max; ++k)
  {
    SCFState next;
    try
    {
      next = inner_scf(state.projector, solver, state.density, &state.orbitals);
    }
    catch (const ConvergenceError &e)
    {
      result.state = state;
      throw SCFConvergenceError(std::string("outer SCF iteration ") + std::to_string(k) + ": " + e.what(), result);
    }
    OuterRecord rec;
    rec.outer = k;
    rec.inner_iterations = next.inner_iterations;
    rec.exchange_energy = next.exchange_energy;
    rec.relative_change = std::abs(next.exchange_energy - previous) / std::abs(next.exchange_energy);
    rec.potential_errors = next.potential_errors;
    result.outer.push_back(rec);
    previous = next.exchange_energy;
    state = std::move(next);
    if (rec.relative_change <= spec_.outer_tol)
    {
      result.converged = true;
      result.state = std::move(state);
      return result;
    }
  }
  result.state = std::move(state);
  throw SCFConvergenceError("outer SCF: no convergence in " + std::to_string(spec_.outer_max) + " iterations",
                            result);
}

}  // namespace gcalb
