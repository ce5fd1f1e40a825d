// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/operator.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "core/fft.hpp"
#include "core/random.hpp"

namespace gcalb
{

RealVector build_gaussian_potential(const GaussianWellSpec &spec, const UniformGrid &grid)
{
  require(spec.centers.size() == spec.depths.size() && spec.centers.size() == spec.sigmas.size(),
          "gaussian wells: centers, depths and sigmas must have equal length");
  for (double s : spec.sigmas)
  {
    require(s > 0.0, "gaussian wells: sigma must be positive");
  }
  RealVector v = RealVector::Zero(Eigen::Index(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g)
  {
    const Point3 x = grid.point(g);
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.centers.size(); ++i)
    {
      double r2 = 0.0;
      for (int d = 0; d < grid.dim; ++d)
      {
        const double l = grid.lengths[d];
        double dx = x[d] - spec.centers[i][d];
        dx -= l * std::round(dx / l);
        r2 += dx * dx;
      }
      sum += spec.depths[i] * std::exp(-r2 / (2.0 * spec.sigmas[i] * spec.sigmas[i]));
    }
    v[Eigen::Index(g)] = sum;
  }
  return v;
}

Hamiltonian Hamiltonian::make(const UniformGrid &grid, double kinetic, RealVector potential,
                              std::shared_ptr<const NonlocalExchange> nonlocal)
{
  require(kinetic > 0.0, "hamiltonian: kinetic coefficient must be positive");
  require(std::size_t(potential.size()) == grid.size(), "hamiltonian: potential size mismatch");
  Hamiltonian h;
  h.grid = grid;
  h.kinetic = kinetic;
  h.potential = std::move(potential);
  h.symbol_ = kinetic * wavenumber_squared(grid);
  h.effective_ = h.potential;
  if (nonlocal)
  {
    if (grid.dim != 1)
    {
      throw UnsupportedError("hamiltonian: nonlocal terms are only supported in 1D");
    }
    const Eigen::Index n = Eigen::Index(grid.size());
    require(nonlocal->kernel.rows() == n && nonlocal->kernel.cols() == n, "hamiltonian: kernel size mismatch");
    require(nonlocal->projector.rows() == n && nonlocal->projector.cols() == n,
            "hamiltonian: projector size mismatch");
    const double w = grid.cell_volume();
    h.exchange_ = -nonlocal->alpha_x * w * nonlocal->kernel.cwiseProduct(nonlocal->projector);
    if (nonlocal->include_hartree)
    {
      RealVector charge = nonlocal->projector.diagonal();
      if (nonlocal->background.size() > 0)
      {
        require(nonlocal->background.size() == n, "hamiltonian: background size mismatch");
        charge += nonlocal->background;
      }
      h.effective_ += w * nonlocal->kernel * charge;
    }
    h.nonlocal = std::move(nonlocal);
  }
  return h;
}

ComplexMatrix Hamiltonian::apply(const ComplexMatrix &v) const
{
  require(std::size_t(v.rows()) == size(), "apply_hamiltonian: size mismatch");
  ComplexMatrix out(v.rows(), v.cols());
  for (Eigen::Index c = 0; c < v.cols(); ++c)
  {
    ComplexVector t = v.col(c);
    fft_forward(grid, t);
    t.array() *= symbol_.array().cast<cplx>();
    fft_backward(grid, t);
    out.col(c) = t + (effective_.array().cast<cplx>() * v.col(c).array()).matrix();
  }
  if (nonlocal)
  {
    out.noalias() += exchange_.cast<cplx>() * v;
  }
  return out;
}

RealMatrix Hamiltonian::apply(const RealMatrix &v) const
{
  require(std::size_t(v.rows()) == size(), "apply_hamiltonian: size mismatch");
  RealMatrix out(v.rows(), v.cols());
  for (Eigen::Index c = 0; c < v.cols(); ++c)
  {
    ComplexVector t = v.col(c).cast<cplx>();
    fft_forward(grid, t);
    t.array() *= symbol_.array().cast<cplx>();
    fft_backward(grid, t);
    out.col(c) = t.real() + effective_.cwiseProduct(v.col(c));
  }
  if (nonlocal)
  {
    out.noalias() += exchange_ * v;
  }
  return out;
}

double Hamiltonian::norm_estimate() const
{
  double n = symbol_.maxCoeff() + effective_.cwiseAbs().maxCoeff();
  if (nonlocal)
  {
    n += exchange_.cwiseAbs().rowwise().sum().maxCoeff();
  }
  return n;
}

ComplexMatrix apply_shifted_laplacian_inverse(const UniformGrid &grid, double kinetic, cplx shift,
                                              const ComplexMatrix &v)
{
  require(std::size_t(v.rows()) == grid.size(), "shifted laplacian inverse: size mismatch");
  const RealVector k2 = wavenumber_squared(grid);
  ComplexVector inv(k2.size());
  const double scale = std::max(1.0, std::abs(shift));
  for (Eigen::Index i = 0; i < k2.size(); ++i)
  {
    const cplx d = kinetic * k2[i] - shift;
    if (std::abs(d) <= 1e-14 * scale)
    {
      throw NumericalError("shifted laplacian inverse: singular shift (resonant with a grid mode)");
    }
    inv[i] = 1.0 / d;
  }
  ComplexMatrix out(v.rows(), v.cols());
  for (Eigen::Index c = 0; c < v.cols(); ++c)
  {
    ComplexVector t = v.col(c);
    fft_forward(grid, t);
    t.array() *= inv.array();
    fft_backward(grid, t);
    out.col(c) = t;
  }
  return out;
}

SpectrumBounds estimate_spectrum_bounds(const Hamiltonian &h, int iterations, std::uint64_t seed)
{
  require(iterations >= 2, "spectrum bounds: at least two Lanczos iterations");
  const Eigen::Index n = Eigen::Index(h.size());
  const int m_max = int(std::min<Eigen::Index>(iterations, n));
  for (int attempt = 0; attempt < 4; ++attempt)
  {
    RealMatrix q(n, m_max + 1);
    RealVector start = gaussian_matrix(n, 1, seed + 7919 * std::uint64_t(attempt)).col(0);
    const double start_norm = start.norm();
    if (!(start_norm > 0.0))
    {
      continue;
    }
    q.col(0) = start / start_norm;
    std::vector<double> alpha, beta;
    int m = 0;
    bool breakdown = false;
    for (int j = 0; j < m_max; ++j)
    {
      RealVector w = h.apply(RealMatrix(q.col(j))).col(0);
      const double a = q.col(j).dot(w);
      alpha.push_back(a);
      // full reorthogonalization, twice
      for (int pass = 0; pass < 2; ++pass)
      {
        const RealVector coeff = q.leftCols(j + 1).transpose() * w;
        w -= q.leftCols(j + 1) * coeff;
      }
      const double b = w.norm();
      m = j + 1;
      beta.push_back(b);
      const double scale = std::max(std::abs(a), 1.0) * 1e-12;
      if (b <= scale)
      {
        breakdown = true;
        break;
      }
      q.col(j + 1) = w / b;
    }
    if (breakdown && m < 2 && m < n)
    {
      continue;  // degenerate start, try another one
    }
    RealMatrix t = RealMatrix::Zero(m, m);
    for (int j = 0; j < m; ++j)
    {
      t(j, j) = alpha[std::size_t(j)];
      if (j + 1 < m)
      {
        t(j, j + 1) = t(j + 1, j) = beta[std::size_t(j)];
      }
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(t);
    const RealVector &theta = es.eigenvalues();
    const double b_last = breakdown ? 0.0 : beta.back();
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * theta.cwiseAbs().maxCoeff();
    const double r_min = std::abs(b_last * es.eigenvectors()(m - 1, 0)) + floor;
    const double r_max = std::abs(b_last * es.eigenvectors()(m - 1, m - 1)) + floor;
    SpectrumBounds bounds;
    bounds.lambda_min_est = theta[0] - r_min;
    bounds.lambda_max_est = theta[m - 1] + r_max;
    return bounds;
  }
  throw NumericalError("spectrum bounds: Lanczos broke down repeatedly");
}

}  // namespace gcalb
