// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "core/dense.hpp"
#include "core/fft.hpp"
#include "core/random.hpp"

namespace gcalb
{

namespace
{

void project_out(RealMatrix &q, const RealMatrix &x)
{
  for (int pass = 0; pass < 2; ++pass)
  {
    q.noalias() -= x * (x.transpose() * q);
  }
}

// Orthonormalize columns through the Gram eigendecomposition, dropping
// numerically dependent directions.
void svqb(RealMatrix &q)
{
  for (int pass = 0; pass < 2 && q.cols() > 0; ++pass)
  {
    for (Eigen::Index c = 0; c < q.cols(); ++c)
    {
      const double nrm = q.col(c).norm();
      if (nrm > 0.0)
      {
        q.col(c) /= nrm;
      }
    }
    const RealMatrix g = q.transpose() * q;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
    const RealVector &d = es.eigenvalues();
    const double dmax = d.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = d.size() - 1; i >= 0; --i)
    {
      if (d[i] > 1e-13 * dmax)
      {
        keep.push_back(i);
      }
    }
    RealMatrix t(q.cols(), Eigen::Index(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
    {
      t.col(Eigen::Index(k)) = es.eigenvectors().col(keep[k]) / std::sqrt(d[keep[k]]);
    }
    q = q * t;
  }
}

RealMatrix default_precond(const Hamiltonian &h, const RealMatrix &r, double shift)
{
  const RealVector denom = h.kinetic_symbol().array() - shift;
  RealMatrix out(r.rows(), r.cols());
  for (Eigen::Index c = 0; c < r.cols(); ++c)
  {
    ComplexVector t = r.col(c).cast<cplx>();
    fft_forward(h.grid, t);
    t.array() /= denom.array().cast<cplx>();
    fft_backward(h.grid, t);
    out.col(c) = t.real();
  }
  return out;
}

}  // namespace

double lobpcg_residual_floor(const Hamiltonian &h)
{
  return 64.0 * std::numeric_limits<double>::epsilon() * h.norm_estimate();
}

EigResult lobpcg(const Hamiltonian &h, int n, const LobpcgConfig &cfg, const BlockPreconditioner &precond,
                 const RealMatrix *initial)
{
  const Eigen::Index ng = Eigen::Index(h.size());
  require(n >= 1 && n <= ng, "lobpcg: need 1 <= n <= N_g");
  const Eigen::Index m = std::min<Eigen::Index>(ng, n + std::max(0, cfg.guard));
  const double tol = std::max(cfg.tol, lobpcg_residual_floor(h));

  RealMatrix x = gaussian_matrix(ng, m, cfg.seed);
  if (initial != nullptr)
  {
    require(initial->rows() == ng, "lobpcg: initial block size mismatch");
    const Eigen::Index k = std::min(m, initial->cols());
    x.leftCols(k) = initial->leftCols(k);
  }
  svqb(x);
  if (x.cols() < m)
  {
    throw NumericalError("lobpcg: initial block is rank deficient");
  }
  RealMatrix ax = h.apply(x);
  RealVector theta;
  {
    RealMatrix g = x.transpose() * ax;
    g = 0.5 * (g + g.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
    theta = es.eigenvalues();
    x = x * es.eigenvectors();
    ax = ax * es.eigenvectors();
  }
  RealMatrix p(ng, 0);
  RealVector res(m);
  EigResult out;
  for (int it = 0; it <= cfg.max_iter; ++it)
  {
    if (it > 0 && it % 25 == 0)
    {
      ax = h.apply(x);
    }
    RealMatrix r = ax - x * theta.asDiagonal();
    for (Eigen::Index i = 0; i < m; ++i)
    {
      res[i] = r.col(i).norm();
    }
    if (res.head(n).maxCoeff() <= tol)
    {
      // confirm against a fresh application
      ax = h.apply(x);
      r = ax - x * theta.asDiagonal();
      for (Eigen::Index i = 0; i < m; ++i)
      {
        res[i] = r.col(i).norm();
      }
      if (res.head(n).maxCoeff() <= tol)
      {
        out.eigenvalues = theta.head(n);
        out.eigenvectors = x.leftCols(n);
        out.residuals = res.head(n);
        out.iterations = it;
        return out;
      }
    }
    if (it == cfg.max_iter)
    {
      break;
    }
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < m; ++i)
    {
      if (res[i] > tol)
      {
        active.push_back(i);
      }
    }
    RealMatrix ra(ng, Eigen::Index(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k)
    {
      ra.col(Eigen::Index(k)) = r.col(active[k]);
    }
    const double shift = std::min(theta[0], 0.0) - 1.0;
    RealMatrix w = precond ? precond(ra, shift) : default_precond(h, ra, shift);
    RealMatrix q(ng, w.cols() + p.cols());
    q << w, p;
    project_out(q, x);
    svqb(q);
    project_out(q, x);
    svqb(q);
    const RealMatrix aq = h.apply(q);
    const Eigen::Index k = q.cols();
    RealMatrix g(m + k, m + k);
    g.topLeftCorner(m, m) = theta.asDiagonal();
    g.topRightCorner(m, k) = x.transpose() * aq;
    g.bottomLeftCorner(k, m) = g.topRightCorner(m, k).transpose();
    g.bottomRightCorner(k, k) = q.transpose() * aq;
    g.bottomRightCorner(k, k) = 0.5 * (g.bottomRightCorner(k, k) + g.bottomRightCorner(k, k).transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
    theta = es.eigenvalues().head(m);
    const RealMatrix cx = es.eigenvectors().topLeftCorner(m, m);
    const RealMatrix cq = es.eigenvectors().bottomLeftCorner(k, m);
    RealMatrix pn = q * cq;
    RealMatrix apn = aq * cq;
    x = x * cx + pn;
    ax = ax * cx + apn;
    // Next search directions: the new P restricted to the active set.
    p.resize(ng, Eigen::Index(active.size()));
    for (std::size_t a = 0; a < active.size(); ++a)
    {
      p.col(Eigen::Index(a)) = pn.col(active[a]);
    }
  }
  std::ostringstream msg;
  msg << "lobpcg: no convergence in " << cfg.max_iter << " iterations, max residual " << res.head(n).maxCoeff()
      << " (tolerance " << tol << ")";
  throw EigConvergenceError(msg.str(), res.head(n));
}

RealMatrix materialize(const Hamiltonian &h)
{
  require(h.size() <= 4096, "dense_reference_eig: grid too large for dense materialization (limit 4096)");
  const Eigen::Index n = Eigen::Index(h.size());
  return h.apply(RealMatrix(RealMatrix::Identity(n, n)));
}

EigResult dense_reference_eig(const Hamiltonian &h)
{
  RealMatrix a = materialize(h);
  a = 0.5 * (a + a.transpose()).eval();
  DenseEig d = symmetric_eig(a);
  EigResult out;
  out.eigenvalues = d.values;
  out.eigenvectors = d.vectors;
  out.residuals.resize(d.values.size());
  const RealMatrix r = h.apply(d.vectors) - d.vectors * d.values.asDiagonal();
  for (Eigen::Index i = 0; i < r.cols(); ++i)
  {
    out.residuals[i] = r.col(i).norm();
  }
  return out;
}

}  // namespace gcalb
