// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/krylov.hpp"

#include <cmath>

namespace gcalb
{

namespace
{

// Givens rotation zeroing b in (a, b).
void make_givens(cplx a, cplx b, double &c, cplx &s)
{
  const double na = std::abs(a);
  const double nb = std::abs(b);
  if (nb == 0.0)
  {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (na == 0.0)
  {
    c = 0.0;
    s = std::conj(b) / nb;
    return;
  }
  const double r = std::hypot(na, nb);
  c = na / r;
  s = (a / na) * std::conj(b) / r;
}

}  // namespace

ComplexVector gmres(const ComplexOperator &apply_a, const ComplexVector &b, const ComplexOperator &precond,
                    const SolverConfig &cfg, SolveReport &report)
{
  require(cfg.restart >= 1, "gmres: restart must be at least 1");
  require(cfg.tol > 0.0, "gmres: tolerance must be positive");
  report = SolveReport{};
  const Eigen::Index n = b.size();
  ComplexVector x = ComplexVector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0)
  {
    report.converged = true;
    return x;
  }
  const int m = cfg.restart;
  ComplexMatrix v(n, m + 1);
  ComplexMatrix z(n, m);
  ComplexMatrix h = ComplexMatrix::Zero(m + 1, m);
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<cplx> sn(static_cast<std::size_t>(m));
  ComplexVector g(m + 1);

  ComplexVector r = b;
  double rnorm = bnorm;
  for (int cycle = 0; cycle <= cfg.max_restarts; ++cycle)
  {
    v.col(0) = r / rnorm;
    g.setZero();
    g[0] = rnorm;
    h.setZero();
    int k = 0;
    for (int j = 0; j < m; ++j)
    {
      z.col(j) = precond ? precond(v.col(j)) : ComplexVector(v.col(j));
      ComplexVector w = apply_a(z.col(j));
      // modified Gram-Schmidt with a second pass
      for (int pass = 0; pass < 2; ++pass)
      {
        for (int i = 0; i <= j; ++i)
        {
          const cplx hij = v.col(i).dot(w);
          h(i, j) += hij;
          w -= hij * v.col(i);
        }
      }
      const double hnext = w.norm();
      h(j + 1, j) = hnext;
      if (hnext > 0.0)
      {
        v.col(j + 1) = w / hnext;
      }
      for (int i = 0; i < j; ++i)
      {
        const cplx t = cs[std::size_t(i)] * h(i, j) + sn[std::size_t(i)] * h(i + 1, j);
        h(i + 1, j) = -std::conj(sn[std::size_t(i)]) * h(i, j) + cs[std::size_t(i)] * h(i + 1, j);
        h(i, j) = t;
      }
      make_givens(h(j, j), h(j + 1, j), cs[std::size_t(j)], sn[std::size_t(j)]);
      h(j, j) = cs[std::size_t(j)] * h(j, j) + sn[std::size_t(j)] * h(j + 1, j);
      h(j + 1, j) = 0.0;
      g[j + 1] = -std::conj(sn[std::size_t(j)]) * g[j];
      g[j] = cs[std::size_t(j)] * g[j];
      ++report.iterations;
      k = j + 1;
      const double est = std::abs(g[j + 1]) / bnorm;
      report.residual_history.push_back(est);
      if (est <= cfg.tol || hnext <= 1e-14 * std::abs(h(j, j)))
      {
        break;
      }
    }
    ComplexVector y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    x += z.leftCols(k) * y;
    r = b - apply_a(x);
    rnorm = r.norm();
    report.final_relative_residual = rnorm / bnorm;
    if (report.final_relative_residual <= cfg.tol)
    {
      report.converged = true;
      return x;
    }
  }
  throw GmresError("gmres: no convergence after " + std::to_string(cfg.max_restarts) + " restarts (relative residual " +
                       std::to_string(report.final_relative_residual) + ")",
                   x, report);
}

}  // namespace gcalb
