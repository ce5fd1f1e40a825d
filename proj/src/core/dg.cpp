// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/dg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "core/dense.hpp"

namespace gcalb
{

namespace
{

RealMatrix rows_of(const RealMatrix &m, const std::vector<std::size_t> &rows)
{
  RealMatrix out(Eigen::Index(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    out.row(Eigen::Index(i)) = m.row(Eigen::Index(rows[i]));
  }
  return out;
}

}  // namespace

double estimate_penalty(const ElementMesh &mesh, const LocalBasis &local, double kinetic, double safety)
{
  const Eigen::Index k = local.values.cols();
  require(k >= 1, "estimate_penalty: empty local basis");
  const RealVector &w = mesh.weights();
  RealMatrix face = RealMatrix::Zero(k, k);
  RealMatrix h1 = local.values.transpose() * w.asDiagonal() * local.values;
  for (int d = 0; d < mesh.dim(); ++d)
  {
    const RealMatrix grad = mesh.derivative(local.values, d);
    h1 += grad.transpose() * w.asDiagonal() * grad;
    const RealVector &fw = mesh.face_weights(d);
    for (int side = 0; side < 2; ++side)
    {
      const RealMatrix t = rows_of(local.values, mesh.face_nodes(d, side));
      const RealMatrix g = rows_of(grad, mesh.face_nodes(d, side));
      face += t.transpose() * fw.asDiagonal() * t + g.transpose() * fw.asDiagonal() * g;
    }
  }
  h1 = 0.5 * (h1 + h1.transpose()).eval();
  face = 0.5 * (face + face.transpose()).eval();
  Eigen::LLT<RealMatrix> chol(h1);
  if (chol.info() != Eigen::Success)
  {
    throw NumericalError("estimate_penalty: singular H1 Gram matrix (degenerate basis)");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> es(face, h1, Eigen::EigenvaluesOnly);
  return kinetic * safety * es.eigenvalues().maxCoeff();
}

PenaltyParams estimate_penalties(const DGBasis &basis, double kinetic, double safety)
{
  PenaltyParams p;
  for (const auto &local : basis.locals)
  {
    p.gamma.push_back(estimate_penalty(*basis.mesh, local, kinetic, safety));
  }
  return p;
}

DGMatrix assemble_dg(const Hamiltonian &h, const DGBasis &basis, const PenaltyParams &penalties)
{
  const ElementMesh &mesh = *basis.mesh;
  require(penalties.gamma.size() == mesh.element_count(), "assemble_dg: one penalty per element");
  require(h.grid.size() == mesh.grid().size(), "assemble_dg: Hamiltonian and mesh grids differ");
  const std::size_t ne = mesh.element_count();
  DGMatrix out;
  out.kinetic = h.kinetic;
  std::size_t total = 0;
  for (const auto &l : basis.locals)
  {
    out.offsets.push_back(total);
    out.counts.push_back(l.count());
    total += std::size_t(l.count());
  }
  out.matrix = RealMatrix::Zero(Eigen::Index(total), Eigen::Index(total));
  const RealVector &w = mesh.weights();
  const std::vector<RealMatrix> v_lgl = mesh.to_elements(h.effective_potential());
  const double ck = h.kinetic;

  std::vector<std::array<RealMatrix, 3>> grads(ne);
  for (std::size_t e = 0; e < ne; ++e)
  {
    const RealMatrix &phi = basis.locals[e].values;
    auto blk = out.matrix.block(Eigen::Index(out.offsets[e]), Eigen::Index(out.offsets[e]), phi.cols(), phi.cols());
    blk += phi.transpose() * (w.cwiseProduct(v_lgl[e].col(0))).asDiagonal() * phi;
    for (int d = 0; d < mesh.dim(); ++d)
    {
      grads[e][d] = mesh.derivative(phi, d);
      blk += ck * grads[e][d].transpose() * w.asDiagonal() * grads[e][d];
    }
  }

  for (const Face &f : partition_faces(mesh.partition()))
  {
    const int d = f.dim;
    const RealVector &fw = mesh.face_weights(d);
    const std::size_t el[2] = {f.left, f.right};
    const double sign[2] = {1.0, -1.0};
    RealMatrix t[2], g[2];
    t[0] = rows_of(basis.locals[f.left].values, mesh.face_nodes(d, 1));
    g[0] = rows_of(grads[f.left][d], mesh.face_nodes(d, 1));
    t[1] = rows_of(basis.locals[f.right].values, mesh.face_nodes(d, 0));
    g[1] = rows_of(grads[f.right][d], mesh.face_nodes(d, 0));
    const double pen = 0.5 * (penalties.gamma[f.left] + penalties.gamma[f.right]);
    for (int a = 0; a < 2; ++a)
    {
      for (int b = 0; b < 2; ++b)
      {
        const RealMatrix fa = fw.asDiagonal() * t[b];
        RealMatrix blk = -0.5 * ck * (sign[b] * g[a].transpose() * fa + sign[a] * t[a].transpose() * fw.asDiagonal() * g[b]);
        blk += pen * sign[a] * sign[b] * t[a].transpose() * fa;
        out.matrix.block(Eigen::Index(out.offsets[el[a]]), Eigen::Index(out.offsets[el[b]]), blk.rows(), blk.cols()) +=
            blk;
      }
    }
  }

  if (h.nonlocal)
  {
    // The grid exchange kernel is Fourier-interpolated in both variables to
    // the LGL nodes so that it shares the element quadrature with the mass
    // and local terms. Mixing grid and LGL quadratures lets the eigensolver
    // exploit the mismatch at element faces.
    const std::vector<RealMatrix> rows = mesh.to_elements(h.exchange_matrix().transpose());
    std::vector<RealMatrix> weighted(ne);
    for (std::size_t e = 0; e < ne; ++e)
    {
      weighted[e] = w.asDiagonal() * basis.locals[e].values;
    }
    const double inv_h = 1.0 / h.grid.cell_volume();
    for (std::size_t b = 0; b < ne; ++b)
    {
      // rows[b]: nodes of element b x grid points, i.e. X(x_j, y_b) over j
      const std::vector<RealMatrix> kb = mesh.to_elements(rows[b].transpose());
      for (std::size_t a = 0; a < ne; ++a)
      {
        out.matrix.block(Eigen::Index(out.offsets[a]), Eigen::Index(out.offsets[b]), out.counts[a], out.counts[b]) +=
            inv_h * weighted[a].transpose() * kb[a] * weighted[b];
      }
    }
  }
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  return out;
}

DGEigenSolution solve_dg_eig(const DGMatrix &a, int n)
{
  require(n >= 1 && std::size_t(n) <= a.size(), "solve_dg_eig: requested " + std::to_string(n) +
                                                     " eigenpairs from a matrix of size " + std::to_string(a.size()));
  const DenseEig d = symmetric_eig(a.matrix, n);
  DGEigenSolution sol;
  sol.eigenvalues = d.values;
  sol.coefficients = d.vectors;
  return sol;
}

RealMatrix dg_orbitals_on_grid(const DGEigenSolution &sol, const DGBasis &basis, int n)
{
  require(n <= sol.coefficients.cols(), "dg orbitals: solution has fewer states than requested");
  const ElementMesh &mesh = *basis.mesh;
  RealMatrix out = RealMatrix::Zero(Eigen::Index(mesh.grid().size()), n);
  std::size_t off = 0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e)
  {
    const auto &phi = basis.locals[e].values;
    const RealMatrix psi = phi * sol.coefficients.block(Eigen::Index(off), 0, phi.cols(), n);
    out += mesh.to_uniform_shared(e, psi);
    off += std::size_t(phi.cols());
  }
  return out;
}

RealVector reconstruct_density(const DGEigenSolution &sol, const DGBasis &basis, int n)
{
  require(n <= sol.coefficients.cols(), "reconstruct_density: solution has fewer states than requested");
  const ElementMesh &mesh = *basis.mesh;
  RealVector rho = RealVector::Zero(Eigen::Index(mesh.grid().size()));
  std::size_t off = 0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e)
  {
    const auto &phi = basis.locals[e].values;
    const RealMatrix psi = phi * sol.coefficients.block(Eigen::Index(off), 0, phi.cols(), n);
    const RealMatrix on_grid = mesh.to_element_grid(e, psi);
    const std::vector<std::size_t> pts = mesh.grid_points(e);
    for (std::size_t l = 0; l < pts.size(); ++l)
    {
      rho[Eigen::Index(pts[l])] += mesh.share()[Eigen::Index(pts[l])] * on_grid.row(Eigen::Index(l)).squaredNorm();
    }
    off += std::size_t(phi.cols());
  }
  return rho;
}

RealMatrix reconstruct_projector_kernel(const DGEigenSolution &sol, const DGBasis &basis, int n)
{
  if (basis.mesh->dim() != 1)
  {
    throw UnsupportedError("projector kernel: only available in 1D");
  }
  const RealMatrix psi = dg_orbitals_on_grid(sol, basis, n);
  return psi * psi.transpose();
}

double relative_eigenvalue_error(const RealVector &computed, const RealVector &reference)
{
  require(computed.size() == reference.size(), "relative error: lists differ in length");
  const double den = reference.cwiseAbs().sum();
  if (!(den > 0.0))
  {
    throw InvalidArgument("relative error: undefined for an all-zero reference");
  }
  return (computed - reference).cwiseAbs().sum() / den;
}

}  // namespace gcalb
