// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/basis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "core/random.hpp"

namespace gcalb
{

namespace
{

struct ThinSvd
{
  RealMatrix u;
  RealVector s;
};

// Thin SVD of a tall matrix through Householder QR and a small Jacobi SVD.
ThinSvd thin_svd(const RealMatrix &a)
{
  ThinSvd out;
  const Eigen::Index k = std::min(a.rows(), a.cols());
  Eigen::HouseholderQR<RealMatrix> qr(a);
  const RealMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<RealMatrix> svd(r, Eigen::ComputeThinU);
  const RealMatrix q = qr.householderQ() * RealMatrix::Identity(a.rows(), k);
  out.u = q * svd.matrixU();
  out.s = svd.singularValues();
  return out;
}

}  // namespace

RandomSketch random_orthonormal(std::size_t n_g, std::size_t q, std::uint64_t seed)
{
  if (q > n_g)
  {
    throw InvalidArgument("random_orthonormal: rank " + std::to_string(q) + " exceeds dimension " +
                          std::to_string(n_g));
  }
  RandomSketch s;
  s.seed = seed;
  s.columns = gaussian_matrix(Eigen::Index(n_g), Eigen::Index(q), seed);
  for (Eigen::Index j = 0; j < s.columns.cols(); ++j)
  {
    for (int pass = 0; pass < 2; ++pass)
    {
      for (Eigen::Index i = 0; i < j; ++i)
      {
        s.columns.col(j) -= s.columns.col(i).dot(s.columns.col(j)) * s.columns.col(i);
      }
    }
    const double nrm = s.columns.col(j).norm();
    if (!(nrm > 0.0))
    {
      throw NumericalError("random_orthonormal: degenerate Gaussian draw");
    }
    s.columns.col(j) /= nrm;
  }
  return s;
}

RangeFinderResult randomized_range_finder(const BlockOperator &apply_a, std::size_t n_g, int k, int c,
                                          std::uint64_t seed)
{
  require(k >= 0 && c >= 0 && std::size_t(k + c) <= n_g, "range finder: need k + c <= N_g");
  const RandomSketch r = random_orthonormal(n_g, std::size_t(k + c), seed);
  const RealMatrix w = apply_a(r.columns);
  require(std::size_t(w.rows()) == n_g, "range finder: operator returned the wrong size");
  const ThinSvd svd = thin_svd(w);
  RangeFinderResult out;
  out.singular_values = svd.s;
  const double s1 = svd.s.size() > 0 ? svd.s[0] : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(k, svd.s.size()); ++i)
  {
    if (s1 > 0.0 && svd.s[i] >= 1e-14 * s1)
    {
      ++rank;
    }
  }
  out.rank = rank;
  out.rank_warning = rank < k;
  out.vectors = svd.u.leftCols(rank);
  return out;
}

std::size_t DGBasis::total() const
{
  std::size_t t = 0;
  for (const auto &l : locals)
  {
    t += std::size_t(l.count());
  }
  return t;
}

std::size_t DGBasis::offset(std::size_t element) const
{
  std::size_t t = 0;
  for (std::size_t e = 0; e < element; ++e)
  {
    t += std::size_t(locals[e].count());
  }
  return t;
}

DGBasis basis_from_samples(std::shared_ptr<const ElementMesh> mesh, const RealMatrix &samples, int n_b,
                           double drop_tol)
{
  require(n_b >= 1, "basis: n_b must be positive");
  require(std::size_t(samples.rows()) == mesh->grid().size(), "basis: samples must live on the uniform grid");
  DGBasis basis;
  basis.mesh = mesh;
  const RealVector sqrt_w = mesh->weights().cwiseSqrt();
  const std::vector<RealMatrix> blocks = mesh->to_elements(samples);
  bool deficient = false;
  for (std::size_t e = 0; e < blocks.size(); ++e)
  {
    const ThinSvd svd = thin_svd(sqrt_w.asDiagonal() * blocks[e]);
    const double s1 = svd.s.size() > 0 ? svd.s[0] : 0.0;
    int keep = 0;
    while (keep < n_b && keep < svd.s.size() && s1 > 0.0 && svd.s[keep] > drop_tol * s1)
    {
      ++keep;
    }
    deficient = deficient || keep < n_b;
    LocalBasis local;
    local.element = e;
    local.values = sqrt_w.cwiseInverse().asDiagonal() * svd.u.leftCols(keep);
    local.singular_values = svd.s.head(keep);
    basis.locals.push_back(std::move(local));
  }
  if (deficient)
  {
    basis.warnings.push_back("basis: numerical rank below n_b on at least one element");
  }
  return basis;
}

double weighted_gram_error(const ElementMesh &mesh, const LocalBasis &local)
{
  const RealMatrix g = local.values.transpose() * mesh.weights().asDiagonal() * local.values;
  return (g - RealMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

DGBasis build_gcalb(const BlockOperator &apply_fh, std::shared_ptr<const ElementMesh> mesh, int n_b, int c,
                    std::uint64_t seed)
{
  const std::size_t ng = mesh->grid().size();
  require(n_b >= 1 && c >= 0 && std::size_t(n_b + c) <= ng, "build_gcalb: need n_b + c <= N_g");
  const RandomSketch r = random_orthonormal(ng, std::size_t(n_b + c), seed);
  return basis_from_samples(mesh, apply_fh(r.columns), n_b);
}

DGBasis build_lcalb(const Hamiltonian &h, std::shared_ptr<const ElementMesh> mesh, int n_b, const LcalbConfig &cfg)
{
  require(n_b >= 1, "build_lcalb: n_b must be positive");
  if (h.nonlocal)
  {
    throw UnsupportedError("build_lcalb: nonlocal operators are not supported");
  }
  const UniformGrid &grid = mesh->grid();
  const Partition &part = mesh->partition();
  const int dim = grid.dim;
  const int np = mesh->nodes_per_dim();
  std::array<int, 3> per_elem{1, 1, 1};
  for (int d = 0; d < dim; ++d)
  {
    if (grid.points[d] % part.elements[d] != 0)
    {
      throw UnsupportedError("build_lcalb: grid points must be divisible by the element count");
    }
    per_elem[d] = grid.points[d] / part.elements[d];
  }
  DGBasis basis;
  basis.mesh = mesh;
  const RealVector sqrt_w = mesh->weights().cwiseSqrt();
  bool deficient = false;
  for (std::size_t e = 0; e < mesh->element_count(); ++e)
  {
    const Index3 ei = part.multi_index(e);
    std::array<double, 3> ext_len{};
    std::array<int, 3> ext_pts{};
    Index3 start{0, 0, 0};
    for (int d = 0; d < dim; ++d)
    {
      if (part.elements[d] <= 3)
      {
        ext_len[d] = grid.lengths[d];
        ext_pts[d] = grid.points[d];
        start[d] = 0;
      }
      else
      {
        ext_len[d] = 3.0 * part.element_length(d);
        ext_pts[d] = 3 * per_elem[d];
        start[d] = (ei[d] - 1) * per_elem[d];
      }
    }
    const UniformGrid ext = UniformGrid::make(std::span<const double>(ext_len.data(), dim),
                                              std::span<const int>(ext_pts.data(), dim));
    RealVector v(Eigen::Index(ext.size()));
    for (std::size_t g = 0; g < ext.size(); ++g)
    {
      const Index3 li = ext.multi_index(g);
      Index3 gi{0, 0, 0};
      for (int d = 0; d < dim; ++d)
      {
        gi[d] = ((start[d] + li[d]) % grid.points[d] + grid.points[d]) % grid.points[d];
      }
      v[Eigen::Index(g)] = h.potential[Eigen::Index(grid.flat_index(gi))];
    }
    const Hamiltonian local_h = Hamiltonian::make(ext, h.kinetic, v);
    const int want = int(std::min<std::size_t>(std::size_t(n_b), ext.size()));
    EigResult eig;
    try
    {
      eig = lobpcg(local_h, want, cfg.lobpcg);
    }
    catch (const EigConvergenceError &err)
    {
      throw ConvergenceError("build_lcalb: element " + std::to_string(e) + ": " + err.what());
    }
    // Interpolate to this element's LGL nodes in extended-element coordinates.
    std::array<RealMatrix, 3> mats;
    std::array<const RealMatrix *, 3> ptrs{};
    const Point3 lo = part.lower(e);
    for (int d = 0; d < dim; ++d)
    {
      std::vector<double> targets;
      const double origin = start[d] * grid.spacing(d);
      for (int q = 0; q < np; ++q)
      {
        targets.push_back(lo[d] + (mesh->rule().nodes[q] + 1.0) * mesh->jacobian(d) - origin);
      }
      mats[d] = fourier_interpolation_matrix(ext.points[d], ext.lengths[d], targets);
      ptrs[d] = &mats[d];
    }
    const RealMatrix on_nodes =
        apply_tensor(std::span<const RealMatrix *const>(ptrs.data(), dim), ext.points, eig.eigenvectors);
    const ThinSvd svd = thin_svd(sqrt_w.asDiagonal() * on_nodes);
    const double s1 = svd.s.size() > 0 ? svd.s[0] : 0.0;
    int keep = 0;
    while (keep < want && keep < svd.s.size() && s1 > 0.0 && svd.s[keep] > cfg.drop_tol * s1)
    {
      ++keep;
    }
    deficient = deficient || keep < n_b;
    LocalBasis local;
    local.element = e;
    local.values = sqrt_w.cwiseInverse().asDiagonal() * svd.u.leftCols(keep);
    local.singular_values = svd.s.head(keep);
    basis.locals.push_back(std::move(local));
  }
  if (deficient)
  {
    basis.warnings.push_back("build_lcalb: linearly dependent local functions removed on at least one element");
  }
  return basis;
}

DGBasis build_opt_basis(const RealMatrix &psi, std::shared_ptr<const ElementMesh> mesh, int n_b)
{
  const int n = int(psi.cols());
  require(n >= 1, "build_opt_basis: need at least one eigenfunction");
  int keep = n_b;
  std::vector<std::string> warn;
  if (n_b > n)
  {
    keep = n;
    warn.push_back("build_opt_basis: n_b = " + std::to_string(n_b) + " exceeds n = " + std::to_string(n) +
                   ", truncated to n");
  }
  DGBasis basis = basis_from_samples(std::move(mesh), psi, keep);
  basis.warnings.insert(basis.warnings.begin(), warn.begin(), warn.end());
  return basis;
}

}  // namespace gcalb
