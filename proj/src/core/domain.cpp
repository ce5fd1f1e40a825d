// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gcalb
{

UniformGrid UniformGrid::make(std::span<const double> lengths, std::span<const int> points)
{
  require(!lengths.empty() && lengths.size() <= 3 && lengths.size() == points.size(),
          "grid: lengths and points must have the same size in {1,2,3}");
  UniformGrid g;
  g.dim = int(lengths.size());
  for (int d = 0; d < g.dim; ++d)
  {
    require(lengths[d] > 0.0, "grid: lengths must be positive");
    require(points[d] >= 2, "grid: at least two points per dimension");
    g.lengths[d] = lengths[d];
    g.points[d] = points[d];
  }
  return g;
}

UniformGrid UniformGrid::cube(int dim, double length, int points_per_dim)
{
  require(dim >= 1 && dim <= 3, "grid: dimension must be 1, 2 or 3");
  std::array<double, 3> l{length, length, length};
  std::array<int, 3> n{points_per_dim, points_per_dim, points_per_dim};
  return make(std::span<const double>(l.data(), dim), std::span<const int>(n.data(), dim));
}

double UniformGrid::cell_volume() const
{
  double v = 1.0;
  for (int d = 0; d < dim; ++d)
  {
    v *= spacing(d);
  }
  return v;
}

Index3 UniformGrid::multi_index(std::size_t flat) const
{
  Index3 idx{0, 0, 0};
  idx[0] = int(flat % points[0]);
  flat /= points[0];
  idx[1] = int(flat % points[1]);
  idx[2] = int(flat / points[1]);
  return idx;
}

Point3 UniformGrid::point(std::size_t flat) const
{
  const Index3 idx = multi_index(flat);
  Point3 x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d)
  {
    x[d] = coordinate(d, idx[d]);
  }
  return x;
}

double UniformGrid::wavenumber(int d, int i) const
{
  const int n = points[d];
  const int m = (i <= n / 2) ? i : i - n;
  return 2.0 * pi * m / lengths[d];
}

LGLRule lgl_rule(int order)
{
  require(order >= 1, "lgl_rule: invalid order " + std::to_string(order) + " (need >= 1)");
  const int np = order + 1;
  LGLRule rule;
  rule.order = order;
  RealVector x(np), xold(np), pn(np), pnm1(np);
  for (int j = 0; j < np; ++j)
  {
    x[j] = -std::cos(pi * j / order);
  }
  // Newton iteration for the roots of (1 - x^2) P_p'(x).
  for (int iter = 0; iter < 100; ++iter)
  {
    xold = x;
    RealVector p0 = RealVector::Ones(np), p1 = x;
    for (int k = 2; k <= order; ++k)
    {
      RealVector p2 = ((2.0 * k - 1.0) * x.cwiseProduct(p1) - (k - 1.0) * p0) / double(k);
      p0 = p1;
      p1 = p2;
    }
    pn = p1;
    pnm1 = p0;
    x = xold - (x.cwiseProduct(pn) - pnm1).cwiseQuotient(np * pn);
    if ((x - xold).cwiseAbs().maxCoeff() < 1e-15)
    {
      break;
    }
  }
  RealVector p0 = RealVector::Ones(np), p1 = x;
  for (int k = 2; k <= order; ++k)
  {
    RealVector p2 = ((2.0 * k - 1.0) * x.cwiseProduct(p1) - (k - 1.0) * p0) / double(k);
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  for (int j = 0; j < np; ++j)
  {
    x[j] = 0.5 * (x[j] - x[np - 1 - j]);
  }
  x[0] = -1.0;
  x[np - 1] = 1.0;
  rule.nodes = x;
  rule.weights.resize(np);
  for (int j = 0; j < np; ++j)
  {
    rule.weights[j] = 2.0 / (order * double(np) * pn[j] * pn[j]);
  }
  for (int j = 0; j < np / 2; ++j)
  {
    const double w = 0.5 * (rule.weights[j] + rule.weights[np - 1 - j]);
    rule.weights[j] = rule.weights[np - 1 - j] = w;
  }

  rule.barycentric_weights.resize(np);
  for (int j = 0; j < np; ++j)
  {
    double prod = 1.0;
    for (int k = 0; k < np; ++k)
    {
      if (k != j)
      {
        prod *= 0.5 * order * (x[j] - x[k]);
      }
    }
    rule.barycentric_weights[j] = 1.0 / prod;
  }
  const double scale = rule.barycentric_weights.cwiseAbs().maxCoeff();
  rule.barycentric_weights /= scale;

  rule.differentiation = RealMatrix::Zero(np, np);
  const RealVector &lam = rule.barycentric_weights;
  for (int i = 0; i < np; ++i)
  {
    double diag = 0.0;
    for (int j = 0; j < np; ++j)
    {
      if (i != j)
      {
        const double dij = (lam[j] / lam[i]) / (x[i] - x[j]);
        rule.differentiation(i, j) = dij;
        diag -= dij;
      }
    }
    rule.differentiation(i, i) = diag;
  }
  return rule;
}

RealVector lgl_differentiation(const LGLRule &rule, const RealVector &values)
{
  require(values.size() == rule.order + 1, "lgl_differentiation: size mismatch");
  return rule.differentiation * values;
}

RealMatrix barycentric_matrix(const LGLRule &rule, std::span<const double> targets)
{
  const int np = rule.order + 1;
  RealMatrix out = RealMatrix::Zero(Eigen::Index(targets.size()), np);
  for (std::size_t t = 0; t < targets.size(); ++t)
  {
    const double xt = targets[t];
    int exact = -1;
    for (int j = 0; j < np; ++j)
    {
      if (xt == rule.nodes[j])
      {
        exact = j;
        break;
      }
    }
    if (exact >= 0)
    {
      out(Eigen::Index(t), exact) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < np; ++j)
    {
      const double c = rule.barycentric_weights[j] / (xt - rule.nodes[j]);
      out(Eigen::Index(t), j) = c;
      denom += c;
    }
    out.row(Eigen::Index(t)) /= denom;
  }
  return out;
}

namespace
{

// Periodic cardinal function of an N-point equispaced grid at phase theta.
double periodic_cardinal(int n, double theta)
{
  theta = std::remainder(theta, 2.0 * pi);
  if (std::abs(theta) < 1e-3)
  {
    double s = 1.0;
    const int kmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
    for (int k = 1; k <= kmax; ++k)
    {
      s += 2.0 * std::cos(k * theta);
    }
    if (n % 2 == 0)
    {
      s += std::cos(0.5 * n * theta);
    }
    return s / n;
  }
  const double half = 0.5 * theta;
  if (n % 2 == 0)
  {
    return std::sin(0.5 * n * theta) * std::cos(half) / (n * std::sin(half));
  }
  return std::sin(0.5 * n * theta) / (n * std::sin(half));
}

}  // namespace

RealMatrix fourier_interpolation_matrix(int n, double length, std::span<const double> targets)
{
  RealMatrix out(Eigen::Index(targets.size()), n);
  const double h = length / n;
  for (std::size_t t = 0; t < targets.size(); ++t)
  {
    for (int j = 0; j < n; ++j)
    {
      out(Eigen::Index(t), j) = periodic_cardinal(n, 2.0 * pi * (targets[t] - j * h) / length);
    }
  }
  return out;
}

RealVector fourier_interpolate(const UniformGrid &grid, const RealVector &values, std::span<const Point3> targets)
{
  require(std::size_t(values.size()) == grid.size(), "fourier_interpolate: size mismatch");
  RealVector out(Eigen::Index(targets.size()));
  std::array<RealMatrix, 3> kernels;
  for (std::size_t t = 0; t < targets.size(); ++t)
  {
    std::array<const RealMatrix *, 3> mats{};
    for (int d = 0; d < grid.dim; ++d)
    {
      double x = targets[t][d];
      kernels[d] = fourier_interpolation_matrix(grid.points[d], grid.lengths[d], std::span<const double>(&x, 1));
      mats[d] = &kernels[d];
    }
    out[Eigen::Index(t)] = apply_tensor(std::span<const RealMatrix *const>(mats.data(), grid.dim), grid.points,
                                        values)(0, 0);
  }
  return out;
}

Partition Partition::make(const UniformGrid &grid, std::span<const int> elements_per_dim)
{
  require(int(elements_per_dim.size()) == grid.dim, "partition: one element count per dimension");
  Partition p;
  p.dim = grid.dim;
  p.lengths = grid.lengths;
  for (int d = 0; d < grid.dim; ++d)
  {
    require(elements_per_dim[d] >= 1, "partition: element counts must be positive");
    p.elements[d] = elements_per_dim[d];
  }
  return p;
}

Index3 Partition::multi_index(std::size_t e) const
{
  Index3 idx{0, 0, 0};
  idx[0] = int(e % elements[0]);
  e /= elements[0];
  idx[1] = int(e % elements[1]);
  idx[2] = int(e / elements[1]);
  return idx;
}

std::size_t Partition::neighbor(std::size_t e, int d, int offset) const
{
  Index3 idx = multi_index(e);
  idx[d] = ((idx[d] + offset) % elements[d] + elements[d]) % elements[d];
  return flat_index(idx);
}

Point3 Partition::lower(std::size_t e) const
{
  const Index3 idx = multi_index(e);
  Point3 x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d)
  {
    x[d] = idx[d] * element_length(d);
  }
  return x;
}

Point3 Partition::upper(std::size_t e) const
{
  const Index3 idx = multi_index(e);
  Point3 x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d)
  {
    x[d] = (idx[d] + 1) * element_length(d);
  }
  return x;
}

std::vector<Face> partition_faces(const Partition &partition)
{
  std::vector<Face> faces;
  faces.reserve(partition.size() * partition.dim);
  for (int d = 0; d < partition.dim; ++d)
  {
    for (std::size_t e = 0; e < partition.size(); ++e)
    {
      faces.push_back(Face{e, partition.neighbor(e, d, +1), d});
    }
  }
  return faces;
}

RealMatrix apply_tensor(std::span<const RealMatrix *const> mats, const Index3 &shape, const RealMatrix &in)
{
  const int dim = int(mats.size());
  Index3 n = shape;
  for (int d = dim; d < 3; ++d)
  {
    n[d] = 1;
  }
  std::size_t in_size = std::size_t(n[0]) * n[1] * n[2];
  require(std::size_t(in.rows()) == in_size, "apply_tensor: input size mismatch");
  Index3 m = n;
  for (int d = 0; d < dim; ++d)
  {
    require(mats[d]->cols() == n[d], "apply_tensor: matrix/axis mismatch");
    m[d] = int(mats[d]->rows());
  }
  const Eigen::Index out_size = Eigen::Index(m[0]) * m[1] * m[2];
  RealMatrix out(out_size, in.cols());
  RealMatrix stage0, stage1;
  for (Eigen::Index c = 0; c < in.cols(); ++c)
  {
    // axis 0
    Eigen::Map<const RealMatrix> x0(in.col(c).data(), n[0], Eigen::Index(n[1]) * n[2]);
    stage0.noalias() = (*mats[0]) * x0;  // m0 x (n1 n2)
    if (dim == 1)
    {
      out.col(c) = Eigen::Map<const RealVector>(stage0.data(), out_size);
      continue;
    }
    // axis 1: per n2 slice, (m0 x n1) * E1^T
    stage1.resize(Eigen::Index(m[0]) * m[1], n[2]);
    for (int k = 0; k < n[2]; ++k)
    {
      Eigen::Map<const RealMatrix> s(stage0.data() + Eigen::Index(k) * m[0] * n[1], m[0], n[1]);
      Eigen::Map<RealMatrix> t(stage1.data() + Eigen::Index(k) * m[0] * m[1], m[0], m[1]);
      t.noalias() = s * mats[1]->transpose();
    }
    if (dim == 2)
    {
      out.col(c) = Eigen::Map<const RealVector>(stage1.data(), out_size);
      continue;
    }
    Eigen::Map<RealMatrix> o(out.col(c).data(), Eigen::Index(m[0]) * m[1], m[2]);
    o.noalias() = stage1 * mats[2]->transpose();
  }
  return out;
}

ElementMesh::ElementMesh(const UniformGrid &grid, const Partition &partition, int lgl_points_per_dim)
    : grid_(grid), partition_(partition), rule_(lgl_rule(lgl_points_per_dim - 1))
{
  require(grid.dim == partition.dim, "element mesh: grid/partition dimension mismatch");
  const int np = lgl_points_per_dim;
  const int dim = grid.dim;
  node_count_ = 1;
  for (int d = 0; d < dim; ++d)
  {
    node_count_ *= std::size_t(np);
  }

  weights_.resize(Eigen::Index(node_count_));
  for (std::size_t q = 0; q < node_count_; ++q)
  {
    const Index3 qi = node_multi_index(q);
    double w = 1.0;
    for (int d = 0; d < dim; ++d)
    {
      w *= rule_.weights[qi[d]] * jacobian(d);
    }
    weights_[Eigen::Index(q)] = w;
  }

  std::array<std::vector<int>, 3> multiplicity;
  for (int d = 0; d < dim; ++d)
  {
    const int me = partition.elements[d];
    const double he = partition.element_length(d);
    const double h = grid.spacing(d);
    std::vector<double> targets;
    targets.reserve(std::size_t(me) * np);
    for (int e = 0; e < me; ++e)
    {
      for (int q = 0; q < np; ++q)
      {
        targets.push_back(e * he + (rule_.nodes[q] + 1.0) * 0.5 * he);
      }
    }
    to_lgl_[d] = fourier_interpolation_matrix(grid.points[d], grid.lengths[d], targets);

    multiplicity[d].assign(std::size_t(grid.points[d]), 0);
    slices_[d].resize(std::size_t(me));
    for (int e = 0; e < me; ++e)
    {
      const double lo = e * he;
      const double hi = (e + 1) * he;
      const int i0 = int(std::ceil(lo / h - 1e-9));
      const int i1 = int(std::floor(hi / h + 1e-9));
      GridSlice &slice = slices_[d][std::size_t(e)];
      std::vector<double> ref;
      for (int i = i0; i <= i1; ++i)
      {
        const int wrapped = ((i % grid.points[d]) + grid.points[d]) % grid.points[d];
        slice.grid_index.push_back(wrapped);
        double xi = 2.0 * (i * h - lo) / he - 1.0;
        xi = std::clamp(xi, -1.0, 1.0);
        if (std::abs(xi + 1.0) < 1e-12)
        {
          xi = -1.0;
        }
        if (std::abs(xi - 1.0) < 1e-12)
        {
          xi = 1.0;
        }
        ref.push_back(xi);
        ++multiplicity[d][std::size_t(wrapped)];
      }
      slice.bary = barycentric_matrix(rule_, ref);
    }
  }
  share_.resize(Eigen::Index(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g)
  {
    const Index3 gi = grid.multi_index(g);
    double count = 1.0;
    for (int d = 0; d < dim; ++d)
    {
      count *= multiplicity[d][std::size_t(gi[d])];
    }
    share_[Eigen::Index(g)] = 1.0 / count;
  }

  for (int d = 0; d < dim; ++d)
  {
    for (int side = 0; side < 2; ++side)
    {
      const int fixed = side == 0 ? 0 : np - 1;
      auto &nodes = face_nodes_[d][side];
      for (std::size_t q = 0; q < node_count_; ++q)
      {
        if (node_multi_index(q)[d] == fixed)
        {
          nodes.push_back(q);
        }
      }
    }
    const auto &nodes = face_nodes_[d][0];
    face_weights_[d].resize(Eigen::Index(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
      const Index3 qi = node_multi_index(nodes[i]);
      double w = 1.0;
      for (int t = 0; t < dim; ++t)
      {
        if (t != d)
        {
          w *= rule_.weights[qi[t]] * jacobian(t);
        }
      }
      face_weights_[d][Eigen::Index(i)] = w;
    }
  }
}

Index3 ElementMesh::node_shape() const
{
  Index3 s{1, 1, 1};
  for (int d = 0; d < dim(); ++d)
  {
    s[d] = nodes_per_dim();
  }
  return s;
}

Index3 ElementMesh::node_multi_index(std::size_t q) const
{
  const int np = nodes_per_dim();
  Index3 idx{0, 0, 0};
  for (int d = 0; d < dim(); ++d)
  {
    idx[d] = int(q % np);
    q /= np;
  }
  return idx;
}

Point3 ElementMesh::node(std::size_t e, std::size_t q) const
{
  const Point3 lo = partition_.lower(e);
  const Index3 qi = node_multi_index(q);
  Point3 x{0.0, 0.0, 0.0};
  for (int d = 0; d < dim(); ++d)
  {
    x[d] = lo[d] + (rule_.nodes[qi[d]] + 1.0) * jacobian(d);
  }
  return x;
}

std::vector<RealMatrix> ElementMesh::to_elements(const RealMatrix &uniform) const
{
  require(std::size_t(uniform.rows()) == grid_.size(), "to_elements: size mismatch");
  const int dim = this->dim();
  const int np = nodes_per_dim();
  std::array<const RealMatrix *, 3> mats{&to_lgl_[0], &to_lgl_[1], &to_lgl_[2]};
  std::vector<RealMatrix> out(element_count(), RealMatrix(Eigen::Index(node_count_), uniform.cols()));
  Index3 all_extent{1, 1, 1};
  for (int d = 0; d < dim; ++d)
  {
    all_extent[d] = partition_.elements[d] * np;
  }
  for (Eigen::Index c = 0; c < uniform.cols(); ++c)
  {
    const RealMatrix all =
        apply_tensor(std::span<const RealMatrix *const>(mats.data(), dim), grid_.points, uniform.col(c));
    for (std::size_t e = 0; e < element_count(); ++e)
    {
      const Index3 ei = partition_.multi_index(e);
      for (std::size_t q = 0; q < node_count_; ++q)
      {
        const Index3 qi = node_multi_index(q);
        const std::size_t a0 = std::size_t(ei[0]) * np + qi[0];
        const std::size_t a1 = std::size_t(ei[1]) * np + qi[1];
        const std::size_t a2 = std::size_t(ei[2]) * np + qi[2];
        const std::size_t flat = a0 + std::size_t(all_extent[0]) * (a1 + std::size_t(all_extent[1]) * a2);
        out[e](Eigen::Index(q), c) = all(Eigen::Index(flat), 0);
      }
    }
  }
  return out;
}

RealMatrix ElementMesh::to_element(const RealMatrix &uniform, std::size_t e) const
{
  require(std::size_t(uniform.rows()) == grid_.size(), "to_element: size mismatch");
  const int np = nodes_per_dim();
  const Index3 ei = partition_.multi_index(e);
  std::array<RealMatrix, 3> rows;
  std::array<const RealMatrix *, 3> mats{};
  for (int d = 0; d < dim(); ++d)
  {
    rows[d] = to_lgl_[d].middleRows(Eigen::Index(ei[d]) * np, np);
    mats[d] = &rows[d];
  }
  return apply_tensor(std::span<const RealMatrix *const>(mats.data(), dim()), grid_.points, uniform);
}

std::vector<std::size_t> ElementMesh::grid_points(std::size_t e) const
{
  const Index3 ei = partition_.multi_index(e);
  const std::vector<int> one{0};
  const std::vector<int> &i0 = slices_[0][std::size_t(ei[0])].grid_index;
  const std::vector<int> &i1 = dim() > 1 ? slices_[1][std::size_t(ei[1])].grid_index : one;
  const std::vector<int> &i2 = dim() > 2 ? slices_[2][std::size_t(ei[2])].grid_index : one;
  std::vector<std::size_t> out;
  out.reserve(i0.size() * i1.size() * i2.size());
  for (int k : i2)
  {
    for (int j : i1)
    {
      for (int i : i0)
      {
        out.push_back(grid_.flat_index(Index3{i, j, k}));
      }
    }
  }
  return out;
}

RealMatrix ElementMesh::to_element_grid(std::size_t e, const RealMatrix &element_values) const
{
  require(std::size_t(element_values.rows()) == node_count_, "to_uniform: element size mismatch");
  const Index3 ei = partition_.multi_index(e);
  std::array<const RealMatrix *, 3> mats{};
  for (int d = 0; d < dim(); ++d)
  {
    mats[d] = &slices_[d][std::size_t(ei[d])].bary;
  }
  return apply_tensor(std::span<const RealMatrix *const>(mats.data(), dim()), node_shape(), element_values);
}

RealMatrix ElementMesh::to_uniform_shared(std::size_t e, const RealMatrix &element_values) const
{
  RealMatrix out = RealMatrix::Zero(Eigen::Index(grid_.size()), element_values.cols());
  const RealMatrix local = to_element_grid(e, element_values);
  const std::vector<std::size_t> pts = grid_points(e);
  for (std::size_t l = 0; l < pts.size(); ++l)
  {
    out.row(Eigen::Index(pts[l])) += share_[Eigen::Index(pts[l])] * local.row(Eigen::Index(l));
  }
  return out;
}

RealMatrix ElementMesh::to_uniform(std::span<const RealMatrix> element_values) const
{
  require(element_values.size() == element_count(), "to_uniform: one block per element");
  const Eigen::Index ncols = element_values.empty() ? 0 : element_values[0].cols();
  RealMatrix out = RealMatrix::Zero(Eigen::Index(grid_.size()), ncols);
  for (std::size_t e = 0; e < element_count(); ++e)
  {
    out += to_uniform_shared(e, element_values[e]);
  }
  return out;
}

RealMatrix ElementMesh::derivative(const RealMatrix &element_values, int d) const
{
  require(std::size_t(element_values.rows()) == node_count_, "derivative: size mismatch");
  const Eigen::Index np = nodes_per_dim();
  const RealMatrix &dm = rule_.differentiation;
  const double scale = 1.0 / jacobian(d);
  RealMatrix out(element_values.rows(), element_values.cols());
  Eigen::Index inner = 1;
  for (int t = 0; t < d; ++t)
  {
    inner *= np;
  }
  const Eigen::Index outer = Eigen::Index(node_count_) / (inner * np);
  for (Eigen::Index c = 0; c < element_values.cols(); ++c)
  {
    if (d == 0)
    {
      Eigen::Map<const RealMatrix> x(element_values.col(c).data(), np, outer);
      Eigen::Map<RealMatrix> y(out.col(c).data(), np, outer);
      y.noalias() = scale * dm * x;
      continue;
    }
    for (Eigen::Index o = 0; o < outer; ++o)
    {
      Eigen::Map<const RealMatrix> x(element_values.col(c).data() + o * inner * np, inner, np);
      Eigen::Map<RealMatrix> y(out.col(c).data() + o * inner * np, inner, np);
      y.noalias() = scale * x * dm.transpose();
    }
  }
  return out;
}

}  // namespace gcalb
