// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "core/common.hpp"

namespace gcalb
{

using Index3 = std::array<int, 3>;
using Point3 = std::array<double, 3>;

// Periodic uniform grid on (0, L_0) x ... x (0, L_{d-1}). Flat indices run with
// dimension 0 fastest. Inactive trailing dimensions have one point.
struct UniformGrid
{
  int dim = 1;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  Index3 points{1, 1, 1};

  static UniformGrid make(std::span<const double> lengths, std::span<const int> points);
  static UniformGrid cube(int dim, double length, int points_per_dim);

  std::size_t size() const { return std::size_t(points[0]) * points[1] * points[2]; }
  double spacing(int d) const { return lengths[d] / points[d]; }
  double cell_volume() const;
  double volume() const { return lengths[0] * lengths[1] * lengths[2]; }
  double coordinate(int d, int i) const { return i * spacing(d); }
  Index3 multi_index(std::size_t flat) const;
  std::size_t flat_index(const Index3 &idx) const
  {
    return std::size_t(idx[0]) + std::size_t(points[0]) * (idx[1] + std::size_t(points[1]) * idx[2]);
  }
  Point3 point(std::size_t flat) const;

  // Fourier wavenumber of FFT bin i along dimension d. The Nyquist bin of an
  // even grid is assigned +N/2.
  double wavenumber(int d, int i) const;
};

// Legendre-Gauss-Lobatto rule with order + 1 nodes on [-1, 1].
struct LGLRule
{
  int order = 0;
  RealVector nodes;
  RealVector weights;
  RealVector barycentric_weights;
  RealMatrix differentiation;  // D(i, j) = l_j'(x_i)
};

LGLRule lgl_rule(int order);

// Spectral derivative of samples on a 1D LGL grid on [-1, 1].
RealVector lgl_differentiation(const LGLRule &rule, const RealVector &values);

// Rows evaluate the 1D Lagrange interpolant through the rule's nodes at the
// given reference coordinates, via the barycentric formula.
RealMatrix barycentric_matrix(const LGLRule &rule, std::span<const double> targets);

// Rows evaluate the periodic trigonometric interpolant of N equispaced samples
// on (0, L) at the given coordinates. The Nyquist mode of even N is split
// symmetrically so real data stays real.
RealMatrix fourier_interpolation_matrix(int n, double length, std::span<const double> targets);

// Trigonometric interpolation of grid samples at arbitrary points.
RealVector fourier_interpolate(const UniformGrid &grid, const RealVector &values,
                               std::span<const Point3> targets);

// Regular periodic partition of the grid's box into elements.
struct Partition
{
  int dim = 1;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  Index3 elements{1, 1, 1};

  static Partition make(const UniformGrid &grid, std::span<const int> elements_per_dim);

  std::size_t size() const { return std::size_t(elements[0]) * elements[1] * elements[2]; }
  double element_length(int d) const { return lengths[d] / elements[d]; }
  Index3 multi_index(std::size_t e) const;
  std::size_t flat_index(const Index3 &idx) const
  {
    return std::size_t(idx[0]) + std::size_t(elements[0]) * (idx[1] + std::size_t(elements[1]) * idx[2]);
  }
  // Periodically wrapped neighbor in direction d (offset -1 or +1).
  std::size_t neighbor(std::size_t e, int d, int offset) const;
  Point3 lower(std::size_t e) const;
  Point3 upper(std::size_t e) const;
};

// A face joins the upper side (along `dim`) of `left` with the lower side of
// `right`. The exterior normal of `left` is +e_dim, that of `right` is -e_dim.
struct Face
{
  std::size_t left = 0;
  std::size_t right = 0;
  int dim = 0;
};

std::vector<Face> partition_faces(const Partition &partition);

// Applies one small dense matrix per tensor axis: out = (M_2 x M_1 x M_0) in.
// `shape` is the input extent per axis; each matrix must have shape[d] columns.
RealMatrix apply_tensor(std::span<const RealMatrix *const> mats, const Index3 &shape, const RealMatrix &in);

// The element discretization shared by every DG module: a partition, one LGL
// rule in each element, and the maps between the global uniform grid and the
// element LGL grids.
class ElementMesh
{
public:
  ElementMesh(const UniformGrid &grid, const Partition &partition, int lgl_points_per_dim);

  const UniformGrid &grid() const { return grid_; }
  const Partition &partition() const { return partition_; }
  const LGLRule &rule() const { return rule_; }
  int dim() const { return grid_.dim; }
  std::size_t element_count() const { return partition_.size(); }
  int nodes_per_dim() const { return rule_.order + 1; }
  std::size_t nodes_per_element() const { return node_count_; }
  Index3 node_shape() const;

  // Quadrature weights of the tensor LGL rule mapped onto any element.
  const RealVector &weights() const { return weights_; }
  double jacobian(int d) const { return 0.5 * partition_.element_length(d); }
  Point3 node(std::size_t e, std::size_t q) const;
  Index3 node_multi_index(std::size_t q) const;

  // Uniform-grid columns to per-element LGL samples (nodes x columns each).
  std::vector<RealMatrix> to_elements(const RealMatrix &uniform) const;
  RealMatrix to_element(const RealMatrix &uniform, std::size_t e) const;

  // Element LGL samples to the uniform grid points inside the closed element.
  // Points on shared element boundaries receive the average over elements.
  RealMatrix to_uniform(std::span<const RealMatrix> element_values) const;
  // Samples of one element's functions at the grid points in its closure,
  // zero elsewhere, each multiplied by share(x) = 1 / (number of closed
  // elements containing x).
  RealMatrix to_uniform_shared(std::size_t e, const RealMatrix &element_values) const;
  // Flat indices of the uniform grid points in the closure of element e, and
  // the element's samples evaluated there (same order).
  std::vector<std::size_t> grid_points(std::size_t e) const;
  RealMatrix to_element_grid(std::size_t e, const RealMatrix &element_values) const;
  const RealVector &share() const { return share_; }

  // Derivative along dimension d of element samples (physical units).
  RealMatrix derivative(const RealMatrix &element_values, int d) const;

  // Local node indices on the lower (side 0) or upper (side 1) face normal to d.
  const std::vector<std::size_t> &face_nodes(int d, int side) const { return face_nodes_[d][side]; }
  // Quadrature weights on a face normal to d (physical units).
  const RealVector &face_weights(int d) const { return face_weights_[d]; }

private:
  struct GridSlice
  {
    std::vector<int> grid_index;
    RealMatrix bary;  // grid points x (p + 1)
  };

  UniformGrid grid_;
  Partition partition_;
  LGLRule rule_;
  std::size_t node_count_ = 0;
  RealVector weights_;
  std::array<RealMatrix, 3> to_lgl_;  // (M_d (p+1)) x N_d
  std::array<std::vector<GridSlice>, 3> slices_;  // per dim, per element coordinate
  RealVector share_;  // 1 / multiplicity for every uniform grid point
  std::array<std::array<std::vector<std::size_t>, 2>, 3> face_nodes_;
  std::array<RealVector, 3> face_weights_;
};

}  // namespace gcalb
