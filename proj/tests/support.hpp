// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <memory>

#include <Eigen/Dense>

#include "core/domain.hpp"
#include "core/experiment.hpp"
#include "core/operator.hpp"
#include "core/random.hpp"

namespace gcalb::test
{

inline UniformGrid grid_1d(int points, double length = 2.0 * pi)
{
  return UniformGrid::cube(1, length, points);
}

// The four-well potential of the 1D linear example sampled on `points` points.
inline Hamiltonian wells_1d(int points)
{
  ExperimentConfig cfg = ExperimentConfig::defaults(Experiment::lin1d);
  const UniformGrid grid = grid_1d(points, cfg.length);
  return Hamiltonian::make(grid, 1.0, build_gaussian_potential(linear_wells(cfg), grid));
}

inline std::shared_ptr<const ElementMesh> mesh_1d(const UniformGrid &grid, int elements, int lgl_points)
{
  const int e[1] = {elements};
  return std::make_shared<ElementMesh>(grid, Partition::make(grid, e), lgl_points);
}

// Smooth symmetric periodic kernel and a symmetric projector-like matrix for
// exercising the nonlocal operator path.
inline std::shared_ptr<NonlocalExchange> random_exchange(const UniformGrid &grid, std::uint64_t seed)
{
  const Eigen::Index n = Eigen::Index(grid.size());
  auto ex = std::make_shared<NonlocalExchange>();
  ex->kernel.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      const double d = grid.coordinate(0, int(i)) - grid.coordinate(0, int(j));
      ex->kernel(i, j) = std::exp(std::cos(2.0 * pi * d / grid.lengths[0]));
    }
  }
  const RealMatrix q = gaussian_matrix(n, 3, seed).householderQr().householderQ() * RealMatrix::Identity(n, 3);
  ex->projector = q * q.transpose() / grid.cell_volume();
  ex->alpha_x = 0.3;
  return ex;
}

}  // namespace gcalb::test
