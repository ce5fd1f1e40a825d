// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "core/common.hpp"

namespace gcalb
{

// Standard-normal matrix whose column j depends only on (seed, j), so a wider
// sketch extends a narrower one with the same seed.
inline RealMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
  RealMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
  {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(j), std::uint32_t(j >> 32)};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < rows; ++i)
    {
      g(i, j) = normal(gen);
    }
  }
  return g;
}

}  // namespace gcalb
