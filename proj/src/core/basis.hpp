// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/domain.hpp"
#include "core/eig.hpp"
#include "core/operator.hpp"

namespace gcalb
{

using BlockOperator = std::function<RealMatrix(const RealMatrix &)>;

struct RandomSketch
{
  RealMatrix columns;  // Euclidean-orthonormal
  std::uint64_t seed = 0;
};

// Gaussian columns orthonormalized one at a time (Gram-Schmidt, two passes), so
// the first k columns of a wider sketch equal the narrower sketch bitwise.
RandomSketch random_orthonormal(std::size_t n_g, std::size_t q, std::uint64_t seed);

struct RangeFinderResult
{
  RealMatrix vectors;
  RealVector singular_values;
  int rank = 0;
  bool rank_warning = false;
};

RangeFinderResult randomized_range_finder(const BlockOperator &apply_a, std::size_t n_g, int k, int c,
                                          std::uint64_t seed);

struct LocalBasis
{
  std::size_t element = 0;
  RealMatrix values;  // element LGL nodes x N_kappa
  RealVector singular_values;
  int count() const { return int(values.cols()); }
};

struct DGBasis
{
  std::shared_ptr<const ElementMesh> mesh;
  std::vector<LocalBasis> locals;
  std::vector<std::string> warnings;

  std::size_t total() const;
  std::size_t offset(std::size_t element) const;
};

// LGL-weighted SVD per element of grid samples; keeps at most n_b left singular
// vectors and drops those below drop_tol * sigma_1.
DGBasis basis_from_samples(std::shared_ptr<const ElementMesh> mesh, const RealMatrix &samples, int n_b,
                           double drop_tol = 1e-14);

// Largest deviation of the LGL-weighted Gram matrix from the identity.
double weighted_gram_error(const ElementMesh &mesh, const LocalBasis &local);

DGBasis build_gcalb(const BlockOperator &apply_fh, std::shared_ptr<const ElementMesh> mesh, int n_b, int c,
                    std::uint64_t seed);

struct LcalbConfig
{
  LobpcgConfig lobpcg{1e-10, 2000, 5, 7};
  double drop_tol = 1e-12;
};

// Lowest eigenfunctions of H on each element extended by one neighbor per side
// (periodic), restricted to the element and orthonormalized there.
DGBasis build_lcalb(const Hamiltonian &h, std::shared_ptr<const ElementMesh> mesh, int n_b,
                    const LcalbConfig &cfg = {});

// Per-element left singular vectors of the reference eigenfunctions.
DGBasis build_opt_basis(const RealMatrix &psi, std::shared_ptr<const ElementMesh> mesh, int n_b);

}  // namespace gcalb
