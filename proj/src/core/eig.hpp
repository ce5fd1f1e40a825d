// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

#include "core/common.hpp"
#include "core/operator.hpp"

namespace gcalb
{

struct EigResult
{
  RealVector eigenvalues;   // ascending
  RealMatrix eigenvectors;  // unit Euclidean norm columns on the uniform grid
  RealVector residuals;     // |H x - lambda x| per pair
  int iterations = 0;
};

struct LobpcgConfig
{
  double tol = 1e-12;
  int max_iter = 1000;
  int guard = 5;
  std::uint64_t seed = 2024;
};

// Preconditioner T(R, shift) applied to a block of residuals.
using BlockPreconditioner = std::function<RealMatrix(const RealMatrix &, double shift)>;

class EigConvergenceError : public ConvergenceError
{
public:
  EigConvergenceError(const std::string &what, RealVector residuals)
      : ConvergenceError(what), residuals_(std::move(residuals))
  {
  }
  const RealVector &residuals() const { return residuals_; }

private:
  RealVector residuals_;
};

// Smallest residual norm that roundoff allows for this operator.
double lobpcg_residual_floor(const Hamiltonian &h);

// Lowest n eigenpairs by LOBPCG with Rayleigh-Ritz on [X, W, P] and soft
// locking. Without a preconditioner the shifted-Laplacian inverse is used with
// shift min(smallest Ritz value, 0) - 1.
EigResult lobpcg(const Hamiltonian &h, int n, const LobpcgConfig &cfg = {}, const BlockPreconditioner &precond = {},
                 const RealMatrix *initial = nullptr);

// Dense materialization of H from unit vectors followed by a full symmetric
// eigensolve. Limited to 4096 grid points.
EigResult dense_reference_eig(const Hamiltonian &h);
RealMatrix materialize(const Hamiltonian &h);

}  // namespace gcalb
