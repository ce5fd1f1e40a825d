// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "core/basis.hpp"
#include "core/common.hpp"
#include "core/operator.hpp"

namespace gcalb
{

struct DGMatrix
{
  RealMatrix matrix;
  std::vector<std::size_t> offsets;  // first row of each element block
  std::vector<int> counts;           // N_kappa per element
  double kinetic = 1.0;
  std::size_t size() const { return std::size_t(matrix.rows()); }
};

struct PenaltyParams
{
  std::vector<double> gamma;  // one per element
};

// c_k * safety * largest eigenvalue of the face form sum_F int (phi phi + dn phi dn phi)
// relative to the element H1 form over the local basis.
double estimate_penalty(const ElementMesh &mesh, const LocalBasis &local, double kinetic, double safety = 2.0);
PenaltyParams estimate_penalties(const DGBasis &basis, double kinetic, double safety = 2.0);

DGMatrix assemble_dg(const Hamiltonian &h, const DGBasis &basis, const PenaltyParams &penalties);

struct DGEigenSolution
{
  RealVector eigenvalues;    // ascending
  RealMatrix coefficients;   // N_K x n
};

DGEigenSolution solve_dg_eig(const DGMatrix &a, int n);

// Eigenfunctions sampled on the uniform grid (averaged at points shared by
// several closed elements).
RealMatrix dg_orbitals_on_grid(const DGEigenSolution &sol, const DGBasis &basis, int n);

// rho(x) = sum_{i<n} |psi_i(x)|^2 on the uniform grid.
RealVector reconstruct_density(const DGEigenSolution &sol, const DGBasis &basis, int n);

// Dense kernel P(x_i, x_j) on the uniform grid (1D only).
RealMatrix reconstruct_projector_kernel(const DGEigenSolution &sol, const DGBasis &basis, int n);

// sum |computed_i - reference_i| / sum |reference_i|
double relative_eigenvalue_error(const RealVector &computed, const RealVector &reference);

}  // namespace gcalb
