// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "core/common.hpp"
#include "core/domain.hpp"

namespace gcalb
{

struct GaussianWellSpec
{
  std::vector<Point3> centers;
  std::vector<double> depths;
  std::vector<double> sigmas;
};

// V(x) = sum_i depth_i exp(-|x - c_i|^2 / (2 sigma_i^2)) with the minimum-image
// periodic distance.
RealVector build_gaussian_potential(const GaussianWellSpec &spec, const UniformGrid &grid);

// Dense 1D nonlocal terms of the Hartree-Fock-like model:
//   v -> (int K(x,y) (m(y) + P(y,y)) dy) v(x) - alpha_x int K(x,y) P(x,y) v(y) dy.
// The Hartree part can be switched off when the caller folds it into the local
// potential instead.
struct NonlocalExchange
{
  RealMatrix kernel;       // K(x_i, x_j)
  RealMatrix projector;    // P(x_i, x_j)
  RealVector background;   // m(x_i); empty means zero
  double alpha_x = 0.0;
  bool include_hartree = true;
};

struct Hamiltonian
{
  UniformGrid grid;
  double kinetic = 1.0;
  RealVector potential;
  std::shared_ptr<const NonlocalExchange> nonlocal;

  static Hamiltonian make(const UniformGrid &grid, double kinetic, RealVector potential,
                          std::shared_ptr<const NonlocalExchange> nonlocal = nullptr);

  std::size_t size() const { return grid.size(); }
  ComplexMatrix apply(const ComplexMatrix &v) const;
  RealMatrix apply(const RealMatrix &v) const;
  // Crude upper estimate of the spectral radius used for roundoff floors.
  double norm_estimate() const;
  const RealVector &kinetic_symbol() const { return symbol_; }  // c_k |k|^2 per bin
  // Local potential plus the Hartree term when the nonlocal part carries one.
  const RealVector &effective_potential() const { return effective_; }
  // -alpha_x h K(x_i, x_j) P(x_i, x_j); empty without nonlocal terms.
  const RealMatrix &exchange_matrix() const { return exchange_; }

private:
  RealVector symbol_;
  RealVector effective_;
  RealMatrix exchange_;
};

// (-c_k Delta - shift)^{-1} v by division in Fourier space.
ComplexMatrix apply_shifted_laplacian_inverse(const UniformGrid &grid, double kinetic, cplx shift,
                                              const ComplexMatrix &v);

struct SpectrumBounds
{
  double lambda_min_est = 0.0;
  std::optional<double> lambda_n_est;
  double lambda_max_est = 0.0;
};

// Lanczos with full reorthogonalization from a seeded random start. Extreme
// Ritz values are widened by their residual norms.
SpectrumBounds estimate_spectrum_bounds(const Hamiltonian &h, int iterations, std::uint64_t seed = 1);

}  // namespace gcalb
