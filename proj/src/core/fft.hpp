// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/common.hpp"
#include "core/domain.hpp"

namespace gcalb
{

// Unnormalized complex DFTs over a uniform grid's flat layout. Plans are
// created once per grid shape and shared between threads.
void fft_forward(const UniformGrid &grid, ComplexVector &data);
// Inverse transform including the 1/N_g normalization.
void fft_backward(const UniformGrid &grid, ComplexVector &data);

// Squared wavenumber |k|^2 of every Fourier bin in flat order.
RealVector wavenumber_squared(const UniformGrid &grid);

// Spectral -Laplacian of real samples.
RealVector negative_laplacian(const UniformGrid &grid, const RealVector &v);

}  // namespace gcalb
