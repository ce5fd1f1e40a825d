// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "core/common.hpp"

namespace gcalb
{

struct DenseEig
{
  RealVector values;   // ascending
  RealMatrix vectors;  // columns
};

// Lowest `count` eigenpairs of a real symmetric matrix (LAPACK dsyevr). Only
// the lower triangle is referenced. count < 0 means all of them.
DenseEig symmetric_eig(const RealMatrix &a, int count = -1);

}  // namespace gcalb
