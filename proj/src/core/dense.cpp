// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/dense.hpp"

#include <lapacke.h>

#include <vector>

namespace gcalb
{

DenseEig symmetric_eig(const RealMatrix &a, int count)
{
  require(a.rows() == a.cols(), "symmetric_eig: matrix must be square");
  const lapack_int n = lapack_int(a.rows());
  if (count < 0)
  {
    count = int(n);
  }
  require(count <= n, "symmetric_eig: requested more eigenpairs than the dimension");
  DenseEig out;
  if (n == 0 || count == 0)
  {
    out.values.resize(0);
    out.vectors.resize(n, 0);
    return out;
  }
  RealMatrix work = a;
  lapack_int found = 0;
  RealVector w(n);
  RealMatrix z(n, count);
  std::vector<lapack_int> support(std::size_t(2 * count));
  const char range = (count == n) ? 'A' : 'I';
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', range, 'L', n, work.data(), n, 0.0, 0.0, 1, count,
                                         0.0, &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != count)
  {
    throw NumericalError("symmetric_eig: LAPACK dsyevr failed (info " + std::to_string(info) + ")");
  }
  out.values = w.head(count);
  out.vectors = std::move(z);
  return out;
}

}  // namespace gcalb
