// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace gcalb
{

namespace
{

struct PlanPair
{
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  fftw_complex *buffer = nullptr;
  std::size_t size = 0;
};

std::mutex &plan_mutex()
{
  static std::mutex m;
  return m;
}

// FFTW planning is not thread safe; execution through the new-array interface
// on private buffers is. Plans live for the lifetime of the process.
const PlanPair &plans_for(const UniformGrid &grid)
{
  static std::map<std::tuple<int, int, int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  const auto key = std::make_tuple(grid.dim, grid.points[0], grid.points[1], grid.points[2]);
  auto it = cache.find(key);
  if (it != cache.end())
  {
    return it->second;
  }
  PlanPair p;
  p.size = grid.size();
  p.buffer = fftw_alloc_complex(p.size);
  int n[3];
  // FFTW is row-major: the last listed dimension varies fastest.
  for (int d = 0; d < grid.dim; ++d)
  {
    n[d] = grid.points[grid.dim - 1 - d];
  }
  p.forward = fftw_plan_dft(grid.dim, n, p.buffer, p.buffer, FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft(grid.dim, n, p.buffer, p.buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (p.forward == nullptr || p.backward == nullptr)
  {
    throw NumericalError("fft: plan creation failed");
  }
  return cache.emplace(key, p).first->second;
}

void execute(const UniformGrid &grid, ComplexVector &data, bool forward)
{
  require(std::size_t(data.size()) == grid.size(), "fft: size mismatch");
  const PlanPair &p = plans_for(grid);
  fftw_complex *buf = fftw_alloc_complex(p.size);
  std::copy(data.data(), data.data() + data.size(), reinterpret_cast<cplx *>(buf));
  fftw_execute_dft(forward ? p.forward : p.backward, buf, buf);
  std::copy(reinterpret_cast<cplx *>(buf), reinterpret_cast<cplx *>(buf) + data.size(), data.data());
  fftw_free(buf);
}

}  // namespace

void fft_forward(const UniformGrid &grid, ComplexVector &data)
{
  execute(grid, data, true);
}

void fft_backward(const UniformGrid &grid, ComplexVector &data)
{
  execute(grid, data, false);
  data /= double(grid.size());
}

RealVector wavenumber_squared(const UniformGrid &grid)
{
  RealVector k2(Eigen::Index(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g)
  {
    const Index3 idx = grid.multi_index(g);
    double s = 0.0;
    for (int d = 0; d < grid.dim; ++d)
    {
      const double k = grid.wavenumber(d, idx[d]);
      s += k * k;
    }
    k2[Eigen::Index(g)] = s;
  }
  return k2;
}

RealVector negative_laplacian(const UniformGrid &grid, const RealVector &v)
{
  ComplexVector c = v.cast<cplx>();
  fft_forward(grid, c);
  c.array() *= wavenumber_squared(grid).array().cast<cplx>();
  fft_backward(grid, c);
  return c.real();
}

}  // namespace gcalb
