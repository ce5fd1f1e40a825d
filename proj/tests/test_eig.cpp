// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>

#include "core/dense.hpp"
#include "core/eig.hpp"
#include "core/random.hpp"
#include "support.hpp"

using namespace gcalb;

TEST_CASE("lobpcg on the free laplacian")
{
  const Hamiltonian h = Hamiltonian::make(test::grid_1d(64), 1.0, RealVector::Zero(64));
  const EigResult r = lobpcg(h, 3);
  REQUIRE(r.eigenvalues.size() == 3);
  CHECK(std::abs(r.eigenvalues[0]) < 1e-10);
  CHECK(std::abs(r.eigenvalues[1] - 1.0) < 1e-10);
  CHECK(std::abs(r.eigenvalues[2] - 1.0) < 1e-10);
}

TEST_CASE("lobpcg matches the dense solve on the well potential")
{
  const Hamiltonian h = test::wells_1d(64);
  const EigResult dense = dense_reference_eig(h);
  LobpcgConfig cfg;
  const EigResult r = lobpcg(h, 4, cfg);
  CHECK((r.eigenvalues - dense.eigenvalues.head(4)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(r.residuals.maxCoeff() <= std::max(cfg.tol, lobpcg_residual_floor(h)));
  CHECK((r.eigenvectors.transpose() * r.eigenvectors - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

  SUBCASE("eigenvalues do not depend on the starting block")
  {
    for (std::uint64_t seed : {1u, 99u, 12345u})
    {
      LobpcgConfig c;
      c.seed = seed;
      CHECK((lobpcg(h, 4, c).eigenvalues - r.eigenvalues).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("dense reference eigensolve")
{
  SUBCASE("free particle on 8 points")
  {
    const EigResult r = dense_reference_eig(Hamiltonian::make(test::grid_1d(8), 1.0, RealVector::Zero(8)));
    const double expect[8] = {0, 1, 1, 4, 4, 9, 9, 16};
    for (int i = 0; i < 8; ++i)
    {
      CHECK(std::abs(r.eigenvalues[i] - expect[i]) < 1e-12);
    }
  }
  SUBCASE("potential dominated 4-point grid is sorted")
  {
    RealVector v(4);
    v << 50.0, -20.0, 10.0, -60.0;
    const EigResult r = dense_reference_eig(Hamiltonian::make(test::grid_1d(4), 0.01, v));
    for (int i = 1; i < 4; ++i)
    {
      CHECK(r.eigenvalues[i] >= r.eigenvalues[i - 1]);
    }
    CHECK(std::abs(r.eigenvalues[0] + 60.0) < 0.1);
  }
  SUBCASE("materialized matrix is symmetric")
  {
    const RealMatrix a = materialize(test::wells_1d(40));
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("adding a non-positive potential never raises an eigenvalue")
{
  const UniformGrid g = test::grid_1d(24);
  const EigResult free = dense_reference_eig(Hamiltonian::make(g, 1.0, RealVector::Zero(24)));
  for (std::uint64_t seed : {3u, 4u, 5u})
  {
    const RealVector v = -gaussian_matrix(24, 1, seed).col(0).cwiseAbs();
    const EigResult w = dense_reference_eig(Hamiltonian::make(g, 1.0, v));
    CHECK((w.eigenvalues - free.eigenvalues).maxCoeff() <= 1e-10);
  }
}

TEST_CASE("symmetric eigensolve agrees with an independent solver")
{
  const RealMatrix r = gaussian_matrix(8, 8, 21);
  const RealMatrix a = r + r.transpose();
  const DenseEig mine = symmetric_eig(a);
  Eigen::SelfAdjointEigenSolver<RealMatrix> ref(a);
  CHECK((mine.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  const DenseEig low = symmetric_eig(a, 3);
  CHECK(low.values.size() == 3);
  CHECK((a * low.vectors - low.vectors * low.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-12);
}
