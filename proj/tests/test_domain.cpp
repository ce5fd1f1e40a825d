// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "core/domain.hpp"
#include "core/random.hpp"
#include "support.hpp"

using namespace gcalb;

namespace
{

// Trigonometric interpolant evaluated by summing the DFT coefficients directly.
double dft_oracle(const RealVector &f, double length, double x)
{
  const int n = int(f.size());
  const double h = length / n;
  std::complex<double> sum = 0.0;
  for (int k = -(n / 2); k <= (n - 1) / 2; ++k)
  {
    std::complex<double> c = 0.0;
    for (int j = 0; j < n; ++j)
    {
      c += f[j] * std::exp(std::complex<double>(0.0, -2.0 * pi * k * j * h / length));
    }
    c /= double(n);
    if (n % 2 == 0 && k == -(n / 2))
    {
      sum += c.real() * std::cos(2.0 * pi * k * x / length);
    }
    else
    {
      sum += c * std::exp(std::complex<double>(0.0, 2.0 * pi * k * x / length));
    }
  }
  return sum.real();
}

double naive_lagrange(const RealVector &nodes, const RealVector &values, double x)
{
  double s = 0.0;
  for (Eigen::Index j = 0; j < nodes.size(); ++j)
  {
    double l = 1.0;
    for (Eigen::Index m = 0; m < nodes.size(); ++m)
    {
      if (m != j)
      {
        l *= (x - nodes[m]) / (nodes[j] - nodes[m]);
      }
    }
    s += values[j] * l;
  }
  return s;
}

}  // namespace

TEST_CASE("lgl rules of low order")
{
  const LGLRule p1 = lgl_rule(1);
  CHECK(p1.nodes[0] == doctest::Approx(-1.0));
  CHECK(p1.nodes[1] == doctest::Approx(1.0));
  CHECK(p1.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p1.weights[1] == doctest::Approx(1.0).epsilon(1e-14));

  const LGLRule p2 = lgl_rule(2);
  CHECK(std::abs(p2.nodes[1]) < 1e-15);
  CHECK(std::abs(p2.weights[0] - 1.0 / 3.0) < 1e-14);
  CHECK(std::abs(p2.weights[1] - 4.0 / 3.0) < 1e-14);
  CHECK(std::abs(p2.weights[2] - 1.0 / 3.0) < 1e-14);

  const LGLRule p3 = lgl_rule(3);
  const double r = 1.0 / std::sqrt(5.0);
  CHECK(std::abs(p3.nodes[1] + r) < 1e-14);
  CHECK(std::abs(p3.nodes[2] - r) < 1e-14);
  CHECK(std::abs(p3.weights[0] - 1.0 / 6.0) < 1e-14);
  CHECK(std::abs(p3.weights[1] - 5.0 / 6.0) < 1e-14);
  double x2 = 0.0;
  for (int i = 0; i < 4; ++i)
  {
    x2 += p3.weights[i] * p3.nodes[i] * p3.nodes[i];
  }
  CHECK(std::abs(x2 - 2.0 / 3.0) < 1e-14);
}

TEST_CASE("lgl quadrature is exact to degree 2p - 1")
{
  for (int p : {4, 9, 20, 39})
  {
    const LGLRule rule = lgl_rule(p);
    for (int deg = 0; deg <= 2 * p - 1; ++deg)
    {
      double s = 0.0;
      for (int i = 0; i <= p; ++i)
      {
        s += rule.weights[i] * std::pow(rule.nodes[i], deg);
      }
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
}

TEST_CASE("fourier interpolation")
{
  SUBCASE("constant samples")
  {
    const UniformGrid g = test::grid_1d(12);
    const RealVector v = RealVector::Constant(12, 2.5);
    const std::vector<Point3> t{{0.123, 0, 0}, {4.0, 0, 0}};
    const RealVector out = fourier_interpolate(g, v, t);
    CHECK(std::abs(out[0] - 2.5) < 1e-14);
    CHECK(std::abs(out[1] - 2.5) < 1e-14);
  }
  SUBCASE("resolvable cosine on 8 points")
  {
    const UniformGrid g = test::grid_1d(8);
    RealVector v(8);
    for (int i = 0; i < 8; ++i)
    {
      v[i] = std::cos(g.coordinate(0, i));
    }
    const std::vector<Point3> t{{0.3, 0, 0}};
    CHECK(std::abs(fourier_interpolate(g, v, t)[0] - std::cos(0.3)) < 1e-13);
  }
  SUBCASE("random samples against a direct DFT sum at element nodes")
  {
    for (int n : {15, 16})
    {
      const double length = 3.7;
      const UniformGrid g = test::grid_1d(n, length);
      const RealVector v = gaussian_matrix(n, 1, 11).col(0);
      const auto mesh = test::mesh_1d(g, 1, 9);
      std::vector<Point3> t;
      for (std::size_t q = 0; q < mesh->nodes_per_element(); ++q)
      {
        t.push_back(mesh->node(0, q));
      }
      const RealVector out = fourier_interpolate(g, v, t);
      const RealVector via_mesh = mesh->to_element(v, 0).col(0);
      for (std::size_t q = 0; q < t.size(); ++q)
      {
        const double ref = dft_oracle(v, length, t[q][0]);
        CHECK(std::abs(out[Eigen::Index(q)] - ref) < 1e-12);
        CHECK(std::abs(via_mesh[Eigen::Index(q)] - ref) < 1e-12);
      }
    }
  }
}

TEST_CASE("barycentric interpolation")
{
  const LGLRule rule = lgl_rule(6);
  SUBCASE("reproduces polynomials of degree p")
  {
    RealVector v(7);
    for (int i = 0; i < 7; ++i)
    {
      const double x = rule.nodes[i];
      v[i] = 1.0 - 2.0 * x + 0.5 * std::pow(x, 4) - 3.0 * std::pow(x, 6);
    }
    const std::vector<double> targets{-0.93, -0.2, 0.0, 0.41, 0.999};
    const RealVector out = barycentric_matrix(rule, targets) * v;
    for (std::size_t t = 0; t < targets.size(); ++t)
    {
      const double x = targets[t];
      CHECK(std::abs(out[Eigen::Index(t)] - (1.0 - 2.0 * x + 0.5 * std::pow(x, 4) - 3.0 * std::pow(x, 6))) < 1e-13);
    }
  }
  SUBCASE("node targets return the nodal value")
  {
    const RealVector v = gaussian_matrix(7, 1, 3).col(0);
    const std::vector<double> targets{rule.nodes[2], rule.nodes[6]};
    const RealVector out = barycentric_matrix(rule, targets) * v;
    CHECK(out[0] == v[2]);
    CHECK(out[1] == v[6]);
  }
  SUBCASE("sine on [0, 1] with p = 20 against naive Lagrange")
  {
    const LGLRule r20 = lgl_rule(20);
    RealVector v(21);
    for (int i = 0; i < 21; ++i)
    {
      v[i] = std::sin(0.5 * (r20.nodes[i] + 1.0));
    }
    const double x = 2.0 * 0.37 - 1.0;
    const std::vector<double> targets{x};
    const double bary = (barycentric_matrix(r20, targets) * v)[0];
    CHECK(std::abs(bary - naive_lagrange(r20.nodes, v, x)) < 1e-12);
    CHECK(std::abs(bary - std::sin(0.37)) < 1e-13);
  }
}

TEST_CASE("lgl differentiation")
{
  const LGLRule rule = lgl_rule(5);
  const RealVector one = RealVector::Ones(6);
  CHECK(lgl_differentiation(rule, one).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((lgl_differentiation(rule, rule.nodes) - one).cwiseAbs().maxCoeff() < 1e-13);
  const RealVector cube = rule.nodes.array().cube();
  const RealVector expect = 3.0 * rule.nodes.array().square();
  CHECK((lgl_differentiation(rule, cube) - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("element quadrature of a resolvable planewave matches the grid norm")
{
  for (int dim : {1, 2})
  {
    const UniformGrid g = UniformGrid::cube(dim, 2.0 * pi, 24);
    const int e[2] = {3, 4};
    const ElementMesh mesh(g, Partition::make(g, std::span<const int>(e, std::size_t(dim))), 14);
    RealVector v(Eigen::Index(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
    {
      const Point3 x = g.point(i);
      v[Eigen::Index(i)] = std::cos(3.0 * x[0]) + (dim == 2 ? std::sin(2.0 * x[1] + 0.4) : 0.0);
    }
    double quad = 0.0;
    for (const RealMatrix &ve : mesh.to_elements(v))
    {
      quad += (mesh.weights().array() * ve.col(0).array().square()).sum();
    }
    const double grid_norm = g.volume() * v.squaredNorm() / double(g.size());
    CHECK(std::abs(quad - grid_norm) < 1e-10);
  }
}

TEST_CASE("tensor barycentric sampling is the identity on tensor polynomials")
{
  const LGLRule rule = lgl_rule(4);
  std::vector<double> targets(rule.nodes.data(), rule.nodes.data() + rule.nodes.size());
  const RealMatrix b = barycentric_matrix(rule, targets);
  const RealMatrix *mats[2] = {&b, &b};
  RealVector v(25);
  for (int j = 0; j < 5; ++j)
  {
    for (int i = 0; i < 5; ++i)
    {
      v[i + 5 * j] = std::pow(rule.nodes[i], 4) * (1.0 - std::pow(rule.nodes[j], 3));
    }
  }
  const RealMatrix out = apply_tensor(std::span<const RealMatrix *const>(mats, 2), Index3{5, 5, 1}, v);
  CHECK((out.col(0) - v).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partition faces pair every element side once")
{
  const double len[3] = {1.0, 2.0, 3.0};
  const int pts[3] = {6, 6, 6};
  const UniformGrid g = UniformGrid::make(len, pts);
  const int el[3] = {3, 2, 1};
  const Partition part = Partition::make(g, el);
  const std::vector<Face> faces = partition_faces(part);
  CHECK(faces.size() == part.size() * 3);
  for (int d = 0; d < 3; ++d)
  {
    for (std::size_t e = 0; e < part.size(); ++e)
    {
      int as_left = 0;
      int as_right = 0;
      for (const Face &f : faces)
      {
        if (f.dim != d)
        {
          continue;
        }
        as_left += f.left == e;
        as_right += f.right == e;
        if (f.left == e)
        {
          // the right neighbor sees this face from its lower side
          CHECK(part.neighbor(f.right, d, -1) == e);
        }
      }
      CHECK(as_left == 1);
      CHECK(as_right == 1);
    }
  }
}
