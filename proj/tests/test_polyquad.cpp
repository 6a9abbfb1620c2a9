// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vemhd/polyquad.hpp"

namespace vemhd
{
namespace
{

double Integrate(const QuadratureRule &r, const std::function<double(const Vec2 &)> &f)
{
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); k++)
  {
    s += r.weights[k] * f(r.points[k]);
  }
  return s;
}

std::vector<Vec2> RandomConvexPolygon(std::mt19937_64 &rng, int n)
{
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> r(0.6, 1.4);
  std::vector<double> angles(n);
  for (auto &a : angles)
  {
    a = u(rng);
  }
  std::sort(angles.begin(), angles.end());
  const double radius = r(rng);
  const Vec2 shift(r(rng) - 1.0, r(rng) - 1.0);
  std::vector<Vec2> p;
  for (double a : angles)
  {
    p.push_back(shift + radius * Vec2(std::cos(a), 1.3 * std::sin(a)));
  }
  return p;
}

TEST(Monomials, Ordering)
{
  EXPECT_EQ(monomial_exponents(0), std::make_pair(0, 0));
  EXPECT_EQ(monomial_exponents(1), std::make_pair(1, 0));
  EXPECT_EQ(monomial_exponents(2), std::make_pair(0, 1));
  EXPECT_EQ(monomial_exponents(3), std::make_pair(2, 0));
  EXPECT_EQ(monomial_exponents(4), std::make_pair(1, 1));
  EXPECT_EQ(monomial_exponents(5), std::make_pair(0, 2));
  EXPECT_EQ(monomial_dim(1), 3);
  EXPECT_EQ(monomial_dim(3), 10);
}

TEST(Monomials, BoundedOnDiameterDisk)
{
  const PolyMesh m = gen_voronoi(20, 10, 1);
  for (int c = 0; c < m.num_cells(); c++)
  {
    const ScaledMonomials basis(m, c, 3);
    EXPECT_EQ(basis.Value(0, Vec2(5, 5)), 1.0);
    for (const Vec2 &v : m.polygon(c))
    {
      EXPECT_LE(basis.Values(v).cwiseAbs().maxCoeff(), 1.0 + 1e-14);
    }
  }
}

TEST(Monomials, GradientsMatchDifferences)
{
  const ScaledMonomials b(Vec2(0.2, -0.1), 0.7, 3);
  const Vec2 x(0.4, 0.3);
  const double d = 1e-6;
  const auto g = b.Gradients(x);
  for (int i = 0; i < b.size(); i++)
  {
    EXPECT_NEAR(g(0, i), (b.Value(i, x + Vec2(d, 0)) - b.Value(i, x - Vec2(d, 0))) / (2 * d), 1e-8);
    EXPECT_NEAR(g(1, i), (b.Value(i, x + Vec2(0, d)) - b.Value(i, x - Vec2(0, d))) / (2 * d), 1e-8);
  }
}

TEST(GaussLegendre, ExactForOddDegree)
{
  for (int n = 1; n <= 12; n++)
  {
    const auto &[x, w] = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; k++)
    {
      double s = 0.0;
      for (int i = 0; i < n; i++)
      {
        s += w[i] * std::pow(x[i], k);
      }
      EXPECT_NEAR(s, k % 2 ? 0.0 : 2.0 / (k + 1), 1e-14) << "n=" << n << " k=" << k;
    }
  }
}

TEST(CellRule, UnitSquare)
{
  const PolyMesh m = oracle::UnitSquare();
  const auto rule = cell_rule(m, 0, 2);
  EXPECT_NEAR(Integrate(rule, [](const Vec2 &x) { return x.x() * x.x(); }), 1.0 / 3.0, 1e-13);
  const ScaledMonomials b(m, 0, 1);
  EXPECT_NEAR(Integrate(rule, [&](const Vec2 &x) { return b.Value(1, x) * b.Value(2, x); }), 0.0, 1e-15);
  EXPECT_NEAR(rule.total_weight(), 1.0, 1e-15);
}

TEST(CellRule, LShapedHexagon)
{
  // Unit square minus the upper-right quadrant: not star-shaped w.r.t. a point near its
  // centroid only if the centroid falls outside the kernel; either way the rule is exact.
  const std::vector<Vec2> l = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 0.5), Vec2(0.5, 0.5), Vec2(0.5, 1), Vec2(0, 1)};
  const auto rule = polygon_rule(l, 3);
  EXPECT_NEAR(rule.total_weight(), 0.75, 1e-14);
  EXPECT_NEAR(Integrate(rule, [](const Vec2 &x) { return x.x() * x.y() * x.y(); }),
              oracle::Moment(l, 1, 2), 1e-14);
}

TEST(CellRule, NoKernelPointThrows)
{
  // Comb-shaped polygon whose kernel is empty.
  const std::vector<Vec2> comb = {Vec2(0, 0), Vec2(3, 0), Vec2(3, 2), Vec2(2.5, 2), Vec2(2.5, 0.2),
                                  Vec2(2, 0.2), Vec2(2, 2), Vec2(1, 2), Vec2(1, 0.2), Vec2(0.5, 0.2),
                                  Vec2(0.5, 2), Vec2(0, 2)};
  EXPECT_THROW(polygon_rule(comb, 2), GeometryError);
}

TEST(CellRule, GreenMomentsOnRandomConvexPolygons)
{
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; trial++)
  {
    const auto poly = RandomConvexPolygon(rng, 3 + trial % 6);
    for (int d = 0; d <= 6; d++)
    {
      const auto rule = polygon_rule(poly, d);
      EXPECT_NEAR(rule.total_weight(), oracle::Moment(poly, 0, 0),
                  1e-13 * std::abs(oracle::Moment(poly, 0, 0)));
      for (int a = 0; a <= d; a++)
      {
        const int b = d - a;
        const double exact = oracle::Moment(poly, a, b);
        const double scale = oracle::Moment(poly, 0, 0) * std::pow(3.0, d);
        const double got =
          Integrate(rule, [&](const Vec2 &x) { return std::pow(x.x(), a) * std::pow(x.y(), b); });
        EXPECT_NEAR(got, exact, 1e-12 * std::max(std::abs(exact), scale * 1e-3))
          << "trial " << trial << " x^" << a << " y^" << b;
      }
    }
  }
}

TEST(EdgeRule, Examples)
{
  const auto r2 = edge_rule(Vec2(0, 0), Vec2(1, 0), 2);
  EXPECT_NEAR(Integrate(r2, [](const Vec2 &x) { return x.x() * x.x(); }), 1.0 / 3.0, 1e-15);
  const auto r0 = edge_rule(Vec2(0, 0), Vec2(2, 0), 0);
  ASSERT_EQ(r0.size(), 1u);
  EXPECT_NEAR(r0.weights[0], 2.0, 1e-15);
  EXPECT_NEAR((r0.points[0] - Vec2(1, 0)).norm(), 0.0, 1e-15);
  const auto r3 = edge_rule(Vec2(0, 0), Vec2(0, 2), 3);
  EXPECT_NEAR(Integrate(r3, [](const Vec2 &x) { return std::pow(x.y(), 3); }), 4.0, 1e-14);
  EXPECT_EQ(edge_rule(Vec2(0, 0), Vec2(1, 1), 6).size(), 4u);
}

TEST(EdgeRule, ExactOnSlantedEdges)
{
  const Vec2 a(-0.3, 0.2), b(0.7, -0.9);
  for (int d = 0; d <= 6; d++)
  {
    const auto r = edge_rule(a, b, d);
    for (int i = 0; i <= d; i++)
    {
      const double got =
        Integrate(r, [&](const Vec2 &x) { return std::pow(x.x(), i) * std::pow(x.y(), d - i); });
      EXPECT_NEAR(got, oracle::EdgeMoment(a, b, i, d - i), 1e-14);
    }
  }
}

TEST(MonomialGram, UnitSquare)
{
  const PolyMesh m = oracle::UnitSquare();
  const Eigen::MatrixXd g = monomial_gram(m, 0, 1);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
  expect.diagonal() << 1.0, 1.0 / 24.0, 1.0 / 24.0;
  EXPECT_LT((g - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MonomialGram, TranslationInvariantAndSPD)
{
  const std::vector<Vec2> p = {Vec2(0, 0), Vec2(1, 0.1), Vec2(1.2, 0.8), Vec2(0.3, 1.1)};
  std::vector<Vec2> q;
  for (const auto &v : p)
  {
    q.push_back(v + Vec2(3.5, -2.25));
  }
  const auto gp = compute_polygon_geometry(p);
  const auto gq = compute_polygon_geometry(q);
  const Eigen::MatrixXd a = monomial_gram(p, ScaledMonomials(gp.centroid, gp.diameter, 2));
  const Eigen::MatrixXd b = monomial_gram(q, ScaledMonomials(gq.centroid, gq.diameter, 2));
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-13);
  for (const auto &mesh : oracle::SampleMeshes())
  {
    for (int c = 0; c < mesh.num_cells(); c++)
    {
      const Eigen::MatrixXd g = monomial_gram(mesh, c, 3);
      EXPECT_NEAR(g(0, 0), mesh.geometry(c).area, 1e-14 * mesh.geometry(c).area);
      EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(g).info(), Eigen::Success);
    }
  }
}

}  // namespace
}  // namespace vemhd
