// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vemhd/fluid.hpp"

namespace vemhd
{
namespace
{

// Vector quadratic in global monomials 1, x, y, x^2, xy, y^2 per component.
struct GlobalQuadratic
{
  Eigen::Matrix<double, 12, 1> c = Eigen::Matrix<double, 12, 1>::Zero();

  static Eigen::Matrix<double, 6, 1> Mono(const Vec2 &p)
  {
    const double x = p.x(), y = p.y();
    return (Eigen::Matrix<double, 6, 1>() << 1, x, y, x * x, x * y, y * y).finished();
  }
  Vec2 operator()(const Vec2 &p) const
  {
    const auto m = Mono(p);
    return Vec2(c.head<6>().dot(m), c.tail<6>().dot(m));
  }
  Eigen::Matrix2d Grad(const Vec2 &p) const
  {
    const double x = p.x(), y = p.y();
    Eigen::Matrix2d g;
    for (int k = 0; k < 2; k++)
    {
      const auto a = c.segment<6>(6 * k);
      g(k, 0) = a[1] + 2 * a[3] * x + a[4] * y;
      g(k, 1) = a[2] + a[4] * x + 2 * a[5] * y;
    }
    return g;
  }
};

// Null space of the linear part of div: d/dx terms 2 a_xx + a_xy(y-comp) and
// a_xy + 2 a_yy(y-comp). Returns 12 x 10.
Eigen::MatrixXd IndependentPSv()
{
  Eigen::Matrix<double, 2, 12> con = Eigen::Matrix<double, 2, 12>::Zero();
  // coefficient of x in div: 2 c[3] + c[6 + 4]; of y: c[4] + 2 c[6 + 5].
  con(0, 3) = 2.0;
  con(0, 10) = 1.0;
  con(1, 4) = 1.0;
  con(1, 11) = 2.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(con);
  return lu.kernel();
}

GlobalQuadratic Member(const Eigen::MatrixXd &z, const Eigen::VectorXd &w)
{
  GlobalQuadratic q;
  q.c = z * w;
  return q;
}

Eigen::VectorXd PiNablaField(const VelocityCellOps &ops, const Eigen::VectorXd &d, const Vec2 &x,
                             const Eigen::MatrixXd &op)
{
  const VectorQuadratic coeffs = ops.psv * (op * d);
  return eval_vector_quadratic(ops.p2, coeffs, x);
}

TEST(PSv, DimensionAndMembers)
{
  EXPECT_EQ(IndependentPSv().cols(), 10);
  const PolyMesh m = gen_voronoi(12, 10, 1);
  for (int c = 0; c < m.num_cells(); c++)
  {
    const Eigen::MatrixXd b = basis_PSv(m, c);
    EXPECT_EQ(b.cols(), 10);
    EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(b).rank(), 10);
    const ScaledMonomials p2(m, c, 2);
    // Every basis member has constant divergence.
    for (int k = 0; k < b.cols(); k++)
    {
      const VectorQuadratic q = b.col(k);
      const double d0 = grad_vector_quadratic(p2, q, m.geometry(c).centroid).trace();
      for (const Vec2 &v : m.polygon(c))
      {
        EXPECT_NEAR(grad_vector_quadratic(p2, q, v).trace(), d0, 1e-10);
      }
    }
  }
}

TEST(PSv, InclusionExamples)
{
  const PolyMesh m = oracle::UnitSquare();
  const Eigen::MatrixXd b = basis_PSv(m, 0);
  const ScaledMonomials p2(m, 0, 2);
  // Express a field in the scaled monomials via least squares on sample points; membership
  // means zero residual against the PSv span.
  auto in_span = [&](const VectorFunction &f)
  {
    Eigen::MatrixXd a(2 * 25, b.cols());
    Eigen::VectorXd rhs(2 * 25);
    int row = 0;
    for (int i = 0; i < 5; i++)
    {
      for (int j = 0; j < 5; j++)
      {
        const Vec2 x(0.1 + 0.2 * i, 0.1 + 0.2 * j);
        for (int k = 0; k < b.cols(); k++)
        {
          const Vec2 v = eval_vector_quadratic(p2, b.col(k), x);
          a(row, k) = v.x();
          a(row + 1, k) = v.y();
        }
        rhs[row] = f(x).x();
        rhs[row + 1] = f(x).y();
        row += 2;
      }
    }
    const Eigen::VectorXd w = a.colPivHouseholderQr().solve(rhs);
    return (a * w - rhs).norm() < 1e-12;
  };
  EXPECT_TRUE(in_span([](const Vec2 &) { return Vec2(1, 0); }));
  EXPECT_TRUE(in_span([](const Vec2 &) { return Vec2(0, 1); }));
  EXPECT_TRUE(in_span([](const Vec2 &x) { return x; }));
  EXPECT_FALSE(in_span([](const Vec2 &x) { return Vec2(x.x() * x.x(), 0); }));
}

TEST(VelocityOps, ReproduceMembersEverywhere)
{
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  const Eigen::MatrixXd z = IndependentPSv();
  for (const auto &m : oracle::SampleMeshes())
  {
    Eigen::VectorXd w(10);
    for (auto &x : w)
    {
      x = n(rng);
    }
    const GlobalQuadratic q = Member(z, w);
    const FieldTV dofs = interp_TV(m, q);
    for (int c = 0; c < m.num_cells(); c++)
    {
      const VelocityCellOps ops = build_velocity_ops(m, c);
      const Eigen::VectorXd d = gather_tv(m, c, dofs);
      for (const Vec2 &x : tv_local_nodes(m, c))
      {
        EXPECT_LT((PiNablaField(ops, d, x, ops.pi_nabla) - q(x)).norm(), 1e-12 * (1 + w.norm()) * 10);
        EXPECT_LT((PiNablaField(ops, d, x, ops.pi0) - q(x)).norm(), 1e-12 * (1 + w.norm()) * 10);
      }
      // Constants.
      const Eigen::VectorXd k = gather_tv(m, c, interp_TV(m, [](const Vec2 &) { return Vec2(2, -1); }));
      EXPECT_LT((PiNablaField(ops, k, m.geometry(c).centroid, ops.pi_nabla) - Vec2(2, -1)).norm(), 1e-13);
      EXPECT_LT((PiNablaField(ops, k, m.geometry(c).centroid, ops.pi0) - Vec2(2, -1)).norm(), 1e-13);
    }
  }
}

TEST(VelocityOps, PiNablaMatchesDenseEllipticProjectionOfCubic)
{
  // v = (x^2 y, -x y^2) is divergence-free with quadratic traces on the unit square, so its
  // projection is computable from the DOFs.
  const PolyMesh m = oracle::UnitSquare();
  const auto v = [](const Vec2 &x) { return Vec2(x.x() * x.x() * x.y(), -x.x() * x.y() * x.y()); };
  const auto grad_v = [](const Vec2 &x)
  {
    Eigen::Matrix2d g;
    g << 2 * x.x() * x.y(), x.x() * x.x(), -x.y() * x.y(), -2 * x.x() * x.y();
    return g;
  };
  const Eigen::MatrixXd z = IndependentPSv();
  const oracle::PolyIntegrator integrate(m.polygon(0), 4);
  // Stiffness and right-hand side on the PSv basis, then the vertex-sum conditions.
  Eigen::MatrixXd k(10, 10);
  Eigen::VectorXd rhs(10);
  for (int i = 0; i < 10; i++)
  {
    const GlobalQuadratic qi = Member(z, Eigen::VectorXd::Unit(10, i));
    for (int j = 0; j < 10; j++)
    {
      const GlobalQuadratic qj = Member(z, Eigen::VectorXd::Unit(10, j));
      k(i, j) = integrate([&](const Vec2 &x) { return (qi.Grad(x).array() * qj.Grad(x).array()).sum(); });
    }
    rhs[i] = integrate([&](const Vec2 &x) { return (qi.Grad(x).array() * grad_v(x).array()).sum(); });
  }
  Eigen::MatrixXd a(12, 10);
  Eigen::VectorXd b(12);
  a.topRows(10) = k;
  b.head(10) = rhs;
  for (int comp = 0; comp < 2; comp++)
  {
    Vec2 target = Vec2::Zero();
    for (int j = 0; j < 10; j++)
    {
      const GlobalQuadratic qj = Member(z, Eigen::VectorXd::Unit(10, j));
      double s = 0.0;
      for (const Vec2 &p : m.polygon(0))
      {
        s += qj(p)[comp];
      }
      a(10 + comp, j) = s;
    }
    for (const Vec2 &p : m.polygon(0))
    {
      target += v(p);
    }
    b[10 + comp] = target[comp];
  }
  const Eigen::VectorXd w = a.colPivHouseholderQr().solve(b);
  ASSERT_LT((a * w - b).norm(), 1e-12);
  const GlobalQuadratic oracle_q = Member(z, w);

  const VelocityCellOps ops = build_velocity_ops(m, 0);
  const Eigen::VectorXd d = gather_tv(m, 0, interp_TV(m, v));
  for (double x : {0.0, 0.3, 0.8})
  {
    for (double y : {0.1, 0.5, 1.0})
    {
      const Vec2 p(x, y);
      EXPECT_LT((PiNablaField(ops, d, p, ops.pi_nabla) - oracle_q(p)).norm(), 1e-12);
    }
  }
}

TEST(VelocityOps, Pi0MatchesDenseL2OnMembers)
{
  const Eigen::MatrixXd z = IndependentPSv();
  const PolyMesh m = gen_perturbed_quads(3, 0.25, 2);
  Eigen::VectorXd w(10);
  w << 0.3, -1.0, 0.2, 0.7, -0.4, 1.1, 0.5, -0.9, 0.25, 0.6;
  const GlobalQuadratic q = Member(z, w);
  const FieldTV dofs = interp_TV(m, q);
  for (int c = 0; c < m.num_cells(); c++)
  {
    std::vector<std::function<Vec2(const Vec2 &)>> basis;
    for (int i = 0; i < 10; i++)
    {
      basis.push_back(Member(z, Eigen::VectorXd::Unit(10, i)));
    }
    const Eigen::VectorXd dense = oracle::DenseProjection(m.polygon(c), basis, q, 4);
    const GlobalQuadratic dq = Member(z, dense);
    const VelocityCellOps ops = build_velocity_ops(m, c);
    const Eigen::VectorXd d = gather_tv(m, c, dofs);
    for (const Vec2 &x : tv_local_nodes(m, c))
    {
      EXPECT_LT((PiNablaField(ops, d, x, ops.pi0) - dq(x)).norm(), 1e-11);
    }
  }
}

TEST(DivTV, Examples)
{
  const PolyMesh m = oracle::UnitSquare();
  const VelocityCellOps ops = build_velocity_ops(m, 0);
  auto div_of = [&](const VectorFunction &f) { return ops.div_row.dot(gather_tv(m, 0, interp_TV(m, f))); };
  EXPECT_NEAR(div_of([](const Vec2 &x) { return x; }), 2.0, 1e-14);
  EXPECT_NEAR(div_of([](const Vec2 &) { return Vec2(3, 4); }), 0.0, 1e-14);
  EXPECT_NEAR(div_of([](const Vec2 &x) { return Vec2(x.y(), -x.x()); }), 0.0, 1e-14);
}

TEST(DivTV, CommutesOnQuadratics)
{
  GlobalQuadratic q;
  q.c << 0.1, 0.4, -0.3, 1.2, 0.7, -0.5, 0.9, -0.2, 0.6, 0.3, -1.1, 0.8;
  const auto div_q = [&](const Vec2 &x) { return q.Grad(x).trace(); };
  for (const auto &m : oracle::SampleMeshes())
  {
    std::vector<VelocityCellOps> ops;
    for (int c = 0; c < m.num_cells(); c++)
    {
      ops.push_back(build_velocity_ops(m, c));
    }
    const Eigen::VectorXd got = div_TV_map(m, ops) * interp_TV(m, q);
    const FieldP expect = interp_P(m, div_q, 4);
    EXPECT_LT((got - expect).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GramTV, PolynomialConsistencyAndKernel)
{
  const Eigen::MatrixXd z = IndependentPSv();
  for (const PolyMesh &m : {gen_triangular(2), gen_voronoi(12, 10, 1), gen_center_refined(1, 0.5, 4)})
  {
    for (int c = 0; c < m.num_cells(); c++)
    {
      const VelocityCellOps ops = build_velocity_ops(m, c);
      const Eigen::MatrixXd mass = gram_TV(m, c, ops).matrix();
      const Eigen::MatrixXd stiff = stiff_TV(m, c, ops).matrix();
      const oracle::PolyIntegrator integrate(m.polygon(c), 4);
      std::vector<Eigen::VectorXd> dofs;
      std::vector<GlobalQuadratic> fields;
      for (int i = 0; i < 10; i++)
      {
        fields.push_back(Member(z, Eigen::VectorXd::Unit(10, i)));
        dofs.push_back(gather_tv(m, c, interp_TV(m, fields.back())));
      }
      for (int i = 0; i < 10; i++)
      {
        for (int j = 0; j < 10; j++)
        {
          const double l2 = integrate([&](const Vec2 &x) { return fields[i](x).dot(fields[j](x)); });
          const double h1 = integrate(
            [&](const Vec2 &x) { return (fields[i].Grad(x).array() * fields[j].Grad(x).array()).sum(); });
          EXPECT_NEAR(dofs[i].dot(mass * dofs[j]), l2, 1e-12 * std::max(1.0, std::abs(l2)));
          EXPECT_NEAR(dofs[i].dot(stiff * dofs[j]), h1, 1e-12 * std::max(1.0, std::abs(h1)));
        }
      }
      EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(mass).info(), Eigen::Success);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(stiff);
      const double top = es.eigenvalues().maxCoeff();
      EXPECT_EQ((es.eigenvalues().array() < 1e-12 * top).count(), 2);
      EXPECT_GT(es.eigenvalues()[2], 1e-8 * top);
      // The two null vectors are the constant fields.
      const Eigen::VectorXd ex = gather_tv(m, c, interp_TV(m, [](const Vec2 &) { return Vec2(1, 0); }));
      EXPECT_LT((stiff * ex).norm(), 1e-12 * top);
    }
  }
}

TEST(TVLayout, Counts)
{
  const PolyMesh m = gen_triangular(2);
  EXPECT_EQ(tv_dof_count(m), 2 * (m.num_vertices() + m.num_edges()));
  const auto mask = tv_interior_mask(m);
  // One interior vertex and eight interior edges on the 2x2 split-square mesh.
  EXPECT_EQ(std::count(mask.begin(), mask.end(), true), 2 * (1 + 8));
}

TEST(InfSup, RegressionAndRefinement)
{
  const InfSupResult r2 = infsup_probe(gen_triangular(2));
  EXPECT_GT(r2.beta, 0.05);
  EXPECT_NEAR(r2.beta, 0.524151, 1e-5);  // frozen regression value
  EXPECT_TRUE(r2.stable);
  std::vector<double> betas = {r2.beta};
  for (int n : {4, 8})
  {
    betas.push_back(infsup_probe(gen_triangular(n)).beta);
  }
  const auto [lo, hi] = std::minmax_element(betas.begin(), betas.end());
  EXPECT_GT(*lo, 1e-10);
  EXPECT_LT(*hi / *lo, 1.5);
}

TEST(InfSup, DegenerateSingleCell)
{
  EXPECT_THROW(infsup_probe(oracle::UnitSquare()), InfSupError);
}

TEST(FieldP0, ZeroMeanProjection)
{
  const PolyMesh m = gen_voronoi(20, 10, 3);
  FieldP q = interp_P(m, [](const Vec2 &x) { return std::exp(x.x()) + x.y(); });
  const Eigen::VectorXd a = gram_P(m);
  q.array() -= a.dot(q) / a.sum();
  EXPECT_TRUE(is_zero_mean(m, q));
  EXPECT_LE(std::abs(a.dot(q)), 1e-12 * q.norm());
}

}  // namespace
}  // namespace vemhd
