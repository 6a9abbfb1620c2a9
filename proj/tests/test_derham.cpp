// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vemhd/derham.hpp"

namespace vemhd
{
namespace
{

double MaxEntry(const SparseMatrix &a)
{
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
    {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

TEST(Interp, VertexValues)
{
  const PolyMesh m = oracle::UnitSquare();
  const FieldV d = interp_V(m, [](const Vec2 &x) { return x.x(); });
  EXPECT_EQ(d, (Eigen::Vector4d(0, 1, 1, 0)));
  const FieldV c = interp_V(gen_triangular(3), [](const Vec2 &) { return 2.5; });
  EXPECT_TRUE((c.array() == 2.5).all());
}

TEST(Interp, EdgeFluxes)
{
  const PolyMesh m = oracle::UnitSquare();
  // Edges in order of appearance: bottom, right, top, left; left runs 0 -> 3 so its global
  // normal points into the cell.
  const FieldE f = interp_E(m, [](const Vec2 &x) { return x; });
  EXPECT_NEAR(f[0], 0.0, 1e-15);
  EXPECT_NEAR(f[1], 1.0, 1e-15);
  EXPECT_NEAR(f[2], 1.0, 1e-15);
  EXPECT_NEAR(f[3], 0.0, 1e-15);
  const FieldE g = interp_E(m, [](const Vec2 &) { return Vec2(1, 0); });
  EXPECT_NEAR(g[0], 0.0, 1e-15);
}

TEST(Interp, TanhFluxThroughVerticalEdge)
{
  // Vertex 0 = (0,1), vertex 1 = (0,0): edge 0 -> 1 has n = (-1, 0).
  const PolyMesh m =
    PolyMesh::FromCells({Vec2(0, 1), Vec2(0, 0), Vec2(1, 0), Vec2(1, 1)}, {{0, 1, 2, 3}});
  ASSERT_NEAR((m.edge_geometry(0).normal - Vec2(-1, 0)).norm(), 0.0, 1e-15);
  const FieldE f = interp_E(m, [](const Vec2 &x) { return Vec2(std::tanh(x.y()), 0.0); }, 16);
  EXPECT_NEAR(f[0], -std::log(std::cosh(1.0)), 1e-14);
}

TEST(Interp, CellAverages)
{
  const PolyMesh m = oracle::UnitSquare();
  EXPECT_NEAR(interp_P(m, [](const Vec2 &) { return 3.0; })[0], 3.0, 1e-14);
  EXPECT_NEAR(interp_P(m, [](const Vec2 &x) { return x.x(); })[0], 0.5, 1e-15);
  const PolyMesh v = gen_voronoi(20, 10, 2);
  const FieldP two = interp_P(v, [](const Vec2 &) { return 2.0; });
  EXPECT_LT((two.array() - 2.0).abs().maxCoeff(), 1e-14);
}

TEST(Interp, Linear)
{
  const PolyMesh m = gen_voronoi(25, 10, 5);
  const auto f = [](const Vec2 &x) { return std::sin(x.x()) * x.y(); };
  const auto g = [](const Vec2 &x) { return std::exp(x.y()); };
  const FieldV lhs = interp_V(m, [&](const Vec2 &x) { return 2.0 * f(x) - 3.0 * g(x); });
  EXPECT_LT((lhs - (2.0 * interp_V(m, f) - 3.0 * interp_V(m, g))).cwiseAbs().maxCoeff(), 1e-14);
  const auto c = [](const Vec2 &x) { return Vec2(x.y() * x.y(), std::cos(x.x())); };
  const auto k = [](const Vec2 &x) { return Vec2(1.0, x.x() * x.y()); };
  const FieldE le = interp_E(m, [&](const Vec2 &x) { return Vec2(0.5 * c(x) + 4.0 * k(x)); });
  EXPECT_LT((le - (0.5 * interp_E(m, c) + 4.0 * interp_E(m, k))).cwiseAbs().maxCoeff(), 1e-13);
  const FieldP lp = interp_P(m, [&](const Vec2 &x) { return f(x) + g(x); });
  EXPECT_LT((lp - (interp_P(m, f) + interp_P(m, g))).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(RotMap, Examples)
{
  const PolyMesh m = oracle::UnitSquare();
  const FieldE r = rot_map(m) * interp_V(m, [](const Vec2 &x) { return x.x(); });
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[3], 0.0);
  const FieldE z = rot_map(m) * Eigen::VectorXd::Constant(4, 7.0);
  EXPECT_EQ(z.cwiseAbs().maxCoeff(), 0.0);
}

TEST(DivMap, Examples)
{
  const PolyMesh m = oracle::UnitSquare();
  EXPECT_NEAR((div_map(m) * interp_E(m, [](const Vec2 &x) { return x; }))[0], 2.0, 1e-15);
  const PolyMesh v = gen_voronoi(20, 10, 2);
  const FieldP c = div_map(v) * interp_E(v, [](const Vec2 &) { return Vec2(0.3, -1.1); });
  EXPECT_LT(c.cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Chain, DivRotVanishes)
{
  for (const auto &m : oracle::SampleMeshes())
  {
    const ChainMaps chain = build_chain(m);
    // Div weights are snapped so the cancellation is exact in floating point.
    EXPECT_EQ(MaxEntry(chain.div * chain.rot), 0.0);
    const FieldV d = Eigen::VectorXd::LinSpaced(m.num_vertices(), -1.0, 2.0).array().sin();
    const FieldP q = chain.div * (chain.rot * d);
    EXPECT_LE(q.cwiseAbs().maxCoeff(), 1e-14 * d.cwiseAbs().maxCoeff() / m.geometry(0).area);
  }
}

TEST(Chain, ImageOfRotIsKernelOfDiv)
{
  for (const auto &m : oracle::SampleMeshes())
  {
    if (m.num_vertices() + m.num_edges() + m.num_cells() > 200)
    {
      continue;
    }
    const ChainMaps chain = build_chain(m);
    const Eigen::MatrixXd r = Eigen::MatrixXd(chain.rot);
    const Eigen::MatrixXd d = Eigen::MatrixXd(chain.div);
    Eigen::FullPivLU<Eigen::MatrixXd> lr(r), ld(d);
    lr.setThreshold(1e-10);
    ld.setThreshold(1e-10);
    EXPECT_EQ(lr.rank(), m.num_vertices() - 1);
    const int kernel_div = m.num_edges() - static_cast<int>(ld.rank());
    EXPECT_EQ(kernel_div, lr.rank());
    // Stacking rot columns with a kernel basis of div adds no rank.
    Eigen::MatrixXd both(m.num_edges(), r.cols() + kernel_div);
    both << r, ld.kernel();
    Eigen::FullPivLU<Eigen::MatrixXd> lb(both);
    lb.setThreshold(1e-10);
    EXPECT_EQ(lb.rank(), lr.rank());
  }
}

TEST(Chain, ZeroMeanPredicate)
{
  const PolyMesh m = gen_triangular(2);
  FieldP q = FieldP::Ones(m.num_cells());
  q[0] = 1.0 - 8.0;  // equal areas
  EXPECT_TRUE(is_zero_mean(m, q));
  q[1] += 0.1;
  EXPECT_FALSE(is_zero_mean(m, q));
}

TEST(Commuting, RotPolynomialAndSmooth)
{
  const PolyMesh m = gen_triangular(4);
  EXPECT_LE(commuting_check_rot(m, [](const Vec2 &x) { return x.x() * x.x(); },
                                [](const Vec2 &x) { return Vec2(2 * x.x(), 0); }, 4),
            1e-13);
  EXPECT_EQ(commuting_check_rot(m, [](const Vec2 &) { return 1.0; },
                                [](const Vec2 &) { return Vec2(0, 0); }, 4),
            0.0);
  // Rule error decays like h^10 under refinement until it reaches roundoff.
  std::vector<double> smooth;
  for (int n : {4, 8, 16})
  {
    smooth.push_back(commuting_check_rot(
      gen_triangular(n), [](const Vec2 &x) { return std::sin(x.x() * x.y()); },
      [](const Vec2 &x) { return Vec2(x.y() * std::cos(x.x() * x.y()), x.x() * std::cos(x.x() * x.y())); },
      8));
  }
  EXPECT_LT(smooth[1], smooth[0] / 100.0);
  EXPECT_LE(smooth[2], 1e-12);
}

TEST(Commuting, DivPolynomialAndSmooth)
{
  for (const auto &m : oracle::SampleMeshes())
  {
    EXPECT_LE(commuting_check_div(m, [](const Vec2 &x) { return x; },
                                  [](const Vec2 &) { return 2.0; }, 4, 4),
              1e-12);
    EXPECT_LE(commuting_check_div(m, [](const Vec2 &) { return Vec2(2, 3); },
                                  [](const Vec2 &) { return 0.0; }, 4, 4),
              1e-12);
  }
  const PolyMesh m = gen_triangular(4);
  const double smooth = commuting_check_div(
    m, [](const Vec2 &x) { return Vec2(std::tanh(x.y()), 0.0); }, [](const Vec2 &) { return 0.0; }, 12, 8);
  EXPECT_LE(smooth, 1e-12);
}

}  // namespace
}  // namespace vemhd
