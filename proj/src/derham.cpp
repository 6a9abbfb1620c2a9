// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "vemhd/derham.hpp"

#include <cmath>
#include <vector>

#include "vemhd/polyquad.hpp"

namespace vemhd
{

FieldV interp_V(const PolyMesh &mesh, const ScalarFunction &f)
{
  FieldV v(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); i++)
  {
    v[i] = f(mesh.vertex(i));
  }
  return v;
}

FieldE interp_E(const PolyMesh &mesh, const VectorFunction &c, int degree)
{
  FieldE f(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    const auto &g = mesh.edge_geometry(e);
    const auto rule = edge_rule(mesh, e, degree);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); q++)
    {
      s += rule.weights[q] * c(rule.points[q]).dot(g.normal);
    }
    f[e] = s / g.length;
  }
  return f;
}

FieldP interp_P(const PolyMesh &mesh, const ScalarFunction &q, int degree)
{
  FieldP p(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); c++)
  {
    const auto rule = cell_rule(mesh, c, degree);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.size(); k++)
    {
      s += rule.weights[k] * q(rule.points[k]);
    }
    p[c] = s / mesh.geometry(c).area;
  }
  return p;
}

namespace
{

// Weight within a few ulps of target / r whose product with r rounds to target; 0 if none.
double WeightHitting(double r, double target)
{
  const double w0 = target / r;
  double lo = w0, hi = w0;
  if (w0 * r == target)
  {
    return w0;
  }
  for (int k = 0; k < 4; k++)
  {
    lo = std::nextafter(lo, 0.0);
    hi = std::nextafter(hi, INFINITY);
    if (lo * r == target)
    {
      return lo;
    }
    if (hi * r == target)
    {
      return hi;
    }
  }
  return 0.0;
}

// Per-edge weights h_e / |P| of one cell, each moved by a few ulps so that every product
// with its rot entry 1/h_e rounds to one common value within 64 ulps of 1/|P|. The two edges of
// the cell meeting at a vertex then contribute exactly opposite terms and div * rot cancels
// in floating point.
std::vector<double> SnappedFluxWeights(const std::vector<double> &lengths, double inv_area)
{
  std::vector<double> w(lengths.size());
  double up = inv_area, down = inv_area;
  for (int j = 0; j < 64; j++)
  {
    for (double target : {up, down})
    {
      bool ok = true;
      for (std::size_t i = 0; i < lengths.size() && ok; i++)
      {
        w[i] = WeightHitting(1.0 / lengths[i], target);
        ok = w[i] != 0.0;
      }
      if (ok)
      {
        return w;
      }
    }
    up = std::nextafter(up, INFINITY);
    down = std::nextafter(down, 0.0);
  }
  for (std::size_t i = 0; i < lengths.size(); i++)
  {
    w[i] = lengths[i] * inv_area;
  }
  return w;
}

}  // namespace

SparseMatrix rot_map(const PolyMesh &mesh)
{
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    const auto &ed = mesh.edge(e);
    const double inv = 1.0 / mesh.edge_geometry(e).length;
    t.emplace_back(e, ed.v1, inv);
    t.emplace_back(e, ed.v0, -inv);
  }
  SparseMatrix r(mesh.num_edges(), mesh.num_vertices());
  r.setFromTriplets(t.begin(), t.end());
  return r;
}

SparseMatrix div_map(const PolyMesh &mesh)
{
  std::vector<Eigen::Triplet<double>> t;
  for (int c = 0; c < mesh.num_cells(); c++)
  {
    const auto &cell = mesh.cell(c);
    std::vector<double> lengths(cell.size());
    for (int i = 0; i < cell.size(); i++)
    {
      lengths[i] = mesh.edge_geometry(cell.edges[i]).length;
    }
    const std::vector<double> w = SnappedFluxWeights(lengths, 1.0 / mesh.geometry(c).area);
    for (int i = 0; i < cell.size(); i++)
    {
      t.emplace_back(c, cell.edges[i], cell.edge_signs[i] * w[i]);
    }
  }
  SparseMatrix d(mesh.num_cells(), mesh.num_edges());
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

ChainMaps build_chain(const PolyMesh &mesh) { return {rot_map(mesh), div_map(mesh)}; }

bool is_zero_mean(const PolyMesh &mesh, const FieldP &q, double tol)
{
  double s = 0.0, scale = 0.0;
  for (int c = 0; c < mesh.num_cells(); c++)
  {
    const double a = mesh.geometry(c).area;
    s += a * q[c];
    scale += a * std::abs(q[c]);
  }
  return std::abs(s) <= tol * scale;
}

double commuting_check_rot(const PolyMesh &mesh, const ScalarFunction &d,
                           const VectorFunction &grad_d, int edge_degree)
{
  const auto rot = [&](const Vec2 &x)
  {
    const Vec2 g = grad_d(x);
    return Vec2(g.y(), -g.x());
  };
  const FieldE lhs = interp_E(mesh, rot, edge_degree);
  const FieldE rhs = rot_map(mesh) * interp_V(mesh, d);
  return (lhs - rhs).lpNorm<Eigen::Infinity>();
}

double commuting_check_div(const PolyMesh &mesh, const VectorFunction &c,
                           const ScalarFunction &div_c, int edge_degree, int cell_degree)
{
  const FieldP lhs = interp_P(mesh, div_c, cell_degree);
  const FieldP rhs = div_map(mesh) * interp_E(mesh, c, edge_degree);
  return (lhs - rhs).lpNorm<Eigen::Infinity>();
}

}  // namespace vemhd
