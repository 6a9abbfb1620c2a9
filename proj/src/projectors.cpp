// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "vemhd/projectors.hpp"

#include <cmath>
#include <stdexcept>

namespace vemhd
{

ReconstructionKind parse_reconstruction(std::string_view name)
{
  if (name == "elliptic")
  {
    return ReconstructionKind::Elliptic;
  }
  if (name == "ls")
  {
    return ReconstructionKind::LeastSquares;
  }
  if (name == "galerkin")
  {
    return ReconstructionKind::GalerkinInterp;
  }
  throw std::invalid_argument("unknown projector kind '" + std::string(name) +
                              "' (expected elliptic, ls or galerkin)");
}

std::string to_string(ReconstructionKind kind)
{
  switch (kind)
  {
    case ReconstructionKind::Elliptic:
      return "elliptic";
    case ReconstructionKind::LeastSquares:
      return "ls";
    case ReconstructionKind::GalerkinInterp:
      return "galerkin";
  }
  return "unknown";
}

namespace
{

// N x 3 matrix of scaled P1 monomials at the cell vertices.
Eigen::MatrixXd VertexVandermonde(const PolyMesh &mesh, int cell, const ScaledMonomials &basis)
{
  const auto &c = mesh.cell(cell);
  Eigen::MatrixXd a(c.size(), 3);
  for (int i = 0; i < c.size(); i++)
  {
    a.row(i) = basis.Values(mesh.vertex(c.vertices[i])).transpose();
  }
  return a;
}

PolyReconstruction Start(const PolyMesh &mesh, int cell, ReconstructionKind kind)
{
  PolyReconstruction r;
  r.kind = kind;
  r.basis = ScaledMonomials(mesh, cell, 1);
  return r;
}

}  // namespace

PolyReconstruction build_elliptic(const PolyMesh &mesh, int cell)
{
  auto r = Start(mesh, cell, ReconstructionKind::Elliptic);
  const auto &c = mesh.cell(cell);
  const auto &g = mesh.geometry(cell);
  const int n = c.size();
  const double h = g.diameter;
  // Gradient moments from the boundary: int grad D . grad m = sum_e n_e . grad m int_e D,
  // with the linear edge trace integrated exactly. The P1 rot-gram is (|P|/h^2) I.
  Eigen::MatrixXd slope = Eigen::MatrixXd::Zero(2, n);
  for (int i = 0; i < n; i++)
  {
    const int j = (i + 1) % n;
    const Vec2 w = (h / g.area) * 0.5 * g.edge_length[i] * g.edge_normal[i];
    slope.col(i) += w;
    slope.col(j) += w;
  }
  const Eigen::MatrixXd a = VertexVandermonde(mesh, cell, r.basis);
  r.coeffs.resize(3, n);
  r.coeffs.row(1) = slope.row(0);
  r.coeffs.row(2) = slope.row(1);
  // Vertex-mean condition fixes the constant.
  const Eigen::RowVectorXd mean = Eigen::RowVectorXd::Constant(n, 1.0 / n);
  r.coeffs.row(0) = mean - (a.col(1).mean() * slope.row(0) + a.col(2).mean() * slope.row(1));
  r.vertex_values = a * r.coeffs;
  return r;
}

PolyReconstruction build_least_squares(const PolyMesh &mesh, int cell)
{
  auto r = Start(mesh, cell, ReconstructionKind::LeastSquares);
  const Eigen::MatrixXd a = VertexVandermonde(mesh, cell, r.basis);
  const Eigen::Matrix3d ata = a.transpose() * a;
  Eigen::LLT<Eigen::Matrix3d> llt(ata);
  if (llt.info() != Eigen::Success)
  {
    throw GeometryError("least-squares reconstruction is rank deficient on cell " +
                        std::to_string(cell));
  }
  r.coeffs = llt.solve(a.transpose());
  r.vertex_values = a * r.coeffs;
  return r;
}

PolyReconstruction build_galerkin_interp(const PolyMesh &mesh, int cell)
{
  auto r = Start(mesh, cell, ReconstructionKind::GalerkinInterp);
  const auto &c = mesh.cell(cell);
  const int n = c.size();
  r.alpha = Eigen::VectorXd::Constant(n, 1.0 / n);
  r.anchor = Vec2::Zero();
  for (int i = 0; i < n; i++)
  {
    r.anchor += r.alpha[i] * mesh.vertex(c.vertices[i]);
  }
  // Fan node values: vertices followed by the anchor value sum_V alpha_V D(V).
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n + 1, n);
  q.topRows(n).setIdentity();
  q.row(n) = r.alpha.transpose();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(3, n + 1);  // int phi_node m_alpha
  Eigen::Matrix3d local;
  local << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  for (int i = 0; i < n; i++)
  {
    const int j = (i + 1) % n;
    const int nodes[3] = {n, i, j};
    const Vec2 p0 = r.anchor;
    const Vec2 p1 = mesh.vertex(c.vertices[i]);
    const Vec2 p2 = mesh.vertex(c.vertices[j]);
    const double area = 0.5 * ((p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x());
    if (!(area > 0.0))
    {
      throw GeometryError("Galerkin interpolation anchor is outside the kernel of cell " +
                          std::to_string(cell));
    }
    for (int a = 0; a < 3; a++)
    {
      for (int b = 0; b < 3; b++)
      {
        mass(nodes[a], nodes[b]) += area / 12.0 * local(a, b);
      }
    }
    // Hat-function moments against linear monomials: the midpoint rule on the three edge
    // midpoints is exact for quadratics.
    const Vec2 pts[3] = {p0, p1, p2};
    for (int e = 0; e < 3; e++)
    {
      const Vec2 mid = 0.5 * (pts[e] + pts[(e + 1) % 3]);
      const Eigen::Vector3d m = r.basis.Values(mid);
      for (int a = 0; a < 3; a++)
      {
        const double hat = (a == e || a == (e + 1) % 3) ? 0.5 : 0.0;
        moments.col(nodes[a]) += area / 3.0 * hat * m;
      }
    }
  }
  r.fan_mass = q.transpose() * mass * q;
  const Eigen::MatrixXd m1 = monomial_gram(mesh, cell, 1);
  r.coeffs = m1.llt().solve(moments * q);
  r.vertex_values = Eigen::MatrixXd::Identity(n, n);
  return r;
}

PolyReconstruction build_reconstruction(const PolyMesh &mesh, int cell, ReconstructionKind kind)
{
  switch (kind)
  {
    case ReconstructionKind::Elliptic:
      return build_elliptic(mesh, cell);
    case ReconstructionKind::LeastSquares:
      return build_least_squares(mesh, cell);
    case ReconstructionKind::GalerkinInterp:
      return build_galerkin_interp(mesh, cell);
  }
  throw std::invalid_argument("unknown reconstruction kind");
}

double galerkin_value(const PolyMesh &mesh, int cell, const PolyReconstruction &rec,
                      const Eigen::VectorXd &d, const Vec2 &x)
{
  const auto &c = mesh.cell(cell);
  const int n = c.size();
  const double star = rec.alpha.dot(d);
  for (int i = 0; i < n; i++)
  {
    const int j = (i + 1) % n;
    const Vec2 p0 = rec.anchor;
    const Vec2 p1 = mesh.vertex(c.vertices[i]);
    const Vec2 p2 = mesh.vertex(c.vertices[j]);
    Eigen::Matrix2d t;
    t.col(0) = p1 - p0;
    t.col(1) = p2 - p0;
    const Eigen::Vector2d l = t.partialPivLu().solve(x - p0);
    const double tol = -1e-12;
    if (l[0] >= tol && l[1] >= tol && l[0] + l[1] <= 1.0 - tol)
    {
      return (1.0 - l[0] - l[1]) * star + l[0] * d[i] + l[1] * d[j];
    }
  }
  throw GeometryError("point outside cell " + std::to_string(cell));
}

Vec2 EdgeProjector::Evaluate(EdgeProjectorKind kind, const Eigen::VectorXd &coeffs, const Vec2 &x)
{
  if (kind == EdgeProjectorKind::P0)
  {
    return Vec2(coeffs[0], coeffs[1]);
  }
  return Vec2(coeffs[0] + coeffs[2] * x.x(), coeffs[1] + coeffs[2] * x.y());
}

EdgeProjector project_P0_E(const PolyMesh &mesh, int cell)
{
  const auto &c = mesh.cell(cell);
  const auto &g = mesh.geometry(cell);
  EdgeProjector p;
  p.kind = EdgeProjectorKind::P0;
  p.matrix.resize(2, c.size());
  for (int i = 0; i < c.size(); i++)
  {
    p.matrix.col(i) = c.edge_signs[i] * g.edge_length[i] / g.area * (g.edge_midpoint[i] - g.centroid);
  }
  return p;
}

EdgeProjector project_RT(const PolyMesh &mesh, int cell)
{
  const auto &c = mesh.cell(cell);
  const auto &g = mesh.geometry(cell);
  const Vec2 xp = g.centroid;
  // Second moment int |x - x_P|^2 fixes both the mass entry of (x - x_P) and the mean of
  // the quadratic potential.
  const auto rule = cell_rule(mesh, cell, 2);
  double second = 0.0;
  for (std::size_t q = 0; q < rule.size(); q++)
  {
    second += rule.weights[q] * (rule.points[q] - xp).squaredNorm();
  }
  const double mean3 = 0.5 * second / g.area;
  Eigen::MatrixXd local(3, c.size());
  for (int i = 0; i < c.size(); i++)
  {
    const auto er = edge_rule(mesh.vertex(c.vertices[i]), mesh.vertex(c.vertices[(i + 1) % c.size()]), 2);
    double p3 = 0.0;
    for (std::size_t q = 0; q < er.size(); q++)
    {
      p3 += er.weights[q] * (0.5 * (er.points[q] - xp).squaredNorm() - mean3);
    }
    const double s = c.edge_signs[i];
    local(0, i) = s * g.edge_length[i] * (g.edge_midpoint[i].x() - xp.x()) / g.area;
    local(1, i) = s * g.edge_length[i] * (g.edge_midpoint[i].y() - xp.y()) / g.area;
    local(2, i) = s * p3 / second;
  }
  EdgeProjector p;
  p.kind = EdgeProjectorKind::RT0;
  p.matrix.resize(3, c.size());
  p.matrix.row(0) = local.row(0) - xp.x() * local.row(2);
  p.matrix.row(1) = local.row(1) - xp.y() * local.row(2);
  p.matrix.row(2) = local.row(2);
  return p;
}

Eigen::VectorXd gather_vertices(const PolyMesh &mesh, int cell, const Eigen::VectorXd &global)
{
  const auto &c = mesh.cell(cell);
  Eigen::VectorXd out(c.size());
  for (int i = 0; i < c.size(); i++)
  {
    out[i] = global[c.vertices[i]];
  }
  return out;
}

Eigen::VectorXd gather_edges(const PolyMesh &mesh, int cell, const Eigen::VectorXd &global)
{
  const auto &c = mesh.cell(cell);
  Eigen::VectorXd out(c.size());
  for (int i = 0; i < c.size(); i++)
  {
    out[i] = global[c.edges[i]];
  }
  return out;
}

}  // namespace vemhd
