// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "vemhd/products.hpp"

#include <cmath>

#include "vemhd/parallel.hpp"

namespace vemhd
{

LocalGram gram_V(const PolyMesh &mesh, int cell, const PolyReconstruction &rec)
{
  LocalGram g;
  g.space = Space::V;
  const int n = rec.size();
  const double area = mesh.geometry(cell).area;
  if (rec.kind == ReconstructionKind::GalerkinInterp)
  {
    g.consistency = rec.fan_mass;
  }
  else
  {
    const Eigen::MatrixXd m1 = monomial_gram(mesh, cell, 1);
    g.consistency = rec.coeffs.transpose() * m1 * rec.coeffs;
  }
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - rec.vertex_values;
  g.stabilization = area * residual.transpose() * residual;
  // Symmetrize against roundoff so that assembled operators are exactly symmetric.
  g.consistency = 0.5 * (g.consistency + g.consistency.transpose()).eval();
  g.stabilization = 0.5 * (g.stabilization + g.stabilization.transpose()).eval();
  return g;
}

LocalGram gram_E(const PolyMesh &mesh, int cell, const EdgeProjector &p0)
{
  LocalGram g;
  g.space = Space::E;
  const auto &c = mesh.cell(cell);
  const int n = c.size();
  const double area = mesh.geometry(cell).area;
  g.consistency = area * p0.matrix.transpose() * p0.matrix;
  // DOFs of the projected constant field, in global edge orientation.
  Eigen::MatrixXd normals(n, 2);
  for (int i = 0; i < n; i++)
  {
    normals.row(i) = mesh.edge_geometry(c.edges[i]).normal.transpose();
  }
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - normals * p0.matrix;
  g.stabilization = area * residual.transpose() * residual;
  g.consistency = 0.5 * (g.consistency + g.consistency.transpose()).eval();
  g.stabilization = 0.5 * (g.stabilization + g.stabilization.transpose()).eval();
  return g;
}

Eigen::VectorXd gram_P(const PolyMesh &mesh)
{
  Eigen::VectorXd d(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); c++)
  {
    d[c] = mesh.geometry(c).area;
  }
  return d;
}

SparseMatrix assemble(const PolyMesh &mesh, Space space, const std::vector<LocalGram> &grams)
{
  const int n = space == Space::V ? mesh.num_vertices() : mesh.num_edges();
  std::vector<Eigen::Triplet<double>> t;
  std::size_t nnz = 0;
  for (const auto &g : grams)
  {
    nnz += static_cast<std::size_t>(g.consistency.size());
  }
  t.reserve(nnz);
  for (int c = 0; c < mesh.num_cells(); c++)
  {
    const auto &cell = mesh.cell(c);
    const auto &dofs = space == Space::V ? cell.vertices : cell.edges;
    const Eigen::MatrixXd m = grams[c].matrix();
    for (int i = 0; i < cell.size(); i++)
    {
      for (int j = 0; j < cell.size(); j++)
      {
        t.emplace_back(dofs[i], dofs[j], m(i, j));
      }
    }
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

DiscreteSpaces build_spaces(const PolyMesh &mesh, ReconstructionKind kind)
{
  DiscreteSpaces s;
  s.mesh = &mesh;
  s.kind = kind;
  const int nc = mesh.num_cells();
  s.reconstructions.resize(nc);
  s.p0.resize(nc);
  s.rt.resize(nc);
  s.local_v.resize(nc);
  s.local_e.resize(nc);
  parallel_for(nc,
               [&](int c)
               {
                 s.reconstructions[c] = build_reconstruction(mesh, c, kind);
                 s.p0[c] = project_P0_E(mesh, c);
                 s.rt[c] = project_RT(mesh, c);
                 s.local_v[c] = gram_V(mesh, c, s.reconstructions[c]);
                 s.local_e[c] = gram_E(mesh, c, s.p0[c]);
               });
  s.mass_v = assemble(mesh, Space::V, s.local_v);
  s.mass_e = assemble(mesh, Space::E, s.local_e);
  s.mass_p = gram_P(mesh);
  s.chain = build_chain(mesh);
  return s;
}

NormDiagnostics norm_X_diagnostics(const DiscreteSpaces &spaces, const FieldE &b, const FieldV &e,
                                   double dt, const SparseMatrix *velocity_stiffness,
                                   const Eigen::VectorXd *u)
{
  NormDiagnostics d;
  const FieldP divb = spaces.chain.div * b;
  const FieldE rote = spaces.chain.rot * e;
  const double bb = b.dot(spaces.mass_e * b);
  const double dd = divb.dot(spaces.mass_p.cwiseProduct(divb));
  const double ee = e.dot(spaces.mass_v * e);
  const double rr = rote.dot(spaces.mass_e * rote);
  d.b_div = std::sqrt(bb / dt + dd);
  d.e_curl = std::sqrt(ee + dt * rr);
  if (velocity_stiffness != nullptr && u != nullptr)
  {
    d.u_grad = std::sqrt(std::max(0.0, u->dot(*velocity_stiffness * *u)));
  }
  return d;
}

}  // namespace vemhd
