// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "vemhd/fluid.hpp"

#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace vemhd
{

namespace
{

// Index of the scaled monomial x^a y^b in the degree-ordered list.
int MonomialIndex(int a, int b)
{
  const int k = a + b;
  return (k == 0 ? 0 : monomial_dim(k - 1)) + b;
}

// 12 x 12 block-diagonal matrix diag(m, m).
Eigen::MatrixXd BlockDiag(const Eigen::MatrixXd &m)
{
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(12, 12);
  out.topLeftCorner(6, 6) = m;
  out.bottomRightCorner(6, 6) = m;
  return out;
}

// Stiffness of the scaled P2 monomials, int grad m_i . grad m_j.
Eigen::MatrixXd MonomialStiffness(const PolyMesh &mesh, int cell, const ScaledMonomials &p2)
{
  const auto rule = cell_rule(mesh, cell, 2);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(6, 6);
  for (std::size_t q = 0; q < rule.size(); q++)
  {
    const auto g = p2.Gradients(rule.points[q]);
    s.noalias() += rule.weights[q] * g.transpose() * g;
  }
  return s;
}

Vec2 Laplacian(const ScaledMonomials &p2, const VectorQuadratic &c)
{
  const double f = 2.0 / (p2.scale() * p2.scale());
  return Vec2(f * (c[3] + c[5]), f * (c[9] + c[11]));
}

// Simpson nodes of local edge i: (local node, point, weight).
struct EdgeNode
{
  int node;
  Vec2 point;
  double weight;
};

std::array<EdgeNode, 3> SimpsonNodes(const std::vector<Vec2> &nodes, int i, int n, double len)
{
  const int a = 2 * i;
  const int m = 2 * i + 1;
  const int b = 2 * ((i + 1) % n);
  return {EdgeNode{a, nodes[a], len / 6.0}, EdgeNode{m, nodes[m], 4.0 * len / 6.0},
          EdgeNode{b, nodes[b], len / 6.0}};
}

}  // namespace

int tv_dof_count(const PolyMesh &mesh) { return 2 * (mesh.num_vertices() + mesh.num_edges()); }

FieldTV interp_TV(const PolyMesh &mesh, const VectorFunction &v)
{
  FieldTV out(tv_dof_count(mesh));
  const int nv = mesh.num_vertices();
  for (int i = 0; i < nv; i++)
  {
    const Vec2 val = v(mesh.vertex(i));
    out[2 * i] = val.x();
    out[2 * i + 1] = val.y();
  }
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    const Vec2 val = v(mesh.edge_geometry(e).midpoint);
    out[2 * (nv + e)] = val.x();
    out[2 * (nv + e) + 1] = val.y();
  }
  return out;
}

std::vector<int> tv_local_dofs(const PolyMesh &mesh, int cell)
{
  const auto &c = mesh.cell(cell);
  const int nv = mesh.num_vertices();
  std::vector<int> dofs(4 * c.size());
  for (int i = 0; i < c.size(); i++)
  {
    const int v = c.vertices[i];
    const int e = c.edges[i];
    dofs[4 * i + 0] = 2 * v;
    dofs[4 * i + 1] = 2 * v + 1;
    dofs[4 * i + 2] = 2 * (nv + e);
    dofs[4 * i + 3] = 2 * (nv + e) + 1;
  }
  return dofs;
}

std::vector<Vec2> tv_local_nodes(const PolyMesh &mesh, int cell)
{
  const auto &c = mesh.cell(cell);
  std::vector<Vec2> nodes(2 * c.size());
  for (int i = 0; i < c.size(); i++)
  {
    nodes[2 * i] = mesh.vertex(c.vertices[i]);
    nodes[2 * i + 1] = mesh.edge_geometry(c.edges[i]).midpoint;
  }
  return nodes;
}

Eigen::VectorXd gather_tv(const PolyMesh &mesh, int cell, const FieldTV &global)
{
  const auto dofs = tv_local_dofs(mesh, cell);
  Eigen::VectorXd out(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); i++)
  {
    out[i] = global[dofs[i]];
  }
  return out;
}

Vec2 eval_vector_quadratic(const ScaledMonomials &p2, const VectorQuadratic &c, const Vec2 &x)
{
  const Eigen::VectorXd m = p2.Values(x);
  return Vec2(m.dot(c.head<6>()), m.dot(c.tail<6>()));
}

Eigen::Matrix2d grad_vector_quadratic(const ScaledMonomials &p2, const VectorQuadratic &c,
                                      const Vec2 &x)
{
  const auto g = p2.Gradients(x);
  Eigen::Matrix2d out;
  out.row(0) = (g * c.head<6>()).transpose();
  out.row(1) = (g * c.tail<6>()).transpose();
  return out;
}

Eigen::MatrixXd basis_PSv(const PolyMesh &mesh, int cell)
{
  const ScaledMonomials p2(mesh, cell, 2);
  const double h = p2.scale();
  // Linear part of div q: coefficients on m1 and m2 must vanish.
  Eigen::MatrixXd constraint = Eigen::MatrixXd::Zero(2, 12);
  for (int i = 0; i < 6; i++)
  {
    const auto [a, b] = monomial_exponents(i);
    if (a >= 1 && a + b == 2)
    {
      const int target = MonomialIndex(a - 1, b);
      constraint(target - 1, i) += a / h;
    }
    if (b >= 1 && a + b == 2)
    {
      const int target = MonomialIndex(a, b - 1);
      constraint(target - 1, 6 + i) += b / h;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(constraint);
  const Eigen::MatrixXd kernel = lu.kernel();
  const Eigen::MatrixXd mass = BlockDiag(monomial_gram(mesh, cell, 2));
  const double area = mesh.geometry(cell).area;
  Eigen::MatrixXd constants = Eigen::MatrixXd::Zero(12, 2);
  constants(0, 0) = 1.0 / std::sqrt(area);
  constants(6, 1) = 1.0 / std::sqrt(area);
  const Eigen::MatrixXd rest = kernel - constants * (constants.transpose() * mass * kernel);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rest.transpose() * mass * rest);
  const double top = eig.eigenvalues().maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < eig.eigenvalues().size(); i++)
  {
    if (eig.eigenvalues()[i] > 1e-10 * top)
    {
      keep.push_back(i);
    }
  }
  Eigen::MatrixXd basis(12, 2 + keep.size());
  basis.leftCols(2) = constants;
  for (std::size_t k = 0; k < keep.size(); k++)
  {
    basis.col(2 + k) =
      rest * eig.eigenvectors().col(keep[k]) / std::sqrt(eig.eigenvalues()[keep[k]]);
  }
  return basis;
}

VelocityCellOps build_velocity_ops(const PolyMesh &mesh, int cell)
{
  VelocityCellOps ops;
  const auto &c = mesh.cell(cell);
  const auto &geo = mesh.geometry(cell);
  const int n = c.size();
  const int ndof = 4 * n;
  ops.p2 = ScaledMonomials(mesh, cell, 2);
  const auto &p2 = ops.p2;
  const double h = p2.scale();
  ops.psv = basis_PSv(mesh, cell);
  const int dim = static_cast<int>(ops.psv.cols());
  const Eigen::MatrixXd mass12 = BlockDiag(monomial_gram(mesh, cell, 2));
  const Eigen::MatrixXd stiff12 = BlockDiag(MonomialStiffness(mesh, cell, p2));
  ops.psv_mass = ops.psv.transpose() * mass12 * ops.psv;
  ops.psv_stiff = ops.psv.transpose() * stiff12 * ops.psv;
  const auto nodes = tv_local_nodes(mesh, cell);
  auto q = [&](int k) -> VectorQuadratic { return ops.psv.col(k); };

  // Divergence from boundary traces.
  ops.div_row = Eigen::RowVectorXd::Zero(ndof);
  for (int i = 0; i < n; i++)
  {
    const Vec2 nrm = geo.edge_normal[i];
    for (const auto &en : SimpsonNodes(nodes, i, n, geo.edge_length[i]))
    {
      ops.div_row[2 * en.node] += en.weight * nrm.x() / geo.area;
      ops.div_row[2 * en.node + 1] += en.weight * nrm.y() / geo.area;
    }
  }

  // Elliptic projection: gradient moments against non-constant PSv members from traces, and
  // the vertex-sum condition for the constant components.
  Eigen::MatrixXd lhs = ops.psv_stiff;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dim, ndof);
  for (int comp = 0; comp < 2; comp++)
  {
    for (int l = 0; l < dim; l++)
    {
      double s = 0.0;
      for (int i = 0; i < n; i++)
      {
        s += eval_vector_quadratic(p2, q(l), nodes[2 * i])[comp];
      }
      lhs(comp, l) = s;
    }
    for (int i = 0; i < n; i++)
    {
      rhs(comp, 4 * i + comp) = 1.0;
    }
  }
  for (int k = 2; k < dim; k++)
  {
    const Vec2 lap = Laplacian(p2, q(k));
    for (int i = 0; i < n; i++)
    {
      const Vec2 nrm = geo.edge_normal[i];
      for (const auto &en : SimpsonNodes(nodes, i, n, geo.edge_length[i]))
      {
        const Vec2 w = grad_vector_quadratic(p2, q(k), en.point) * nrm -
                       lap.dot(en.point - geo.centroid) * nrm;
        rhs(k, 2 * en.node) += en.weight * w.x();
        rhs(k, 2 * en.node + 1) += en.weight * w.y();
      }
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  if (!lu.isInvertible())
  {
    throw GeometryError("elliptic velocity projection is singular on cell " + std::to_string(cell));
  }
  ops.pi_nabla = lu.solve(rhs);

  // Split [P2]^2 = grad P3 + complement.
  ops.g2 = Eigen::MatrixXd::Zero(12, 9);
  for (int j = 1; j < monomial_dim(3); j++)
  {
    const auto [a, b] = monomial_exponents(j);
    if (a >= 1)
    {
      ops.g2(MonomialIndex(a - 1, b), j - 1) += a / h;
    }
    if (b >= 1)
    {
      ops.g2(6 + MonomialIndex(a, b - 1), j - 1) += b / h;
    }
  }
  {
    Eigen::FullPivLU<Eigen::MatrixXd> perp((ops.g2.transpose() * mass12).eval());
    ops.g2_perp = perp.kernel();
  }
  Eigen::MatrixXd split(12, 12);
  split << ops.g2, ops.g2_perp;
  const Eigen::MatrixXd parts = split.fullPivLu().solve(ops.psv);
  // Means of the cubic potentials.
  const ScaledMonomials p3(mesh, cell, 3);
  Eigen::VectorXd p3_mean = Eigen::VectorXd::Zero(monomial_dim(3));
  {
    const auto rule = cell_rule(mesh, cell, 3);
    for (std::size_t k = 0; k < rule.size(); k++)
    {
      p3_mean += rule.weights[k] * p3.Values(rule.points[k]);
    }
    p3_mean /= geo.area;
  }
  const auto &[gz, gw] = gauss_legendre(3);
  Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(dim, ndof);
  for (int k = 0; k < dim; k++)
  {
    const Eigen::VectorXd alpha = parts.col(k).head(9);
    const Eigen::VectorXd beta = parts.col(k).tail(parts.rows() - 9);
    // Gradient part: int v . grad g = sum_e int_e (g - mean g) v . n, since div v is constant.
    const double gbar = alpha.dot(p3_mean.tail(9));
    for (int i = 0; i < n; i++)
    {
      const Vec2 nrm = geo.edge_normal[i];
      const Vec2 a = nodes[2 * i];
      const Vec2 b = nodes[2 * ((i + 1) % n)];
      for (int g = 0; g < 3; g++)
      {
        const double t = 0.5 * (gz[g] + 1.0);
        const double w = 0.5 * gw[g] * geo.edge_length[i];
        const Vec2 x = a + t * (b - a);
        const double pot = alpha.dot(p3.Values(x).tail(9)) - gbar;
        const double lag[3] = {(1.0 - t) * (1.0 - 2.0 * t), 4.0 * t * (1.0 - t), t * (2.0 * t - 1.0)};
        const int nd[3] = {2 * i, 2 * i + 1, 2 * ((i + 1) % n)};
        for (int j = 0; j < 3; j++)
        {
          moments(k, 2 * nd[j]) += w * pot * lag[j] * nrm.x();
          moments(k, 2 * nd[j] + 1) += w * pot * lag[j] * nrm.y();
        }
      }
    }
    // Complement part: constant coefficient through its linear potential, the rest through
    // the defining property <v - Pi_nabla v, g_perp> = 0.
    VectorQuadratic perp = ops.g2_perp * beta;
    const Vec2 cst(perp[0], perp[6]);
    perp[0] = 0.0;
    perp[6] = 0.0;
    for (int i = 0; i < n; i++)
    {
      const Vec2 nrm = geo.edge_normal[i];
      for (const auto &en : SimpsonNodes(nodes, i, n, geo.edge_length[i]))
      {
        const double pot = cst.dot(en.point - geo.centroid);
        moments(k, 2 * en.node) += en.weight * pot * nrm.x();
        moments(k, 2 * en.node + 1) += en.weight * pot * nrm.y();
      }
    }
    const Eigen::VectorXd against = ops.psv.transpose() * mass12 * perp;
    moments.row(k) += against.transpose() * ops.pi_nabla;
  }
  ops.pi0 = ops.psv_mass.llt().solve(moments);

  Eigen::MatrixXd eval(ndof, dim);
  for (int node = 0; node < 2 * n; node++)
  {
    for (int l = 0; l < dim; l++)
    {
      const Vec2 v = eval_vector_quadratic(p2, q(l), nodes[node]);
      eval(2 * node, l) = v.x();
      eval(2 * node + 1, l) = v.y();
    }
  }
  ops.node_values_nabla = eval * ops.pi_nabla;
  ops.node_values_pi0 = eval * ops.pi0;
  return ops;
}

LocalGram gram_TV(const PolyMesh &mesh, int cell, const VelocityCellOps &ops)
{
  LocalGram g;
  const int ndof = static_cast<int>(ops.pi0.cols());
  g.consistency = ops.pi0.transpose() * ops.psv_mass * ops.pi0;
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(ndof, ndof) - ops.node_values_pi0;
  g.stabilization = mesh.geometry(cell).area * r.transpose() * r;
  g.consistency = 0.5 * (g.consistency + g.consistency.transpose()).eval();
  g.stabilization = 0.5 * (g.stabilization + g.stabilization.transpose()).eval();
  return g;
}

LocalGram stiff_TV(const PolyMesh &, int, const VelocityCellOps &ops)
{
  LocalGram g;
  const int ndof = static_cast<int>(ops.pi_nabla.cols());
  g.consistency = ops.pi_nabla.transpose() * ops.psv_stiff * ops.pi_nabla;
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(ndof, ndof) - ops.node_values_nabla;
  g.stabilization = r.transpose() * r;
  g.consistency = 0.5 * (g.consistency + g.consistency.transpose()).eval();
  g.stabilization = 0.5 * (g.stabilization + g.stabilization.transpose()).eval();
  return g;
}

SparseMatrix assemble_tv(const PolyMesh &mesh, const std::vector<LocalGram> &grams)
{
  std::vector<Eigen::Triplet<double>> t;
  for (int c = 0; c < mesh.num_cells(); c++)
  {
    const auto dofs = tv_local_dofs(mesh, c);
    const Eigen::MatrixXd m = grams[c].matrix();
    for (std::size_t i = 0; i < dofs.size(); i++)
    {
      for (std::size_t j = 0; j < dofs.size(); j++)
      {
        t.emplace_back(dofs[i], dofs[j], m(i, j));
      }
    }
  }
  SparseMatrix a(tv_dof_count(mesh), tv_dof_count(mesh));
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

SparseMatrix div_TV_map(const PolyMesh &mesh, const std::vector<VelocityCellOps> &ops)
{
  std::vector<Eigen::Triplet<double>> t;
  for (int c = 0; c < mesh.num_cells(); c++)
  {
    const auto dofs = tv_local_dofs(mesh, c);
    for (std::size_t i = 0; i < dofs.size(); i++)
    {
      t.emplace_back(c, dofs[i], ops[c].div_row[i]);
    }
  }
  SparseMatrix d(mesh.num_cells(), tv_dof_count(mesh));
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

std::vector<bool> tv_interior_mask(const PolyMesh &mesh)
{
  std::vector<bool> mask(tv_dof_count(mesh));
  const int nv = mesh.num_vertices();
  for (int v = 0; v < nv; v++)
  {
    mask[2 * v] = mask[2 * v + 1] = !mesh.boundary_vertex(v);
  }
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    mask[2 * (nv + e)] = mask[2 * (nv + e) + 1] = !mesh.boundary_edge(e);
  }
  return mask;
}

InfSupResult infsup_probe(const PolyMesh &mesh)
{
  const int nc = mesh.num_cells();
  std::vector<VelocityCellOps> ops(nc);
  std::vector<LocalGram> stiff(nc);
  for (int c = 0; c < nc; c++)
  {
    ops[c] = build_velocity_ops(mesh, c);
    stiff[c] = stiff_TV(mesh, c, ops[c]);
  }
  const auto mask = tv_interior_mask(mesh);
  std::vector<int> interior;
  for (std::size_t i = 0; i < mask.size(); i++)
  {
    if (mask[i])
    {
      interior.push_back(static_cast<int>(i));
    }
  }
  if (interior.empty())
  {
    throw InfSupError("mesh has no interior velocity degrees of freedom");
  }
  if (nc < 2)
  {
    throw InfSupError("zero-mean pressure space is trivial on a single cell");
  }
  const Eigen::MatrixXd a_full = Eigen::MatrixXd(assemble_tv(mesh, stiff));
  const Eigen::MatrixXd d_full = Eigen::MatrixXd(div_TV_map(mesh, ops));
  const int ni = static_cast<int>(interior.size());
  Eigen::MatrixXd a(ni, ni), b(nc, ni);
  for (int j = 0; j < ni; j++)
  {
    for (int i = 0; i < ni; i++)
    {
      a(i, j) = a_full(interior[i], interior[j]);
    }
    b.col(j) = d_full.col(interior[j]);
  }
  const Eigen::VectorXd area = gram_P(mesh);
  // b(v, q) = sum_P |P| q_P div_P v; pressures measured in the |P|-weighted L2 norm.
  const Eigen::VectorXd sqrt_area = area.cwiseSqrt();
  const Eigen::MatrixXd bs = sqrt_area.asDiagonal() * b;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
  {
    throw InfSupError("interior velocity stiffness is not positive definite");
  }
  const Eigen::MatrixXd s = bs * llt.solve(bs.transpose());
  // Restrict to the complement of the constant pressure, sqrt(|P|) in these coordinates.
  const Eigen::VectorXd w = sqrt_area.normalized();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd z = q.rightCols(nc - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(z.transpose() * s * z);
  InfSupResult r;
  r.beta = std::sqrt(std::max(0.0, eig.eigenvalues().minCoeff()));
  r.velocity_dofs = ni;
  r.pressure_dofs = nc - 1;
  r.stable = r.beta >= 1e-10;
  return r;
}

}  // namespace vemhd
