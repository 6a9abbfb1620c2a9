// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "vemhd/parallel.hpp"
#include "vemhd/solver.hpp"

namespace vemhd
{

void SolverConfig::Validate() const
{
  if (!(theta >= 0.0 && theta <= 1.0))
  {
    throw std::invalid_argument("theta must lie in [0, 1]");
  }
  if (!(dt > 0.0) || !(rm > 0.0))
  {
    throw std::invalid_argument("dt and R_m must be positive");
  }
  const auto &n = newton;
  if (!(n.fd_epsilon > 0.0) || !(n.rtol > 0.0) || !(n.eta_max > 0.0) || !(n.eta0 > 0.0) ||
      !(n.gamma > 0.0) || !(n.alpha > 0.0) || n.max_iterations < 1)
  {
    throw std::invalid_argument("Newton tolerances and parameters must be positive");
  }
  if (gmres.max_iterations < 1 || gmres.stagnation_window < 1)
  {
    throw std::invalid_argument("GMRES limits must be positive");
  }
}

EMSystem::EMSystem(const PolyMesh &mesh, ReconstructionKind kind)
  : mesh_(&mesh), spaces_(build_spaces(mesh, kind))
{
  for (int v = 0; v < mesh.num_vertices(); v++)
  {
    (mesh.boundary_vertex(v) ? boundary_ : interior_).push_back(v);
  }
  const int nc = mesh.num_cells();
  eval_x_.resize(nc);
  eval_y_.resize(nc);
  for (int c = 0; c < nc; c++)
  {
    const auto &cell = mesh.cell(c);
    const Eigen::MatrixXd &rt = spaces_.rt[c].matrix;
    eval_x_[c].resize(cell.size(), cell.size());
    eval_y_[c].resize(cell.size(), cell.size());
    for (int i = 0; i < cell.size(); i++)
    {
      const Vec2 &x = mesh.vertex(cell.vertices[i]);
      eval_x_[c].row(i) = rt.row(0) + x.x() * rt.row(2);
      eval_y_[c].row(i) = rt.row(1) + x.y() * rt.row(2);
    }
  }
}

SparseMatrix EMSystem::coupling_matrix(const VelocityField &u, double t) const
{
  const auto &mesh = *mesh_;
  const int nc = mesh.num_cells();
  std::vector<Eigen::MatrixXd> local(nc);
  parallel_for(nc,
               [&](int c)
               {
                 const auto &cell = mesh.cell(c);
                 const int n = cell.size();
                 Eigen::VectorXd ux(n), uy(n);
                 for (int i = 0; i < n; i++)
                 {
                   const Vec2 val = u(mesh.vertex(cell.vertices[i]), t);
                   ux[i] = val.x();
                   uy[i] = val.y();
                 }
                 const Eigen::MatrixXd w =
                   ux.asDiagonal() * eval_y_[c] - uy.asDiagonal() * eval_x_[c];
                 local[c] = spaces_.local_v[c].matrix() * w;
               });
  std::vector<Eigen::Triplet<double>> t_list;
  for (int c = 0; c < nc; c++)
  {
    const auto &cell = mesh.cell(c);
    for (int i = 0; i < cell.size(); i++)
    {
      for (int j = 0; j < cell.size(); j++)
      {
        t_list.emplace_back(cell.vertices[i], cell.edges[j], local[c](i, j));
      }
    }
  }
  SparseMatrix k(mesh.num_vertices(), mesh.num_edges());
  k.setFromTriplets(t_list.begin(), t_list.end());
  return k;
}

FieldV EMSystem::coupling_term(const VelocityField &u, double t, const FieldE &b) const
{
  return coupling_matrix(u, t) * b;
}

std::vector<Vec2> EMSystem::rt_vertex_values(const FieldE &b) const
{
  std::vector<Vec2> out;
  for (int c = 0; c < mesh_->num_cells(); c++)
  {
    const Eigen::VectorXd f = gather_edges(*mesh_, c, b);
    const Eigen::VectorXd bx = eval_x_[c] * f;
    const Eigen::VectorXd by = eval_y_[c] * f;
    for (int i = 0; i < bx.size(); i++)
    {
      out.emplace_back(bx[i], by[i]);
    }
  }
  return out;
}

std::vector<Vec2> EMSystem::rt_centroid_values(const FieldE &b) const
{
  std::vector<Vec2> out(mesh_->num_cells());
  for (int c = 0; c < mesh_->num_cells(); c++)
  {
    const Eigen::VectorXd coeffs = spaces_.rt[c].matrix * gather_edges(*mesh_, c, b);
    out[c] = EdgeProjector::Evaluate(EdgeProjectorKind::RT0, coeffs, mesh_->geometry(c).centroid);
  }
  return out;
}

double EMSystem::norm_e(const FieldE &b) const
{
  return std::sqrt(std::max(0.0, b.dot(spaces_.mass_e * b)));
}

double EMSystem::norm_v(const FieldV &e) const
{
  return std::sqrt(std::max(0.0, e.dot(spaces_.mass_v * e)));
}

double EMSystem::norm_p(const FieldP &q) const
{
  return std::sqrt(q.dot(spaces_.mass_p.cwiseProduct(q)));
}

ResidualEvaluator::ResidualEvaluator(const EMSystem &system, SolverConfig config,
                                     EMProblem problem)
  : system_(&system), config_(config), problem_(std::move(problem))
{
  config_.Validate();
  if (!problem_.velocity)
  {
    problem_.velocity = [](const Vec2 &, double) { return Vec2(0.0, 0.0); };
    problem_.steady_velocity = true;
  }
  if (!problem_.boundary_e)
  {
    problem_.boundary_e = [](const Vec2 &, double) { return 0.0; };
  }
}

double ResidualEvaluator::faraday_scale() const
{
  return config_.theta > 0.0 ? config_.theta / config_.rm : 1.0 / config_.rm;
}

void ResidualEvaluator::SetPrevious(const EMState &previous)
{
  const auto &mesh = system_->mesh();
  if (previous.b.size() != mesh.num_edges() || previous.e.size() != mesh.num_vertices())
  {
    throw std::invalid_argument("state has mismatched DOF lengths");
  }
  previous_ = previous;
  const double ts = stage_time();
  const auto &bnd = system_->boundary_vertices();
  boundary_values_.resize(bnd.size());
  for (std::size_t i = 0; i < bnd.size(); i++)
  {
    boundary_values_[i] = problem_.boundary_e(mesh.vertex(bnd[i]), ts);
  }
  if (!coupling_ready_ || !problem_.steady_velocity)
  {
    coupling_ = system_->coupling_matrix(problem_.velocity, ts);
    coupling_ready_ = true;
  }
}

Eigen::VectorXd ResidualEvaluator::Pack(const FieldE &b, const FieldV &e_full) const
{
  const int ne = system_->mesh().num_edges();
  const auto &in = system_->interior_vertices();
  Eigen::VectorXd x(size());
  x.head(ne) = b;
  for (std::size_t i = 0; i < in.size(); i++)
  {
    x[ne + i] = e_full[in[i]];
  }
  return x;
}

FieldE ResidualEvaluator::UnpackB(const Eigen::VectorXd &x) const
{
  return x.head(system_->mesh().num_edges());
}

FieldV ResidualEvaluator::UnpackE(const Eigen::VectorXd &x) const
{
  const int ne = system_->mesh().num_edges();
  const auto &in = system_->interior_vertices();
  const auto &bnd = system_->boundary_vertices();
  FieldV e(system_->mesh().num_vertices());
  for (std::size_t i = 0; i < in.size(); i++)
  {
    e[in[i]] = x[ne + i];
  }
  for (std::size_t i = 0; i < bnd.size(); i++)
  {
    e[bnd[i]] = boundary_values_[i];
  }
  return e;
}

void ResidualEvaluator::ApplyFaradayUpdate(Eigen::VectorXd &x) const
{
  const FieldV e = UnpackE(x);
  x.head(system_->mesh().num_edges()) =
    previous_.b - config_.dt * (system_->spaces().chain.rot * e);
}

Eigen::VectorXd ResidualEvaluator::Residual(const Eigen::VectorXd &x) const
{
  if (x.size() != size())
  {
    throw std::invalid_argument("residual input has mismatched DOF length");
  }
  const auto &sp = system_->spaces();
  const int ne = system_->mesh().num_edges();
  const double theta = config_.theta;
  const FieldE b = UnpackB(x);
  const FieldV e = UnpackE(x);
  const FieldE b_theta = (1.0 - theta) * previous_.b + theta * b;
  Eigen::VectorXd g(size());
  const double c = faraday_scale();
  g.head(ne) = c * (sp.mass_e * ((b - previous_.b) / config_.dt + sp.chain.rot * e));
  if (config_.augmented)
  {
    const FieldP divb = sp.chain.div * b;
    g.head(ne) += c * (sp.chain.div.transpose() * sp.mass_p.cwiseProduct(divb));
  }
  const FieldV ohm = sp.mass_v * e + coupling_ * b_theta -
                     (1.0 / config_.rm) * (sp.chain.rot.transpose() * (sp.mass_e * b_theta));
  const auto &in = system_->interior_vertices();
  for (std::size_t i = 0; i < in.size(); i++)
  {
    g[ne + i] = ohm[in[i]];
  }
  return g;
}

Eigen::VectorXd jacobian_action(const ResidualEvaluator &eval, const Eigen::VectorXd &x,
                                const Eigen::VectorXd &gx, const Eigen::VectorXd &dx, double eps)
{
  return (eval.Residual(x + eps * dx) - gx) / eps;
}

}  // namespace vemhd
