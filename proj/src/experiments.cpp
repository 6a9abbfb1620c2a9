// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vemhd/app.hpp"

namespace vemhd
{

namespace
{

// Relative L2(Omega) errors of the P1 reconstruction of E and the RT0 projection of B.
std::pair<double, double> ReconstructionErrors(const EMSystem &system, const EMState &state,
                                               const ScalarFunction &e, const VectorFunction &b)
{
  const PolyMesh &mesh = system.mesh();
  const DiscreteSpaces &s = system.spaces();
  double de = 0.0, ne = 0.0, db = 0.0, nb = 0.0;
  for (int c = 0; c < mesh.num_cells(); c++)
  {
    const auto &rec = s.reconstructions[c];
    const Eigen::VectorXd pe = rec.coeffs * gather_vertices(mesh, c, state.e);
    const Eigen::VectorXd pb = s.rt[c].matrix * gather_edges(mesh, c, state.b);
    const QuadratureRule rule = cell_rule(mesh, c, 8);
    for (std::size_t k = 0; k < rule.size(); k++)
    {
      const Vec2 &x = rule.points[k];
      const double w = rule.weights[k];
      const double ex = e(x);
      const Vec2 bx = b(x);
      de += w * std::pow(rec.basis.Values(x).dot(pe) - ex, 2);
      ne += w * ex * ex;
      db += w * (EdgeProjector::Evaluate(EdgeProjectorKind::RT0, pb, x) - bx).squaredNorm();
      nb += w * bx.squaredNorm();
    }
  }
  return {std::sqrt(de / ne), std::sqrt(db / nb)};
}

}  // namespace

MeshKind parse_mesh_kind(std::string_view name)
{
  if (name == "tri")
  {
    return MeshKind::Triangular;
  }
  if (name == "pquad")
  {
    return MeshKind::PerturbedQuads;
  }
  if (name == "voronoi")
  {
    return MeshKind::Voronoi;
  }
  if (name == "refined")
  {
    return MeshKind::CenterRefined;
  }
  throw std::invalid_argument("unknown mesh kind '" + std::string(name) +
                              "' (expected tri, pquad, voronoi or refined)");
}

std::string to_string(MeshKind kind)
{
  switch (kind)
  {
    case MeshKind::Triangular:
      return "tri";
    case MeshKind::PerturbedQuads:
      return "pquad";
    case MeshKind::Voronoi:
      return "voronoi";
    case MeshKind::CenterRefined:
      return "refined";
  }
  return "unknown";
}

PolyMesh make_mesh(MeshKind kind, int n, std::uint64_t seed, const MeshParams &params)
{
  switch (kind)
  {
    case MeshKind::Triangular:
      return gen_triangular(n);
    case MeshKind::PerturbedQuads:
      return gen_perturbed_quads(n, params.quad_amplitude, seed);
    case MeshKind::Voronoi:
      return gen_voronoi(n, params.lloyd_iterations, seed);
    case MeshKind::CenterRefined:
      return gen_center_refined(n, params.refine_radius, params.refine_base);
  }
  throw std::invalid_argument("unknown mesh kind");
}

PolyMesh convergence_mesh(MeshKind kind, int level, std::uint64_t seed, const MeshParams &params)
{
  switch (kind)
  {
    case MeshKind::Triangular:
    case MeshKind::PerturbedQuads:
      return make_mesh(kind, 4 << level, seed, params);
    case MeshKind::Voronoi:
      return gen_voronoi(16 << (2 * level), params.lloyd_iterations, seed);
    case MeshKind::CenterRefined:
      return gen_center_refined(2, params.refine_radius, 4 << level);
  }
  throw std::invalid_argument("unknown mesh kind");
}

double convergence_h(MeshKind kind, int level)
{
  if (kind == MeshKind::Voronoi)
  {
    return 2.0 / std::sqrt(static_cast<double>(16 << (2 * level)));
  }
  return 2.0 / static_cast<double>(4 << level);
}

ConvergenceRow run_manufactured(const PolyMesh &mesh, double h, const ExperimentConfig &config)
{
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const EMSystem system(mesh, config.projector);
  SolverConfig cfg;
  cfg.theta = config.theta;
  cfg.rm = 1.0;
  cfg.final_time = config.final_time;
  cfg.newton = config.newton;
  int steps = config.steps;
  if (steps < 0)
  {
    const double dt = config.dt_c * h * h;
    steps = std::max(1, static_cast<int>(std::ceil(config.final_time / dt - 1e-9)));
  }
  cfg.dt = steps > 0 ? config.final_time / steps : config.dt_c * h * h;
  const double t_end = steps > 0 ? config.final_time : 0.0;

  EMProblem problem;
  problem.velocity = [](const Vec2 &x, double) { return ManufacturedSolution::u(x); };
  problem.steady_velocity = true;
  problem.boundary_e = [](const Vec2 &x, double t) { return ManufacturedSolution::e(x, t); };

  // B_0 through the commuting diagram: rot E_0 = B_0, so R I_V(E_0) = I_E(B_0) and is
  // discretely divergence-free.
  EMState state;
  const FieldV e0 = interp_V(mesh, [](const Vec2 &x) { return ManufacturedSolution::e(x, 0.0); });
  state.b = system.spaces().chain.rot * e0;
  state.e = steps == 0 ? e0 : FieldV::Zero(mesh.num_vertices());
  state.t = 0.0;

  ConvergenceRow row;
  row.h = h;
  row.cells = mesh.num_cells();
  row.unknowns = system.num_unknowns();
  row.steps = steps;
  row.dt = cfg.dt;
  {
    const double b0 = system.norm_e(state.b);
    row.div_max = system.norm_p(system.spaces().chain.div * state.b) / b0;
  }
  if (steps > 0)
  {
    state = integrate(system, cfg, problem, state, steps,
                      [&](const StepInfo &info)
                      {
                        row.div_max = std::max(row.div_max, info.divergence);
                        row.newton_div_identity =
                          std::max(row.newton_div_identity, info.log->divergence_identity);
                        row.newton_iterations += info.log->iterations;
                        for (int k : info.log->gmres_iterations)
                        {
                          row.gmres_iterations += k;
                        }
                      });
  }
  // E lives at the last stage time t^{N-1+theta}; B at t^N.
  const double t_e = steps > 0 ? t_end - (1.0 - cfg.theta) * cfg.dt : 0.0;
  const FieldV e_ref = interp_V(mesh, [&](const Vec2 &x) { return ManufacturedSolution::e(x, t_e); });
  const FieldE b_ref =
    interp_E(mesh, [&](const Vec2 &x) { return ManufacturedSolution::b(x, t_end); }, 10);
  row.err_e_dof = system.norm_v(state.e - e_ref) / system.norm_v(e_ref);
  row.err_b_dof = system.norm_e(state.b - b_ref) / system.norm_e(b_ref);
  const auto [err_e, err_b] = ReconstructionErrors(
    system, state, [&](const Vec2 &x) { return ManufacturedSolution::e(x, t_e); },
    [&](const Vec2 &x) { return ManufacturedSolution::b(x, t_end); });
  row.err_e = err_e;
  row.err_b = err_b;
  row.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return row;
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig &config,
                                            const std::function<void(const ConvergenceRow &)> &on_row)
{
  if (config.levels < 1)
  {
    throw std::invalid_argument("convergence study needs at least one level");
  }
  if (ManufacturedSolution::self_test(100, 7) > 1e-10)
  {
    throw std::runtime_error("manufactured solution self-test failed");
  }
  std::vector<ConvergenceRow> rows;
  for (int k = 0; k < config.levels; k++)
  {
    const PolyMesh mesh = convergence_mesh(config.mesh_kind, k, config.seed, config.mesh);
    ConvergenceRow row = run_manufactured(mesh, convergence_h(config.mesh_kind, k), config);
    row.level = k;
    if (rows.empty())
    {
      row.eoc_e = row.eoc_b = std::numeric_limits<double>::quiet_NaN();
    }
    else
    {
      const auto &prev = rows.back();
      const double r = std::log(prev.h / row.h);
      row.eoc_e = std::log(prev.err_e / row.err_e) / r;
      row.eoc_b = std::log(prev.err_b / row.err_b) / r;
    }
    rows.push_back(row);
    if (on_row)
    {
      on_row(row);
    }
  }
  return rows;
}

std::vector<std::string> convergence_header()
{
  return {"level", "h",     "cells",  "unknowns", "steps",           "dt",
          "err_E", "err_B", "eoc_E",  "eoc_B", "err_E_dof", "err_B_dof",    "div_max",         "newton_div_identity",
          "newton_iterations", "gmres_iterations", "seconds"};
}

std::vector<double> convergence_values(const ConvergenceRow &r)
{
  return {static_cast<double>(r.level),
          r.h,
          static_cast<double>(r.cells),
          static_cast<double>(r.unknowns),
          static_cast<double>(r.steps),
          r.dt,
          r.err_e,
          r.err_b,
          r.eoc_e,
          r.eoc_b,
          r.err_e_dof,
          r.err_b_dof,
          r.div_max,
          r.newton_div_identity,
          static_cast<double>(r.newton_iterations),
          static_cast<double>(r.gmres_iterations),
          r.seconds};
}

double ReconnectionReport::metric_at(double t) const
{
  if (times.empty())
  {
    throw std::out_of_range("reconnection report is empty");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < times.size(); i++)
  {
    if (std::abs(times[i] - t) < std::abs(times[best] - t))
    {
      best = i;
    }
  }
  return metric[best];
}

ReconnectionReport run_reconnection(const ReconnectionConfig &config)
{
  const PolyMesh mesh = gen_center_refined(config.levels, config.refine_radius, config.base_n);
  const EMSystem system(mesh, config.projector);
  SolverConfig cfg;
  cfg.theta = config.theta;
  cfg.dt = config.dt;
  cfg.rm = config.rm;
  cfg.final_time = config.final_time;
  cfg.newton = config.newton;
  const int steps = std::max(1, static_cast<int>(std::llround(config.final_time / config.dt)));

  EMProblem problem;
  problem.velocity = [](const Vec2 &x, double) { return Vec2(-x.x(), x.y()); };
  problem.steady_velocity = true;
  const double eb = config.boundary_e;
  problem.boundary_e = [eb](const Vec2 &, double) { return eb; };

  ReconnectionReport report;
  report.cells = mesh.num_cells();
  for (const auto &c : mesh.cells())
  {
    report.hanging_cells += c.size() > 4 ? 1 : 0;
  }
  // (tanh y, 0) = rot(log cosh y).
  EMState state;
  state.b = system.spaces().chain.rot *
            interp_V(mesh, [](const Vec2 &x) { return std::log(std::cosh(x.y())); });
  state.e = FieldV::Zero(mesh.num_vertices());
  state.t = 0.0;
  report.div_max = system.norm_p(system.spaces().chain.div * state.b) / system.norm_e(state.b);

  if (!config.out_dir.empty())
  {
    std::filesystem::create_directories(config.out_dir);
  }
  std::vector<bool> written(config.frames.size(), false);
  auto maybe_write = [&](int step, const EMState &s)
  {
    if (config.out_dir.empty())
    {
      return;
    }
    for (std::size_t f = 0; f < config.frames.size(); f++)
    {
      if (!written[f] && std::abs(config.frames[f] - step * config.dt) <= 0.5 * config.dt)
      {
        char name[64];
        std::snprintf(name, sizeof(name), "frame_%02zu_t%.3f.vtk", f, config.frames[f]);
        const auto path = config.out_dir / name;
        char title[64];
        std::snprintf(title, sizeof(title), "vemhd reconnection t=%.6f", step * config.dt);
        export_vtk(mesh, system.rt_centroid_values(s.b), s.e, path, title);
        report.frame_files.push_back(path);
        written[f] = true;
      }
    }
  };
  maybe_write(0, state);
  FieldE b_prev = state.b;
  integrate(system, cfg, problem, state, steps,
            [&](const StepInfo &info)
            {
              const double bn = system.norm_e(b_prev);
              report.times.push_back(info.step * config.dt);
              report.metric.push_back(system.norm_e(info.state->b - b_prev) / (config.dt * bn));
              report.divergence.push_back(info.divergence);
              report.div_max = std::max(report.div_max, info.divergence);
              b_prev = info.state->b;
              maybe_write(info.step, *info.state);
            });
  if (!config.out_dir.empty())
  {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < report.times.size(); i++)
    {
      rows.push_back({report.times[i], report.metric[i], report.divergence[i]});
    }
    export_csv({"t", "steady_metric", "div_ratio"}, rows, config.out_dir / "history.csv");
  }
  return report;
}

}  // namespace vemhd
