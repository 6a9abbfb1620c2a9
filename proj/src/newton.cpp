// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "vemhd/solver.hpp"

namespace vemhd
{

double forcing_term(const NewtonParams &p, double g_m, double g_prev, double eta_prev, double eps_t)
{
  const double eta_a = p.gamma * std::pow(g_m / g_prev, p.alpha);
  const double eta_b = std::min(p.eta_max, std::max(eta_a, p.gamma * std::pow(eta_prev, p.alpha)));
  return std::min(p.eta_max, std::max(eta_b, p.gamma * eps_t / g_m));
}

double divergence_of_step(const SparseMatrix &div, const FieldE &b, const FieldE &db,
                          const FieldE &b_prev)
{
  const FieldP lhs = div * db;
  const FieldP rhs = div * (b_prev - b);
  return (lhs - rhs).lpNorm<Eigen::Infinity>();
}

StepResult newton_step_loop(ResidualEvaluator &eval, const EMState &previous)
{
  eval.SetPrevious(previous);
  const auto &cfg = eval.config();
  const auto &p = cfg.newton;
  const auto &system = eval.system();
  const auto &div = system.spaces().chain.div;
  StepResult out;
  auto &log = out.log;
  // With the exact Faraday update every iterate satisfies B = B^n - dt R E, so GMRES runs on
  // the interior E block of the reduced operator dE -> G'(x)[-dt R dE; dE].
  const bool reduced = cfg.exact_faraday_update && !cfg.augmented;
  const int ne = system.mesh().num_edges();
  const auto &interior = system.interior_vertices();
  const int ni = static_cast<int>(interior.size());
  const auto lift = [&](const Eigen::VectorXd &de)
  {
    FieldV full = FieldV::Zero(system.mesh().num_vertices());
    for (int i = 0; i < ni; i++)
    {
      full[interior[i]] = de[i];
    }
    Eigen::VectorXd dx(eval.size());
    dx.head(ne) = -cfg.dt * (system.spaces().chain.rot * full);
    dx.tail(ni) = de;
    return dx;
  };
  Eigen::VectorXd x = eval.Pack(previous.b, previous.e);
  if (reduced)
  {
    eval.ApplyFaradayUpdate(x);
  }
  Eigen::VectorXd g = eval.Residual(x);
  double gnorm = g.norm();
  const double atol = p.atol < 0.0 ? std::sqrt(static_cast<double>(eval.size())) * 1e-15 : p.atol;
  log.tolerance = atol + p.rtol * gnorm;
  log.residual_norms.push_back(gnorm);
  const double b_scale = std::max(system.norm_e(previous.b), 1e-300);
  double eta = p.fixed_forcing > 0.0 ? p.fixed_forcing : p.eta0;
  double g_prev = gnorm;
  while (!(gnorm < log.tolerance))
  {
    if (log.iterations >= p.max_iterations)
    {
      std::ostringstream msg;
      msg << "Newton did not converge in " << p.max_iterations << " iterations (residual " << gnorm
          << ", tolerance " << log.tolerance << ")";
      throw SolverError(msg.str(), log.residual_norms);
    }
    const FieldE b_old = eval.UnpackB(x);
    GmresResult lin;
    if (reduced)
    {
      const auto action = [&](const Eigen::VectorXd &de)
      { return Eigen::VectorXd(jacobian_action(eval, x, g, lift(de), p.fd_epsilon).tail(ni)); };
      lin = gmres_solve(action, -g.tail(ni), eta, cfg.gmres);
      x += lift(lin.x);
      eval.ApplyFaradayUpdate(x);
    }
    else
    {
      const auto action = [&](const Eigen::VectorXd &dx)
      { return jacobian_action(eval, x, g, dx, p.fd_epsilon); };
      lin = gmres_solve(action, -g, eta, cfg.gmres);
      x += lin.x;
    }
    log.forcing.push_back(eta);
    log.gmres_iterations.push_back(lin.iterations);
    const FieldE db = eval.UnpackB(x) - b_old;
    const FieldP mismatch = div * db - div * (previous.b - b_old);
    log.divergence_identity =
      std::max(log.divergence_identity, system.norm_p(mismatch) / b_scale);
    g = eval.Residual(x);
    gnorm = g.norm();
    log.residual_norms.push_back(gnorm);
    log.iterations++;
    if (gnorm < log.tolerance)
    {
      break;
    }
    eta = p.fixed_forcing > 0.0 ? p.fixed_forcing
                                : forcing_term(p, gnorm, g_prev, eta, log.tolerance);
    g_prev = gnorm;
  }
  out.state.b = eval.UnpackB(x);
  out.state.e = eval.UnpackE(x);
  out.state.t = previous.t + cfg.dt;
  return out;
}

EMState integrate(const EMSystem &system, const SolverConfig &config, const EMProblem &problem,
                  const EMState &initial, int steps,
                  const std::function<void(const StepInfo &)> &observer)
{
  SolverConfig cfg = config;
  if (steps < 0)
  {
    steps = std::max(1, static_cast<int>(std::ceil(config.final_time / config.dt - 1e-9)));
    cfg.dt = config.final_time / steps;
  }
  ResidualEvaluator eval(system, cfg, problem);
  EMState state = initial;
  for (int n = 0; n < steps; n++)
  {
    StepResult r = newton_step_loop(eval, state);
    state = std::move(r.state);
    if (observer)
    {
      StepInfo info;
      info.step = n + 1;
      info.state = &state;
      info.log = &r.log;
      const double bn = system.norm_e(state.b);
      info.divergence =
        bn > 0.0 ? system.norm_p(system.spaces().chain.div * state.b) / bn : 0.0;
      observer(info);
    }
  }
  return state;
}

std::vector<EnergyRecord> energy_diagnostic(const EMSystem &system,
                                            const std::vector<EMState> &states, double rm,
                                            const VelocityField &velocity)
{
  std::vector<EnergyRecord> out;
  out.reserve(states.size());
  std::optional<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> mass;
  for (const auto &s : states)
  {
    EnergyRecord r;
    r.t = s.t;
    r.magnetic = s.b.dot(system.spaces().mass_e * s.b) / (2.0 * rm);
    FieldV j = s.e;
    if (velocity)
    {
      if (!mass)
      {
        mass.emplace(Eigen::SparseMatrix<double>(system.spaces().mass_v));
      }
      j += mass->solve(system.coupling_term(velocity, s.t, s.b));
    }
    r.current = system.norm_v(j);
    out.push_back(r);
  }
  return out;
}

}  // namespace vemhd
