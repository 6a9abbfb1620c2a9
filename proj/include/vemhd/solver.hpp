// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef VEMHD_SOLVER_HPP
#define VEMHD_SOLVER_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include "vemhd/products.hpp"

namespace vemhd
{

// Nonlinear or linear solve failure; history holds the residual norms seen so far.
class SolverError : public std::runtime_error
{
public:
  SolverError(const std::string &what, std::vector<double> history)
    : std::runtime_error(what), history_(std::move(history))
  {
  }
  const std::vector<double> &history() const { return history_; }

private:
  std::vector<double> history_;
};

struct NewtonParams
{
  double fd_epsilon = 1e-7;
  double rtol = 1e-4;
  double atol = -1.0;  // negative: sqrt(#unknowns) * 1e-15
  double alpha = 1.5;
  double gamma = 0.9;
  double eta_max = 0.8;
  double eta0 = 0.8;
  int max_iterations = 25;
  // Positive: constant forcing term instead of the adaptive schedule.
  double fixed_forcing = -1.0;
};

struct GmresParams
{
  int max_iterations = 2000;
  int stagnation_window = 50;
};

struct SolverConfig
{
  double theta = 0.5;
  double dt = 1e-3;
  double final_time = 0.25;
  double rm = 1.0;
  NewtonParams newton;
  GmresParams gmres;
  // Keep B = B^n - dt R E on every Newton iterate; GMRES then solves for the interior E
  // correction only.
  bool exact_faraday_update = true;
  // Adds theta/R_m <div B, div C>_P to the Faraday rows.
  bool augmented = false;

  void Validate() const;
};

// B^n on edges, E on all vertices (last fractional value, boundary entries included).
struct EMState
{
  FieldE b;
  FieldV e;
  double t = 0.0;
};

using VelocityField = std::function<Vec2(const Vec2 &, double)>;
using BoundaryField = std::function<double(const Vec2 &, double)>;

// Time-independent discrete operators of the electromagnetic subsystem on one mesh.
class EMSystem
{
public:
  EMSystem(const PolyMesh &mesh, ReconstructionKind kind);

  const PolyMesh &mesh() const { return *mesh_; }
  const DiscreteSpaces &spaces() const { return spaces_; }
  const std::vector<int> &interior_vertices() const { return interior_; }
  const std::vector<int> &boundary_vertices() const { return boundary_; }
  int num_unknowns() const { return mesh_->num_edges() + static_cast<int>(interior_.size()); }

  // K with K B = sum_P G_V^P (u x Pi_RT B at the vertices of P): vertices x edges.
  SparseMatrix coupling_matrix(const VelocityField &u, double t) const;
  // <I_V(u x Pi_RT B), D>_V for every vertex basis function D.
  FieldV coupling_term(const VelocityField &u, double t, const FieldE &b) const;

  // Pi_RT B at each vertex of each cell, flattened in cell loop order.
  std::vector<Vec2> rt_vertex_values(const FieldE &b) const;
  // Pi_RT B at each cell centroid.
  std::vector<Vec2> rt_centroid_values(const FieldE &b) const;

  // Norms of the discrete spaces.
  double norm_e(const FieldE &b) const;
  double norm_v(const FieldV &e) const;
  double norm_p(const FieldP &q) const;

private:
  const PolyMesh *mesh_;
  DiscreteSpaces spaces_;
  std::vector<int> interior_;
  std::vector<int> boundary_;
  // Per cell: Pi_RT B at the cell vertices, x and y components (N x N each).
  std::vector<Eigen::MatrixXd> eval_x_;
  std::vector<Eigen::MatrixXd> eval_y_;
};

// Boundary and velocity data of one problem.
struct EMProblem
{
  VelocityField velocity;
  bool steady_velocity = false;
  BoundaryField boundary_e;
};

// Residual G of one theta-step for unknowns x = [B^{n+1}; E^{n+theta} at interior vertices].
class ResidualEvaluator
{
public:
  ResidualEvaluator(const EMSystem &system, SolverConfig config, EMProblem problem);

  // Fixes B^n, the boundary E values at t^{n+theta} and the coupling at t^{n+theta}.
  void SetPrevious(const EMState &previous);

  int size() const { return system_->num_unknowns(); }
  const EMSystem &system() const { return *system_; }
  const SolverConfig &config() const { return config_; }
  const EMState &previous() const { return previous_; }
  double faraday_scale() const;
  double stage_time() const { return previous_.t + config_.theta * config_.dt; }

  Eigen::VectorXd Residual(const Eigen::VectorXd &x) const;

  Eigen::VectorXd Pack(const FieldE &b, const FieldV &e_full) const;
  FieldE UnpackB(const Eigen::VectorXd &x) const;
  // Full vertex field with the boundary values of the current stage.
  FieldV UnpackE(const Eigen::VectorXd &x) const;
  // Replaces the B block by B^n - dt R E(x).
  void ApplyFaradayUpdate(Eigen::VectorXd &x) const;
  const SparseMatrix &coupling() const { return coupling_; }

private:
  const EMSystem *system_;
  SolverConfig config_;
  EMProblem problem_;
  EMState previous_;
  FieldV boundary_values_;
  SparseMatrix coupling_;
  bool coupling_ready_ = false;
};

// (G(x + eps dx) - G(x)) / eps.
Eigen::VectorXd jacobian_action(const ResidualEvaluator &eval, const Eigen::VectorXd &x,
                                const Eigen::VectorXd &gx, const Eigen::VectorXd &dx,
                                double eps);

struct GmresResult
{
  Eigen::VectorXd x;
  std::vector<double> history;  // residual norm estimates, starting with ||b||
  int iterations = 0;
  bool converged = false;
};

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;

// Full GMRES from a zero initial guess with modified Gram-Schmidt plus one
// reorthogonalization pass. Stops when ||b - A x|| <= tol ||b||. Throws SolverError if the
// residual fails to decrease over `stagnation_window` consecutive iterations.
GmresResult gmres_solve(const LinearMap &a, const Eigen::VectorXd &b, double tol,
                        const GmresParams &params = {});

// Eisenstat-Walker forcing term for iteration m >= 1.
double forcing_term(const NewtonParams &p, double g_m, double g_prev, double eta_prev,
                    double eps_t);

struct NewtonLog
{
  std::vector<double> residual_norms;  // ||G(x^(m))||, m = 0..iterations
  std::vector<double> forcing;         // eta_m used for the m-th linear solve
  std::vector<int> gmres_iterations;
  double tolerance = 0.0;              // eps_t
  int iterations = 0;
  // max over Newton updates of ||div dB - div(B^n - B)||_P / ||B^n||_E.
  double divergence_identity = 0.0;
};

struct StepResult
{
  EMState state;
  NewtonLog log;
};

// One time step by inexact Newton. Initial guess: B^n and the previous fractional E.
StepResult newton_step_loop(ResidualEvaluator &eval, const EMState &previous);

// max |div dB - div(B^n - B)| over cells.
double divergence_of_step(const SparseMatrix &div, const FieldE &b, const FieldE &db,
                          const FieldE &b_prev);

struct StepInfo
{
  int step = 0;
  const EMState *state = nullptr;
  const NewtonLog *log = nullptr;
  double divergence = 0.0;  // ||div B||_P / ||B||_E (0 when B = 0)
};

// Advances from `initial` for `steps` steps (or to config.final_time when steps < 0);
// observer runs after each step. Returns the final state.
EMState integrate(const EMSystem &system, const SolverConfig &config, const EMProblem &problem,
                  const EMState &initial, int steps,
                  const std::function<void(const StepInfo &)> &observer = {});

struct EnergyRecord
{
  double t = 0.0;
  double magnetic = 0.0;  // <B,B>_E / (2 R_m)
  double current = 0.0;   // ||E + I_V(u x Pi_RT B)||_V, with the projection onto V_h
};

std::vector<EnergyRecord> energy_diagnostic(const EMSystem &system,
                                            const std::vector<EMState> &states, double rm,
                                            const VelocityField &velocity = {});

}  // namespace vemhd

#endif  // VEMHD_SOLVER_HPP
