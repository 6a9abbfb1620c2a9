// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef VEMHD_APP_HPP
#define VEMHD_APP_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vemhd/solver.hpp"

namespace vemhd
{

enum class MeshKind
{
  Triangular,
  PerturbedQuads,
  Voronoi,
  CenterRefined
};

// Accepts "tri", "pquad", "voronoi", "refined".
MeshKind parse_mesh_kind(std::string_view name);
std::string to_string(MeshKind kind);

struct MeshParams
{
  double quad_amplitude = 0.2;
  int lloyd_iterations = 100;
  double refine_radius = 0.5;
  int refine_base = 8;
};

// n is the subdivision count (tri, pquad), the seed count (voronoi) or the refinement depth
// (refined).
PolyMesh make_mesh(MeshKind kind, int n, std::uint64_t seed, const MeshParams &params = {});

// Mesh of refinement level k >= 0 in a convergence study, and its nominal size h.
// tri/pquad: n = 4 * 2^k, h = 2/n. voronoi: 16 * 4^k seeds, h = 2/sqrt(seeds).
// refined: base grid 4 * 2^k with two center refinements, h = 2/base.
PolyMesh convergence_mesh(MeshKind kind, int level, std::uint64_t seed,
                          const MeshParams &params = {});
double convergence_h(MeshKind kind, int level);

// Closed-form fields of the convergence experiment with R_m = 1; rot E = B, dB/dt = -B and
// E + u x B - rot B = 0.
struct ManufacturedSolution
{
  static Vec2 b(const Vec2 &x, double t);
  static double e(const Vec2 &x, double t);
  static Vec2 u(const Vec2 &x);
  static double rot_b(const Vec2 &x, double t);
  // Max over random points of the pointwise Faraday and Ohm residuals, both computed with
  // centered finite differences of the closed forms.
  static double self_test(int points, std::uint64_t seed);
};

struct ExperimentConfig
{
  MeshKind mesh_kind = MeshKind::Triangular;
  int levels = 4;
  ReconstructionKind projector = ReconstructionKind::Elliptic;
  double theta = 0.5;
  double dt_c = 0.05;
  double final_time = 0.25;
  std::uint64_t seed = 1;
  MeshParams mesh;
  NewtonParams newton;
  // Negative: as many steps as needed to reach final_time.
  int steps = -1;
};

struct ConvergenceRow
{
  int level = 0;
  double h = 0.0;
  int cells = 0;
  int unknowns = 0;
  int steps = 0;
  double dt = 0.0;
  // Relative L2 errors of the cellwise reconstructions (P1 for E, RT0 for B) against the
  // exact fields.
  double err_e = 0.0;
  double err_b = 0.0;
  // Relative errors of the DOF vectors against the interpolants, in the discrete norms.
  double err_e_dof = 0.0;
  double err_b_dof = 0.0;
  double eoc_e = 0.0;  // NaN on the first level
  double eoc_b = 0.0;
  double div_max = 0.0;
  double newton_div_identity = 0.0;
  long newton_iterations = 0;
  long gmres_iterations = 0;
  double seconds = 0.0;
};

// One level of the manufactured-solution study on a given mesh.
ConvergenceRow run_manufactured(const PolyMesh &mesh, double h, const ExperimentConfig &config);

// All levels; rows are reported through on_row as they finish. A solver failure rethrows after
// the completed rows were reported.
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig &config,
                                            const std::function<void(const ConvergenceRow &)> &on_row = {});

std::vector<std::string> convergence_header();
std::vector<double> convergence_values(const ConvergenceRow &row);

struct ReconnectionConfig
{
  int levels = 3;
  double refine_radius = 0.5;
  int base_n = 8;
  double rm = 0.5;
  double dt = 1e-3;
  double theta = 0.5;
  double final_time = 0.45;
  double boundary_e = 0.0;
  std::vector<double> frames = {0.0, 0.021, 0.022, 0.410, 0.450};
  std::filesystem::path out_dir;  // empty: no files
  NewtonParams newton;
  ReconstructionKind projector = ReconstructionKind::Elliptic;
};

struct ReconnectionReport
{
  std::vector<double> times;       // t^{n+1}
  std::vector<double> metric;      // ||B^{n+1} - B^n||_E / (dt ||B^n||_E)
  std::vector<double> divergence;  // ||div B^{n+1}||_P / ||B^{n+1}||_E
  double div_max = 0.0;            // includes the initial state
  int cells = 0;
  int hanging_cells = 0;           // cells with more than four vertices
  std::vector<std::filesystem::path> frame_files;

  // Metric of the step whose end time is closest to t.
  double metric_at(double t) const;
};

ReconnectionReport run_reconnection(const ReconnectionConfig &config);

// Legacy ASCII VTK polydata: cell vectors "B", point scalars "E".
void export_vtk(const PolyMesh &mesh, const std::vector<Vec2> &cell_b, const FieldV &e,
                const std::filesystem::path &path, const std::string &title = "vemhd");
void export_vtk(const PolyMesh &mesh, const std::vector<Vec2> &cell_b, const FieldV &e,
                std::ostream &out, const std::string &title = "vemhd");
// Header row and comma-separated values with 12 significant digits.
void export_csv(const std::vector<std::string> &header, const std::vector<std::vector<double>> &rows,
                const std::filesystem::path &path);
void export_csv(const std::vector<std::string> &header, const std::vector<std::vector<double>> &rows,
                std::ostream &out);

// Property suites behind `vemhd check`: derham, products, infsup, energy, newton. Writes one
// line per property and returns true when all pass.
bool run_check_suite(std::string_view suite, std::ostream &out);

}  // namespace vemhd

#endif  // VEMHD_APP_HPP
