// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <ostream>

#include <Eigen/SparseCholesky>

#include "vemhd/app.hpp"
#include "vemhd/fluid.hpp"

namespace vemhd
{

namespace
{

class Reporter
{
public:
  explicit Reporter(std::ostream &out) : out_(out) {}

  void Check(const std::string &name, bool ok, double value, double bound)
  {
    out_ << (ok ? "PASS " : "FAIL ") << name << " value=" << value << " bound=" << bound << "\n";
    all_ = all_ && ok;
  }

  bool all() const { return all_; }

private:
  std::ostream &out_;
  bool all_ = true;
};

std::vector<std::pair<std::string, PolyMesh>> SampleMeshes()
{
  std::vector<std::pair<std::string, PolyMesh>> m;
  m.emplace_back("tri4", gen_triangular(4));
  m.emplace_back("pquad4", gen_perturbed_quads(4, 0.2, 3));
  m.emplace_back("voronoi30", gen_voronoi(30, 20, 5));
  m.emplace_back("refined2", gen_center_refined(2, 0.5, 4));
  return m;
}

bool SuiteDerham(Reporter &r)
{
  for (const auto &[name, mesh] : SampleMeshes())
  {
    const ChainMaps chain = build_chain(mesh);
    const SparseMatrix dr = chain.div * chain.rot;
    double worst = 0.0;
    for (int k = 0; k < dr.outerSize(); k++)
    {
      for (SparseMatrix::InnerIterator it(dr, k); it; ++it)
      {
        worst = std::max(worst, std::abs(it.value()));
      }
    }
    r.Check(name + " div*rot", worst <= 1e-14, worst, 1e-14);
    const double cr = commuting_check_rot(
      mesh, [](const Vec2 &x) { return x.x() * x.x() * x.y() - 2.0 * x.y() * x.y(); },
      [](const Vec2 &x) { return Vec2(2.0 * x.x() * x.y(), x.x() * x.x() - 4.0 * x.y()); }, 4);
    r.Check(name + " commuting rot (cubic)", cr <= 1e-12, cr, 1e-12);
    const double cd = commuting_check_div(
      mesh, [](const Vec2 &x) { return Vec2(x.x() * x.x() * x.y(), x.y() * x.y() - x.x()); },
      [](const Vec2 &x) { return 2.0 * x.x() * x.y() + 2.0 * x.y(); }, 4, 4);
    r.Check(name + " commuting div (cubic)", cd <= 1e-12, cd, 1e-12);
  }
  return r.all();
}

bool SuiteProducts(Reporter &r)
{
  for (const auto &[name, mesh] : SampleMeshes())
  {
    for (auto kind : {ReconstructionKind::Elliptic, ReconstructionKind::LeastSquares,
                      ReconstructionKind::GalerkinInterp})
    {
      const DiscreteSpaces s = build_spaces(mesh, kind);
      // Linear consistency on every cell: <I p, I q>_V = int p q for p, q in P1.
      const std::vector<ScalarFunction> lin = {[](const Vec2 &) { return 1.0; },
                                               [](const Vec2 &x) { return x.x() - 0.3; },
                                               [](const Vec2 &x) { return 0.5 * x.y() + x.x(); }};
      double worst = 0.0;
      for (int c = 0; c < mesh.num_cells(); c++)
      {
        const auto rule = cell_rule(mesh, c, 4);
        const auto &cell = mesh.cell(c);
        const Eigen::MatrixXd m = s.local_v[c].matrix();
        for (const auto &p : lin)
        {
          for (const auto &q : lin)
          {
            Eigen::VectorXd vp(cell.size()), vq(cell.size());
            for (int i = 0; i < cell.size(); i++)
            {
              vp[i] = p(mesh.vertex(cell.vertices[i]));
              vq[i] = q(mesh.vertex(cell.vertices[i]));
            }
            double exact = 0.0;
            for (std::size_t k = 0; k < rule.size(); k++)
            {
              exact += rule.weights[k] * p(rule.points[k]) * q(rule.points[k]);
            }
            const double scale = std::max(std::abs(exact), mesh.geometry(c).area);
            worst = std::max(worst, std::abs(vp.dot(m * vq) - exact) / scale);
          }
        }
      }
      const std::string tag = name + " " + to_string(kind);
      r.Check(tag + " V consistency", worst <= 1e-12, worst, 1e-12);
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_v(Eigen::SparseMatrix<double>(s.mass_v));
      r.Check(tag + " V gram SPD", llt_v.info() == Eigen::Success, 0.0, 0.0);
    }
    const DiscreteSpaces s = build_spaces(mesh, ReconstructionKind::Elliptic);
    const FieldE a = interp_E(mesh, [](const Vec2 &) { return Vec2(1.0, -2.0); });
    const FieldE b = interp_E(mesh, [](const Vec2 &) { return Vec2(0.5, 3.0); });
    double worst = 0.0;
    for (int c = 0; c < mesh.num_cells(); c++)
    {
      const auto &cell = mesh.cell(c);
      Eigen::VectorXd la(cell.size()), lb(cell.size());
      for (int i = 0; i < cell.size(); i++)
      {
        la[i] = a[cell.edges[i]];
        lb[i] = b[cell.edges[i]];
      }
      const double area = mesh.geometry(c).area;
      const double exact = area * (0.5 - 6.0);
      worst = std::max(worst, std::abs(la.dot(s.local_e[c].matrix() * lb) - exact) / std::abs(exact));
    }
    r.Check(name + " E P0 consistency", worst <= 1e-12, worst, 1e-12);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_e(Eigen::SparseMatrix<double>(s.mass_e));
    r.Check(name + " E gram SPD", llt_e.info() == Eigen::Success, 0.0, 0.0);
  }
  return r.all();
}

bool SuiteInfSup(Reporter &r, std::ostream &out)
{
  out << "n,beta,velocity_dofs,pressure_dofs\n";
  std::vector<double> betas;
  for (int n : {2, 4, 8})
  {
    const InfSupResult res = infsup_probe(gen_triangular(n));
    out << n << "," << res.beta << "," << res.velocity_dofs << "," << res.pressure_dofs << "\n";
    betas.push_back(res.beta);
  }
  const auto [lo, hi] = std::minmax_element(betas.begin(), betas.end());
  r.Check("infsup beta > 0", *lo > 1e-10, *lo, 1e-10);
  r.Check("infsup variation < 2x", *hi / *lo < 2.0, *hi / *lo, 2.0);
  return r.all();
}

bool SuiteEnergy(Reporter &r)
{
  const PolyMesh mesh = gen_perturbed_quads(6, 0.2, 2);
  const EMSystem system(mesh, ReconstructionKind::Elliptic);
  SolverConfig cfg;
  cfg.theta = 0.5;
  cfg.dt = 1e-2;
  cfg.newton.rtol = 1e-10;
  EMProblem problem;
  problem.boundary_e = [](const Vec2 &, double) { return 0.0; };
  EMState s;
  s.b = system.spaces().chain.rot *
        interp_V(mesh, [](const Vec2 &x) { return std::sin(2.0 * x.x()) * std::cos(x.y()) + x.x() * x.y(); });
  s.e = FieldV::Zero(mesh.num_vertices());
  double prev = s.b.dot(system.spaces().mass_e * s.b);
  double worst = 0.0;
  integrate(system, cfg, problem, s, 20,
            [&](const StepInfo &info)
            {
              const double now = info.state->b.dot(system.spaces().mass_e * info.state->b);
              worst = std::max(worst, now - prev);
              prev = now;
            });
  r.Check("energy non-increasing (20 steps)", worst <= 1e-13, worst, 1e-13);
  return r.all();
}

bool SuiteNewton(Reporter &r)
{
  const PolyMesh mesh = gen_triangular(4);
  const EMSystem system(mesh, ReconstructionKind::Elliptic);
  SolverConfig cfg;
  cfg.dt = 0.05 * 0.25;
  cfg.newton.rtol = 1e-8;
  EMProblem problem;
  problem.velocity = [](const Vec2 &x, double) { return ManufacturedSolution::u(x); };
  problem.steady_velocity = true;
  problem.boundary_e = [](const Vec2 &x, double t) { return ManufacturedSolution::e(x, t); };
  EMState s;
  s.b = system.spaces().chain.rot *
        interp_V(mesh, [](const Vec2 &x) { return ManufacturedSolution::e(x, 0.0); });
  s.e = FieldV::Zero(mesh.num_vertices());
  ResidualEvaluator eval(system, cfg, problem);
  const StepResult step = newton_step_loop(eval, s);
  const auto &log = step.log;
  double schedule = 0.0;
  for (std::size_t m = 1; m < log.forcing.size(); m++)
  {
    const double expect = forcing_term(cfg.newton, log.residual_norms[m], log.residual_norms[m - 1],
                                       log.forcing[m - 1], log.tolerance);
    schedule = std::max(schedule, std::abs(expect - log.forcing[m]));
  }
  r.Check("forcing schedule reproduces log", schedule == 0.0, schedule, 0.0);
  r.Check("divergence identity", log.divergence_identity <= 1e-12, log.divergence_identity, 1e-12);
  r.Check("newton converged", log.residual_norms.back() < log.tolerance, log.residual_norms.back(),
          log.tolerance);

  // GMRES against a dense LU solve on a small nonsymmetric system.
  const int n = 120;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) * 4.0;
  for (int i = 0; i < n; i++)
  {
    for (int j = 0; j < n; j++)
    {
      a(i, j) += std::sin(1.0 + i * 0.37 + j * j * 0.11) / std::sqrt(static_cast<double>(n));
    }
  }
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; i++)
  {
    rhs[i] = std::cos(0.3 * i);
  }
  const auto lin = gmres_solve([&](const Eigen::VectorXd &v) { return Eigen::VectorXd(a * v); },
                               rhs, 1e-13);
  const Eigen::VectorXd direct = a.partialPivLu().solve(rhs);
  const double diff = (lin.x - direct).norm() / direct.norm();
  r.Check("gmres vs dense", diff <= 1e-8, diff, 1e-8);
  return r.all();
}

}  // namespace

bool run_check_suite(std::string_view suite, std::ostream &out)
{
  Reporter r(out);
  if (suite == "derham")
  {
    return SuiteDerham(r);
  }
  if (suite == "products")
  {
    return SuiteProducts(r);
  }
  if (suite == "infsup")
  {
    return SuiteInfSup(r, out);
  }
  if (suite == "energy")
  {
    return SuiteEnergy(r);
  }
  if (suite == "newton")
  {
    return SuiteNewton(r);
  }
  throw std::invalid_argument("unknown check suite '" + std::string(suite) +
                              "' (expected derham, products, infsup, energy or newton)");
}

}  // namespace vemhd
