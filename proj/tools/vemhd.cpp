// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vemhd/app.hpp"

namespace
{

int MeshGen(const std::string &kind, int n, std::uint64_t seed, const std::string &out)
{
  const vemhd::PolyMesh mesh = vemhd::make_mesh(vemhd::parse_mesh_kind(kind), n, seed);
  vemhd::write_mesh(mesh, out);
  const auto report = vemhd::check_regularity(mesh, 0.05);
  std::cout << "wrote " << out << ": " << mesh.num_vertices() << " vertices, " << mesh.num_edges()
            << " edges, " << mesh.num_cells() << " cells, min rho1 " << report.min_rho1
            << ", min rho2 " << report.min_rho2 << "\n";
  return 0;
}

void PrintRow(const vemhd::ConvergenceRow &r)
{
  std::cout << "level " << r.level << " h=" << r.h << " steps=" << r.steps << " err_E=" << r.err_e
            << " err_B=" << r.err_b;
  if (!std::isnan(r.eoc_e))
  {
    std::cout << " eoc_E=" << r.eoc_e << " eoc_B=" << r.eoc_b;
  }
  std::cout << " div_max=" << r.div_max << " (" << r.seconds << " s)\n";
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"vemhd: divergence-free virtual element solver for 2D resistive MHD"};
  app.require_subcommand(1);

  auto *mesh = app.add_subcommand("mesh", "Mesh utilities");
  mesh->require_subcommand(1);
  auto *gen = mesh->add_subcommand("gen", "Generate a mesh of [-1,1]^2");
  std::string kind = "tri", mesh_out;
  int n = 8;
  std::uint64_t seed = 1;
  gen->add_option("--kind", kind, "tri|pquad|voronoi|refined")->required();
  gen->add_option("--n", n, "Subdivisions, seeds or refinement depth")->required();
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", mesh_out, "Output mesh file")->required();

  auto *conv = app.add_subcommand("convergence", "Manufactured-solution convergence study");
  vemhd::ExperimentConfig ec;
  std::string conv_kind = "tri", projector = "elliptic", conv_out;
  conv->add_option("--mesh-kind", conv_kind, "tri|pquad|voronoi|refined");
  conv->add_option("--levels", ec.levels, "Number of refinement levels");
  conv->add_option("--projector", projector, "elliptic|ls|galerkin");
  conv->add_option("--theta", ec.theta, "Time-stepping parameter");
  conv->add_option("--dt-c", ec.dt_c, "Time step constant, dt = c h^2");
  conv->add_option("--T", ec.final_time, "Final time");
  conv->add_option("--seed", ec.seed, "Mesh seed");
  conv->add_option("--out", conv_out, "Output CSV")->required();

  auto *rec = app.add_subcommand("reconnect", "Harris-sheet reconnection run");
  vemhd::ReconnectionConfig rc;
  std::string rec_out;
  rec->add_option("--levels", rc.levels, "Center refinement depth");
  rec->add_option("--rm", rc.rm, "Magnetic Reynolds number");
  rec->add_option("--dt", rc.dt, "Time step");
  rec->add_option("--T", rc.final_time, "Final time");
  rec->add_option("--frames", rc.frames, "Frame times")->delimiter(',');
  rec->add_option("--out", rec_out, "Output directory")->required();

  auto *check = app.add_subcommand("check", "Run a property suite");
  std::string suite;
  check->add_option("--suite", suite, "derham|products|infsup|energy|newton")->required();

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (gen->parsed())
    {
      return MeshGen(kind, n, seed, mesh_out);
    }
    if (conv->parsed())
    {
      ec.mesh_kind = vemhd::parse_mesh_kind(conv_kind);
      ec.projector = vemhd::parse_reconstruction(projector);
      std::vector<std::vector<double>> rows;
      try
      {
        vemhd::run_convergence(ec,
                               [&](const vemhd::ConvergenceRow &r)
                               {
                                 PrintRow(r);
                                 rows.push_back(vemhd::convergence_values(r));
                               });
      }
      catch (...)
      {
        vemhd::export_csv(vemhd::convergence_header(), rows, conv_out);
        throw;
      }
      vemhd::export_csv(vemhd::convergence_header(), rows, conv_out);
      return 0;
    }
    if (rec->parsed())
    {
      rc.out_dir = rec_out;
      const auto report = vemhd::run_reconnection(rc);
      std::cout << "cells " << report.cells << " (" << report.hanging_cells
                << " with hanging nodes), div_max " << report.div_max << "\n";
      for (double t : {0.022, rc.final_time})
      {
        std::cout << "steady-state metric at t=" << t << ": " << report.metric_at(t) << "\n";
      }
      return 0;
    }
    if (check->parsed())
    {
      return vemhd::run_check_suite(suite, std::cout) ? 0 : 1;
    }
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
