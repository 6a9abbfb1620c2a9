// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vemhd/app.hpp"
#include "vemhd/fluid.hpp"

namespace py = pybind11;
using namespace vemhd;

namespace
{

// Vertices and edges as dense arrays; cells stay ragged lists.
Eigen::MatrixX2d VertexArray(const PolyMesh &m)
{
  Eigen::MatrixX2d out(m.num_vertices(), 2);
  for (int i = 0; i < m.num_vertices(); i++)
  {
    out.row(i) = m.vertex(i).transpose();
  }
  return out;
}

Eigen::MatrixX2i EdgeArray(const PolyMesh &m)
{
  Eigen::MatrixX2i out(m.num_edges(), 2);
  for (int e = 0; e < m.num_edges(); e++)
  {
    out(e, 0) = m.edge(e).v0;
    out(e, 1) = m.edge(e).v1;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_vemhd, mod)
{
  mod.doc() = "Lowest-order virtual element discretization of 2D resistive MHD";

  py::register_exception<MeshError>(mod, "MeshError", PyExc_ValueError);
  py::register_exception<InfSupError>(mod, "InfSupError", PyExc_ValueError);

  py::enum_<MeshKind>(mod, "MeshKind")
    .value("Triangular", MeshKind::Triangular)
    .value("PerturbedQuads", MeshKind::PerturbedQuads)
    .value("Voronoi", MeshKind::Voronoi)
    .value("CenterRefined", MeshKind::CenterRefined);

  py::enum_<ReconstructionKind>(mod, "ReconstructionKind")
    .value("Elliptic", ReconstructionKind::Elliptic)
    .value("LeastSquares", ReconstructionKind::LeastSquares)
    .value("GalerkinInterp", ReconstructionKind::GalerkinInterp);

  py::class_<PolyMesh>(mod, "PolyMesh")
    .def_static("from_cells", &PolyMesh::FromCells, py::arg("vertices"), py::arg("cells"))
    .def_property_readonly("num_vertices", &PolyMesh::num_vertices)
    .def_property_readonly("num_edges", &PolyMesh::num_edges)
    .def_property_readonly("num_cells", &PolyMesh::num_cells)
    .def_property_readonly("vertices", &VertexArray)
    .def_property_readonly("edges", &EdgeArray)
    .def_property_readonly("cells",
                           [](const PolyMesh &m)
                           {
                             std::vector<std::vector<int>> out;
                             for (const auto &c : m.cells())
                             {
                               out.push_back(c.vertices);
                             }
                             return out;
                           })
    .def("area", [](const PolyMesh &m, int c) { return m.geometry(c).area; })
    .def("boundary_edge", &PolyMesh::boundary_edge)
    .def("boundary_vertex", &PolyMesh::boundary_vertex)
    .def("max_diameter", &PolyMesh::max_diameter)
    .def("write", [](const PolyMesh &m, const std::filesystem::path &p) { write_mesh(m, p); })
    .def_static("read", [](const std::filesystem::path &p) { return read_mesh(p); });

  mod.def(
    "make_mesh", [](MeshKind kind, int n, std::uint64_t seed) { return make_mesh(kind, n, seed); },
    py::arg("kind"), py::arg("n"), py::arg("seed") = 1);
  mod.def(
    "convergence_mesh",
    [](MeshKind kind, int level, std::uint64_t seed) { return convergence_mesh(kind, level, seed); },
    py::arg("kind"), py::arg("level"), py::arg("seed") = 1);

  mod.def(
    "build_chain",
    [](const PolyMesh &m)
    {
      ChainMaps c = build_chain(m);
      return py::make_tuple(c.rot, c.div);
    },
    py::arg("mesh"), "Sparse (rot, div) maps of the discrete de Rham chain.");
  mod.def("interp_V", &interp_V, py::arg("mesh"), py::arg("f"));
  mod.def("interp_E", &interp_E, py::arg("mesh"), py::arg("c"), py::arg("degree") = 4);

  py::class_<InfSupResult>(mod, "InfSupResult")
    .def_readonly("beta", &InfSupResult::beta)
    .def_readonly("velocity_dofs", &InfSupResult::velocity_dofs)
    .def_readonly("pressure_dofs", &InfSupResult::pressure_dofs)
    .def_readonly("stable", &InfSupResult::stable);
  mod.def("infsup_probe", &infsup_probe, py::arg("mesh"));

  py::class_<ExperimentConfig>(mod, "ExperimentConfig")
    .def(py::init<>())
    .def_readwrite("mesh_kind", &ExperimentConfig::mesh_kind)
    .def_readwrite("levels", &ExperimentConfig::levels)
    .def_readwrite("projector", &ExperimentConfig::projector)
    .def_readwrite("theta", &ExperimentConfig::theta)
    .def_readwrite("dt_c", &ExperimentConfig::dt_c)
    .def_readwrite("final_time", &ExperimentConfig::final_time)
    .def_readwrite("seed", &ExperimentConfig::seed)
    .def_readwrite("steps", &ExperimentConfig::steps);

  py::class_<ConvergenceRow>(mod, "ConvergenceRow")
    .def_readonly("level", &ConvergenceRow::level)
    .def_readonly("h", &ConvergenceRow::h)
    .def_readonly("cells", &ConvergenceRow::cells)
    .def_readonly("steps", &ConvergenceRow::steps)
    .def_readonly("err_e", &ConvergenceRow::err_e)
    .def_readonly("err_b", &ConvergenceRow::err_b)
    .def_readonly("eoc_e", &ConvergenceRow::eoc_e)
    .def_readonly("eoc_b", &ConvergenceRow::eoc_b)
    .def_readonly("div_max", &ConvergenceRow::div_max)
    .def_readonly("newton_iterations", &ConvergenceRow::newton_iterations);
  mod.def(
    "run_convergence",
    [](const ExperimentConfig &cfg)
    {
      py::gil_scoped_release release;
      return run_convergence(cfg);
    },
    py::arg("config"));

  py::class_<ReconnectionConfig>(mod, "ReconnectionConfig")
    .def(py::init<>())
    .def_readwrite("levels", &ReconnectionConfig::levels)
    .def_readwrite("base_n", &ReconnectionConfig::base_n)
    .def_readwrite("rm", &ReconnectionConfig::rm)
    .def_readwrite("dt", &ReconnectionConfig::dt)
    .def_readwrite("theta", &ReconnectionConfig::theta)
    .def_readwrite("final_time", &ReconnectionConfig::final_time)
    .def_readwrite("frames", &ReconnectionConfig::frames)
    .def_readwrite("out_dir", &ReconnectionConfig::out_dir);

  py::class_<ReconnectionReport>(mod, "ReconnectionReport")
    .def_readonly("times", &ReconnectionReport::times)
    .def_readonly("metric", &ReconnectionReport::metric)
    .def_readonly("divergence", &ReconnectionReport::divergence)
    .def_readonly("div_max", &ReconnectionReport::div_max)
    .def_readonly("cells", &ReconnectionReport::cells)
    .def_readonly("hanging_cells", &ReconnectionReport::hanging_cells)
    .def_readonly("frame_files", &ReconnectionReport::frame_files)
    .def("metric_at", &ReconnectionReport::metric_at);
  mod.def(
    "run_reconnection",
    [](const ReconnectionConfig &cfg)
    {
      py::gil_scoped_release release;
      return run_reconnection(cfg);
    },
    py::arg("config"));

  mod.def(
    "check_suite",
    [](const std::string &suite)
    {
      std::ostringstream out;
      const bool ok = run_check_suite(suite, out);
      return py::make_tuple(ok, out.str());
    },
    py::arg("suite"), "Runs a property suite; returns (all_passed, report).");
}
