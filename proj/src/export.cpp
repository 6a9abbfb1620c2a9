// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iomanip>

#include "vemhd/app.hpp"

namespace vemhd
{

void export_vtk(const PolyMesh &mesh, const std::vector<Vec2> &cell_b, const FieldV &e,
                std::ostream &out, const std::string &title)
{
  if (static_cast<int>(cell_b.size()) != mesh.num_cells() || e.size() != mesh.num_vertices())
  {
    throw std::invalid_argument("export_vtk: field sizes do not match the mesh");
  }
  out << std::setprecision(12);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto &p : mesh.vertices())
  {
    out << p.x() << " " << p.y() << " 0\n";
  }
  long size = 0;
  for (const auto &c : mesh.cells())
  {
    size += c.size() + 1;
  }
  out << "POLYGONS " << mesh.num_cells() << " " << size << "\n";
  for (const auto &c : mesh.cells())
  {
    out << c.size();
    for (int v : c.vertices)
    {
      out << " " << v;
    }
    out << "\n";
  }
  out << "CELL_DATA " << mesh.num_cells() << "\nVECTORS B double\n";
  for (const auto &b : cell_b)
  {
    out << b.x() << " " << b.y() << " 0\n";
  }
  out << "POINT_DATA " << mesh.num_vertices() << "\nSCALARS E double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index i = 0; i < e.size(); i++)
  {
    out << e[i] << "\n";
  }
}

void export_vtk(const PolyMesh &mesh, const std::vector<Vec2> &cell_b, const FieldV &e,
                const std::filesystem::path &path, const std::string &title)
{
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  export_vtk(mesh, cell_b, e, out, title);
}

void export_csv(const std::vector<std::string> &header, const std::vector<std::vector<double>> &rows,
                std::ostream &out)
{
  for (std::size_t i = 0; i < header.size(); i++)
  {
    out << (i ? "," : "") << header[i];
  }
  out << "\n" << std::setprecision(12);
  for (const auto &row : rows)
  {
    if (row.size() != header.size())
    {
      throw std::invalid_argument("export_csv: row width does not match the header");
    }
    for (std::size_t i = 0; i < row.size(); i++)
    {
      out << (i ? "," : "") << row[i];
    }
    out << "\n";
  }
}

void export_csv(const std::vector<std::string> &header, const std::vector<std::vector<double>> &rows,
                const std::filesystem::path &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  export_csv(header, rows, out);
}

}  // namespace vemhd
