// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "vemhd/mesh.hpp"

namespace vemhd
{

void write_mesh(const PolyMesh &mesh, std::ostream &out)
{
  out << std::setprecision(17);
  out << "VERTICES " << mesh.num_vertices() << "\n";
  for (const auto &p : mesh.vertices())
  {
    out << p.x() << " " << p.y() << "\n";
  }
  out << "EDGES " << mesh.num_edges() << "\n";
  for (const auto &e : mesh.edges())
  {
    out << e.v0 << " " << e.v1 << " " << (e.boundary ? 1 : 0) << "\n";
  }
  out << "CELLS " << mesh.num_cells() << "\n";
  for (const auto &c : mesh.cells())
  {
    out << c.size();
    for (int v : c.vertices)
    {
      out << " " << v;
    }
    out << "\n";
  }
}

void write_mesh(const PolyMesh &mesh, const std::filesystem::path &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  write_mesh(mesh, out);
}

namespace
{

class LineReader
{
public:
  explicit LineReader(std::istream &in) : in_(in) {}

  // Next non-blank line with comments stripped; false at end of input.
  bool Next(std::istringstream &line)
  {
    std::string text;
    while (std::getline(in_, text))
    {
      line_no_++;
      const auto hash = text.find('#');
      if (hash != std::string::npos)
      {
        text.erase(hash);
      }
      if (text.find_first_not_of(" \t\r") == std::string::npos)
      {
        continue;
      }
      line.clear();
      line.str(text);
      return true;
    }
    return false;
  }

  std::istringstream Require(const std::string &what)
  {
    std::istringstream line;
    if (!Next(line))
    {
      throw ParseError(line_no_ + 1, "unexpected end of file, expected " + what);
    }
    return line;
  }

  int line() const { return line_no_; }

private:
  std::istream &in_;
  int line_no_ = 0;
};

int ReadHeader(LineReader &reader, const std::string &name)
{
  auto line = reader.Require("section " + name);
  std::string tag;
  long long count = -1;
  line >> tag;
  for (auto &ch : tag)
  {
    ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  if (tag != name)
  {
    throw ParseError(reader.line(), "expected section " + name + ", found '" + tag + "'");
  }
  if (!(line >> count) || count < 0)
  {
    throw ParseError(reader.line(), "section " + name + " needs a non-negative count");
  }
  return static_cast<int>(count);
}

void ExpectEnd(std::istringstream &line, LineReader &reader)
{
  std::string rest;
  if (line >> rest)
  {
    throw ParseError(reader.line(), "trailing text '" + rest + "'");
  }
}

}  // namespace

PolyMesh read_mesh(std::istream &in)
{
  LineReader reader(in);
  const int nv = ReadHeader(reader, "VERTICES");
  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; i++)
  {
    auto line = reader.Require("vertex coordinates");
    double x, y;
    if (!(line >> x >> y))
    {
      throw ParseError(reader.line(), "expected two coordinates");
    }
    ExpectEnd(line, reader);
    vertices[i] = Vec2(x, y);
  }
  const int ne = ReadHeader(reader, "EDGES");
  std::vector<Edge> edges(ne);
  for (int i = 0; i < ne; i++)
  {
    auto line = reader.Require("edge record");
    int flag;
    if (!(line >> edges[i].v0 >> edges[i].v1 >> flag) || (flag != 0 && flag != 1))
    {
      throw ParseError(reader.line(), "expected 'v0 v1 boundary_flag'");
    }
    ExpectEnd(line, reader);
    if (edges[i].v0 < 0 || edges[i].v0 >= nv || edges[i].v1 < 0 || edges[i].v1 >= nv)
    {
      throw ParseError(reader.line(), "edge references a vertex out of range");
    }
    edges[i].boundary = (flag == 1);
  }
  const int nc = ReadHeader(reader, "CELLS");
  std::vector<std::vector<int>> loops(nc);
  for (int i = 0; i < nc; i++)
  {
    auto line = reader.Require("cell record");
    int k;
    if (!(line >> k) || k < 3)
    {
      throw ParseError(reader.line(), "expected a vertex count of at least 3");
    }
    loops[i].resize(k);
    for (int j = 0; j < k; j++)
    {
      if (!(line >> loops[i][j]))
      {
        throw ParseError(reader.line(), "cell has fewer indices than its count");
      }
      if (loops[i][j] < 0 || loops[i][j] >= nv)
      {
        throw ParseError(reader.line(), "cell references a vertex out of range");
      }
    }
    ExpectEnd(line, reader);
  }
  std::istringstream extra;
  if (reader.Next(extra))
  {
    throw ParseError(reader.line(), "unexpected content after CELLS section");
  }
  return PolyMesh::FromParts(std::move(vertices), std::move(edges), std::move(loops));
}

PolyMesh read_mesh(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open " + path.string());
  }
  return read_mesh(in);
}

}  // namespace vemhd
