// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "vemhd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace vemhd
{

namespace
{

// Signed distance from p to the line through a->b, positive on the left (inside a CCW loop).
double LeftDistance(const Vec2 &a, const Vec2 &b, const Vec2 &p)
{
  const Vec2 d = b - a;
  const double len = d.norm();
  return (d.x() * (p.y() - a.y()) - d.y() * (p.x() - a.x())) / len;
}

// Minimum distance from p to every edge line, signed so that positive means p sees every
// edge from the inside.
double KernelDepth(std::span<const Vec2> polygon, const Vec2 &p)
{
  const std::size_t n = polygon.size();
  double depth = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < n; i++)
  {
    const Vec2 &a = polygon[i];
    const Vec2 &b = polygon[(i + 1) % n];
    if ((b - a).norm() == 0.0)
    {
      continue;
    }
    depth = std::min(depth, LeftDistance(a, b, p));
  }
  return depth;
}

std::vector<Vec2> KernelCandidates(std::span<const Vec2> polygon, const Vec2 &centroid)
{
  std::vector<Vec2> candidates;
  candidates.reserve(66);
  candidates.push_back(centroid);
  Vec2 mean = Vec2::Zero();
  Vec2 lo = polygon[0], hi = polygon[0];
  for (const auto &p : polygon)
  {
    mean += p;
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  candidates.push_back(mean / static_cast<double>(polygon.size()));
  constexpr int m = 8;
  for (int j = 0; j < m; j++)
  {
    for (int i = 0; i < m; i++)
    {
      candidates.emplace_back(lo.x() + (i + 0.5) / m * (hi.x() - lo.x()),
                              lo.y() + (j + 0.5) / m * (hi.y() - lo.y()));
    }
  }
  return candidates;
}

}  // namespace

CellGeometry compute_polygon_geometry(std::span<const Vec2> polygon, int cell_id)
{
  const int n = static_cast<int>(polygon.size());
  auto name = [&]() { return cell_id >= 0 ? "cell " + std::to_string(cell_id) : "polygon"; };
  if (n < 3)
  {
    throw MeshError(name() + " has fewer than 3 vertices");
  }
  CellGeometry g;
  // Shoelace formulas relative to the first vertex to limit cancellation.
  const Vec2 o = polygon[0];
  double a2 = 0.0;
  Vec2 c = Vec2::Zero();
  for (int i = 0; i < n; i++)
  {
    const Vec2 p = polygon[i] - o;
    const Vec2 q = polygon[(i + 1) % n] - o;
    const double cr = p.x() * q.y() - q.x() * p.y();
    a2 += cr;
    c += cr * (p + q);
  }
  g.area = 0.5 * a2;
  if (!(g.area > 0.0))
  {
    throw MeshError(name() + " has non-positive signed area " + std::to_string(g.area));
  }
  g.centroid = o + c / (3.0 * a2);
  for (int i = 0; i < n; i++)
  {
    for (int j = i + 1; j < n; j++)
    {
      g.diameter = std::max(g.diameter, (polygon[i] - polygon[j]).norm());
    }
  }
  g.edge_length.resize(n);
  g.edge_midpoint.resize(n);
  g.edge_normal.resize(n);
  g.edge_tangent.resize(n);
  for (int i = 0; i < n; i++)
  {
    const Vec2 &a = polygon[i];
    const Vec2 &b = polygon[(i + 1) % n];
    const double len = (b - a).norm();
    if (len == 0.0)
    {
      throw MeshError(name() + " has a zero-length edge");
    }
    g.edge_length[i] = len;
    g.edge_midpoint[i] = 0.5 * (a + b);
    g.edge_tangent[i] = (b - a) / len;
    g.edge_normal[i] = Vec2(g.edge_tangent[i].y(), -g.edge_tangent[i].x());
  }
  double best = 0.0;
  for (const auto &p : KernelCandidates(polygon, g.centroid))
  {
    best = std::max(best, KernelDepth(polygon, p));
  }
  g.inradius = best;
  return g;
}

bool find_kernel_point(std::span<const Vec2> polygon, Vec2 &point)
{
  const CellGeometry g = compute_polygon_geometry(polygon);
  // The centroid is preferred whenever it is safely inside the kernel.
  if (KernelDepth(polygon, g.centroid) > 1e-3 * g.diameter)
  {
    point = g.centroid;
    return true;
  }
  double best = 0.0;
  bool found = false;
  for (const auto &p : KernelCandidates(polygon, g.centroid))
  {
    const double d = KernelDepth(polygon, p);
    if (d > best)
    {
      best = d;
      point = p;
      found = true;
    }
  }
  return found;
}

std::vector<CellGeometry> compute_geometry(const PolyMesh &mesh)
{
  std::vector<CellGeometry> out;
  out.reserve(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); c++)
  {
    const auto poly = mesh.polygon(c);
    out.push_back(compute_polygon_geometry(poly, c));
  }
  return out;
}

PolyMesh PolyMesh::FromCells(std::vector<Vec2> vertices, std::vector<std::vector<int>> loops)
{
  PolyMesh mesh;
  mesh.vertices_ = std::move(vertices);
  const int nv = mesh.num_vertices();
  std::map<std::pair<int, int>, int> lookup;
  for (std::size_t c = 0; c < loops.size(); c++)
  {
    const auto &loop = loops[c];
    for (std::size_t i = 0; i < loop.size(); i++)
    {
      const int a = loop[i];
      const int b = loop[(i + 1) % loop.size()];
      if (a < 0 || a >= nv || b < 0 || b >= nv)
      {
        throw MeshError("cell " + std::to_string(c) + " references a vertex out of range");
      }
      const auto key = std::minmax(a, b);
      if (lookup.find(key) == lookup.end())
      {
        lookup.emplace(key, mesh.num_edges());
        mesh.edges_.push_back({key.first, key.second, false});
      }
    }
  }
  mesh.cells_.resize(loops.size());
  for (std::size_t c = 0; c < loops.size(); c++)
  {
    mesh.cells_[c].vertices = std::move(loops[c]);
  }
  mesh.Finalize();
  return mesh;
}

PolyMesh PolyMesh::FromParts(std::vector<Vec2> vertices, std::vector<Edge> edges,
                             std::vector<std::vector<int>> loops)
{
  PolyMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.edges_ = std::move(edges);
  const int nv = mesh.num_vertices();
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    const auto &ed = mesh.edges_[e];
    if (ed.v0 < 0 || ed.v0 >= nv || ed.v1 < 0 || ed.v1 >= nv)
    {
      throw MeshError("edge " + std::to_string(e) + " references a vertex out of range");
    }
  }
  mesh.cells_.resize(loops.size());
  for (std::size_t c = 0; c < loops.size(); c++)
  {
    for (int v : loops[c])
    {
      if (v < 0 || v >= nv)
      {
        throw MeshError("cell " + std::to_string(c) + " references a vertex out of range");
      }
    }
    mesh.cells_[c].vertices = std::move(loops[c]);
  }
  const std::vector<bool> flags = [&]()
  {
    std::vector<bool> f(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); e++)
    {
      f[e] = mesh.edges_[e].boundary;
    }
    return f;
  }();
  mesh.Finalize();
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    if (flags[e] != mesh.edges_[e].boundary)
    {
      throw MeshError("edge " + std::to_string(e) + " boundary flag disagrees with connectivity");
    }
  }
  return mesh;
}

void PolyMesh::Finalize()
{
  const int ne = num_edges();
  std::map<std::pair<int, int>, int> lookup;
  for (int e = 0; e < ne; e++)
  {
    const auto &ed = edges_[e];
    if (ed.v0 == ed.v1)
    {
      throw MeshError("edge " + std::to_string(e) + " has coincident endpoints");
    }
    if (!lookup.emplace(std::minmax(ed.v0, ed.v1), e).second)
    {
      throw MeshError("edge " + std::to_string(e) + " is listed twice");
    }
  }
  std::vector<int> uses(ne, 0);
  std::vector<int> forward(ne, 0);
  edge_cells_.assign(2 * ne, -1);
  for (int c = 0; c < num_cells(); c++)
  {
    auto &cell = cells_[c];
    const int n = cell.size();
    if (n < 3)
    {
      throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    }
    cell.edges.resize(n);
    cell.edge_signs.resize(n);
    for (int i = 0; i < n; i++)
    {
      const int a = cell.vertices[i];
      const int b = cell.vertices[(i + 1) % n];
      const auto it = lookup.find(std::minmax(a, b));
      if (it == lookup.end())
      {
        throw MeshError("cell " + std::to_string(c) + " side (" + std::to_string(a) + ", " +
                        std::to_string(b) + ") is not a listed edge");
      }
      const int e = it->second;
      cell.edges[i] = e;
      cell.edge_signs[i] = (edges_[e].v0 == a) ? 1 : -1;
      if (uses[e] >= 2)
      {
        throw MeshError("edge " + std::to_string(e) + " is shared by more than two cells");
      }
      edge_cells_[2 * e + uses[e]] = c;
      uses[e]++;
      forward[e] += cell.edge_signs[i];
    }
  }
  for (int e = 0; e < ne; e++)
  {
    if (uses[e] == 0)
    {
      throw MeshError("edge " + std::to_string(e) + " is not used by any cell");
    }
    if (uses[e] == 2 && forward[e] != 0)
    {
      throw MeshError("edge " + std::to_string(e) +
                      " is traversed in the same direction by both cells");
    }
    edges_[e].boundary = (uses[e] == 1);
  }
  boundary_vertex_.assign(num_vertices(), 0);
  for (const auto &ed : edges_)
  {
    if (ed.boundary)
    {
      boundary_vertex_[ed.v0] = 1;
      boundary_vertex_[ed.v1] = 1;
    }
  }
  cell_geometry_ = compute_geometry(*this);
  edge_geometry_.resize(ne);
  for (int e = 0; e < ne; e++)
  {
    const Vec2 &a = vertices_[edges_[e].v0];
    const Vec2 &b = vertices_[edges_[e].v1];
    auto &g = edge_geometry_[e];
    g.length = (b - a).norm();
    g.midpoint = 0.5 * (a + b);
    g.tangent = (b - a) / g.length;
    g.normal = Vec2(g.tangent.y(), -g.tangent.x());
  }
  if (!vertices_.empty())
  {
    bbox_min_ = bbox_max_ = vertices_[0];
    for (const auto &p : vertices_)
    {
      bbox_min_ = bbox_min_.cwiseMin(p);
      bbox_max_ = bbox_max_.cwiseMax(p);
    }
  }
}

double PolyMesh::domain_area() const
{
  double a = 0.0;
  for (const auto &g : cell_geometry_)
  {
    a += g.area;
  }
  return a;
}

double PolyMesh::max_diameter() const
{
  double h = 0.0;
  for (const auto &g : cell_geometry_)
  {
    h = std::max(h, g.diameter);
  }
  return h;
}

std::vector<Vec2> PolyMesh::polygon(int cell) const
{
  std::vector<Vec2> out;
  out.reserve(cells_[cell].vertices.size());
  for (int v : cells_[cell].vertices)
  {
    out.push_back(vertices_[v]);
  }
  return out;
}

RegularityReport check_regularity(const PolyMesh &mesh, double rho)
{
  RegularityReport r;
  r.rho = rho;
  const int nc = mesh.num_cells();
  r.rho1.resize(nc);
  r.rho2.resize(nc);
  for (int c = 0; c < nc; c++)
  {
    const auto &g = mesh.geometry(c);
    const double min_edge = *std::min_element(g.edge_length.begin(), g.edge_length.end());
    r.rho1[c] = std::clamp(g.inradius / g.diameter, 0.0, 1.0);
    r.rho2[c] = std::clamp(min_edge / g.diameter, 0.0, 1.0);
    r.min_rho1 = std::min(r.min_rho1, r.rho1[c]);
    r.min_rho2 = std::min(r.min_rho2, r.rho2[c]);
    if (r.rho1[c] < rho || r.rho2[c] < rho)
    {
      r.violating_cells.push_back(c);
    }
  }
  r.satisfied = r.violating_cells.empty();
  return r;
}

}  // namespace vemhd
