// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef VEMHD_MESH_HPP
#define VEMHD_MESH_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace vemhd
{

using Vec2 = Eigen::Vector2d;

// Structural problem with mesh connectivity or geometry.
class MeshError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Malformed mesh file; carries the 1-based line number where parsing failed.
class ParseError : public std::runtime_error
{
public:
  ParseError(int line, const std::string &what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
  {
  }
  int line() const { return line_; }

private:
  int line_;
};

// Global edge, oriented from v0 to v1 (always v0 < v1 for meshes built here).
struct Edge
{
  int v0 = -1;
  int v1 = -1;
  bool boundary = false;
};

// Polygonal cell: CCW vertex loop and the matching edge loop. Local edge i joins
// vertices[i] and vertices[i+1]. edge_signs[i] is +1 when the CCW traversal runs along the
// global edge orientation, i.e. when the global edge normal points out of the cell.
struct Cell
{
  std::vector<int> vertices;
  std::vector<int> edges;
  std::vector<int> edge_signs;
  int size() const { return static_cast<int>(vertices.size()); }
};

// Per-cell geometric quantities. Edge data are indexed by local edge and refer to the
// outward normal of the cell; the tangent follows the CCW traversal.
struct CellGeometry
{
  double area = 0.0;
  double diameter = 0.0;
  Vec2 centroid = Vec2::Zero();
  std::vector<double> edge_length;
  std::vector<Vec2> edge_midpoint;
  std::vector<Vec2> edge_normal;
  std::vector<Vec2> edge_tangent;
  double inradius = 0.0;  // largest disk inside the cell centered at a kernel sample
};

// Geometry of a global edge with respect to its own orientation: t = (x1 - x0)/|e|,
// n = (t_y, -t_x).
struct EdgeGeometry
{
  double length = 0.0;
  Vec2 midpoint = Vec2::Zero();
  Vec2 tangent = Vec2::Zero();
  Vec2 normal = Vec2::Zero();
};

class PolyMesh
{
public:
  PolyMesh() = default;

  // Builds edges from CCW cell loops. Edges are oriented from the lower to the higher
  // vertex index and numbered in order of first appearance.
  static PolyMesh FromCells(std::vector<Vec2> vertices, std::vector<std::vector<int>> loops);

  // Builds a mesh from an explicit edge list; every cell side must be listed exactly once
  // and every listed edge must be used by a cell.
  static PolyMesh FromParts(std::vector<Vec2> vertices, std::vector<Edge> edges,
                            std::vector<std::vector<int>> loops);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }

  const std::vector<Vec2> &vertices() const { return vertices_; }
  const Vec2 &vertex(int i) const { return vertices_[i]; }
  const std::vector<Edge> &edges() const { return edges_; }
  const Edge &edge(int i) const { return edges_[i]; }
  const std::vector<Cell> &cells() const { return cells_; }
  const Cell &cell(int i) const { return cells_[i]; }

  const CellGeometry &geometry(int cell) const { return cell_geometry_[cell]; }
  const std::vector<CellGeometry> &geometry() const { return cell_geometry_; }
  const EdgeGeometry &edge_geometry(int edge) const { return edge_geometry_[edge]; }

  bool boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  bool boundary_edge(int e) const { return edges_[e].boundary; }

  // Cells adjacent to an edge: one for boundary edges, two otherwise.
  std::span<const int> edge_cells(int e) const
  {
    return {edge_cells_.data() + 2 * e, edges_[e].boundary ? 1u : 2u};
  }

  Vec2 bbox_min() const { return bbox_min_; }
  Vec2 bbox_max() const { return bbox_max_; }
  double domain_area() const;
  double max_diameter() const;

  // Vertex polygon of a cell as coordinates.
  std::vector<Vec2> polygon(int cell) const;

private:
  void Finalize();

  std::vector<Vec2> vertices_;
  std::vector<Edge> edges_;
  std::vector<Cell> cells_;
  std::vector<CellGeometry> cell_geometry_;
  std::vector<EdgeGeometry> edge_geometry_;
  std::vector<std::uint8_t> boundary_vertex_;
  std::vector<int> edge_cells_;
  Vec2 bbox_min_ = Vec2::Zero();
  Vec2 bbox_max_ = Vec2::Zero();
};

// Geometry of a single polygon given CCW vertex coordinates. Throws MeshError when the
// signed area is not positive.
CellGeometry compute_polygon_geometry(std::span<const Vec2> polygon, int cell_id = -1);

// Per-cell geometry of a whole mesh.
std::vector<CellGeometry> compute_geometry(const PolyMesh &mesh);

// Mesh regularity diagnostics. rho1 = r / h_P (inscribed disk inside the kernel), rho2 =
// min_e h_e / h_P. Never rejects a mesh.
struct RegularityReport
{
  std::vector<double> rho1;
  std::vector<double> rho2;
  double min_rho1 = 1.0;
  double min_rho2 = 1.0;
  double rho = 0.0;
  bool satisfied = true;
  std::vector<int> violating_cells;
};

RegularityReport check_regularity(const PolyMesh &mesh, double rho);

// Point-in-kernel search for star-shaped polygons. Returns false if none of the sampled
// candidates sees every edge.
bool find_kernel_point(std::span<const Vec2> polygon, Vec2 &point);

// Mesh generators on [-1, 1]^2.
PolyMesh gen_triangular(int n);
PolyMesh gen_perturbed_quads(int n, double amplitude, std::uint64_t seed);
PolyMesh gen_voronoi(int n_seeds, int lloyd_iters, std::uint64_t seed);
PolyMesh gen_center_refined(int levels, double refine_radius, int base_n = 8);

// Text mesh format: VERTICES / EDGES / CELLS sections, 0-based indices.
void write_mesh(const PolyMesh &mesh, const std::filesystem::path &path);
void write_mesh(const PolyMesh &mesh, std::ostream &out);
PolyMesh read_mesh(const std::filesystem::path &path);
PolyMesh read_mesh(std::istream &in);

}  // namespace vemhd

#endif  // VEMHD_MESH_HPP
