// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef VEMHD_POLYQUAD_HPP
#define VEMHD_POLYQUAD_HPP

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vemhd/mesh.hpp"

namespace vemhd
{

// No point of the polygon kernel could be located for a fan sub-triangulation.
class GeometryError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Points and weights; weights carry the measure (area for cells, arclength for edges).
struct QuadratureRule
{
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
  double total_weight() const;
};

// Number of monomials of total degree at most k in two variables.
constexpr int monomial_dim(int k) { return (k + 1) * (k + 2) / 2; }

// Exponents (a, b) of the i-th monomial: ordered by total degree, then by decreasing a.
std::pair<int, int> monomial_exponents(int i);

// m_i(x) = ((x - c_x)/h)^a ((y - c_y)/h)^b for a + b <= degree.
class ScaledMonomials
{
public:
  ScaledMonomials(const Vec2 &center, double scale, int degree)
    : center_(center), scale_(scale), degree_(degree)
  {
  }

  // Basis of a mesh cell: center x_P, scale h_P.
  ScaledMonomials(const PolyMesh &mesh, int cell, int degree);

  int degree() const { return degree_; }
  int size() const { return monomial_dim(degree_); }
  const Vec2 &center() const { return center_; }
  double scale() const { return scale_; }

  Eigen::VectorXd Values(const Vec2 &x) const;
  // Row 0: d/dx, row 1: d/dy.
  Eigen::Matrix<double, 2, Eigen::Dynamic> Gradients(const Vec2 &x) const;
  double Value(int i, const Vec2 &x) const;

  // Scaled local coordinate (x - center)/scale.
  Vec2 Local(const Vec2 &x) const { return (x - center_) / scale_; }

private:
  Vec2 center_;
  double scale_;
  int degree_;
};

// Gauss-Legendre nodes and weights on [-1, 1] with n points (exact to degree 2n - 1).
const std::pair<std::vector<double>, std::vector<double>> &gauss_legendre(int n);

// Collapsed Gauss rule on a triangle, exact for polynomials of total degree `degree`.
QuadratureRule triangle_rule(const Vec2 &a, const Vec2 &b, const Vec2 &c, int degree);

// Fan of triangle rules from a kernel point of a star-shaped polygon. The centroid is used
// as anchor whenever it lies in the kernel. Throws GeometryError if no anchor is found.
QuadratureRule polygon_rule(std::span<const Vec2> polygon, int degree);
QuadratureRule cell_rule(const PolyMesh &mesh, int cell, int degree);

// Gauss-Legendre on the segment a->b with ceil((degree + 1)/2) points; weights in arclength.
QuadratureRule edge_rule(const Vec2 &a, const Vec2 &b, int degree);
QuadratureRule edge_rule(const PolyMesh &mesh, int edge, int degree);

// Gram of the degree-k scaled monomials over a cell or polygon.
Eigen::MatrixXd monomial_gram(const PolyMesh &mesh, int cell, int k);
Eigen::MatrixXd monomial_gram(std::span<const Vec2> polygon, const ScaledMonomials &basis);

}  // namespace vemhd

#endif  // VEMHD_POLYQUAD_HPP
