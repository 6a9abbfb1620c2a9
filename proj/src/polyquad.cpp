// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "vemhd/polyquad.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace vemhd
{

double QuadratureRule::total_weight() const
{
  double s = 0.0;
  for (double w : weights)
  {
    s += w;
  }
  return s;
}

std::pair<int, int> monomial_exponents(int i)
{
  int k = 0;
  while (monomial_dim(k) <= i)
  {
    k++;
  }
  const int offset = i - (k == 0 ? 0 : monomial_dim(k - 1));
  return {k - offset, offset};
}

ScaledMonomials::ScaledMonomials(const PolyMesh &mesh, int cell, int degree)
  : ScaledMonomials(mesh.geometry(cell).centroid, mesh.geometry(cell).diameter, degree)
{
}

Eigen::VectorXd ScaledMonomials::Values(const Vec2 &x) const
{
  const Vec2 s = Local(x);
  Eigen::VectorXd v(size());
  int idx = 0;
  for (int k = 0; k <= degree_; k++)
  {
    for (int b = 0; b <= k; b++)
    {
      const int a = k - b;
      v[idx++] = std::pow(s.x(), a) * std::pow(s.y(), b);
    }
  }
  return v;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> ScaledMonomials::Gradients(const Vec2 &x) const
{
  const Vec2 s = Local(x);
  Eigen::Matrix<double, 2, Eigen::Dynamic> g(2, size());
  int idx = 0;
  for (int k = 0; k <= degree_; k++)
  {
    for (int b = 0; b <= k; b++)
    {
      const int a = k - b;
      g(0, idx) = a == 0 ? 0.0 : a * std::pow(s.x(), a - 1) * std::pow(s.y(), b) / scale_;
      g(1, idx) = b == 0 ? 0.0 : b * std::pow(s.x(), a) * std::pow(s.y(), b - 1) / scale_;
      idx++;
    }
  }
  return g;
}

double ScaledMonomials::Value(int i, const Vec2 &x) const
{
  const auto [a, b] = monomial_exponents(i);
  const Vec2 s = Local(x);
  return std::pow(s.x(), a) * std::pow(s.y(), b);
}

namespace
{

std::pair<std::vector<double>, std::vector<double>> ComputeGaussLegendre(int n)
{
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; i++)
  {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; it++)
    {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; j++)
      {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
      {
        break;
      }
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; j++)
    {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1)
  {
    x[n / 2] = 0.0;
  }
  return {x, w};
}

constexpr int kMaxGaussPoints = 64;

}  // namespace

const std::pair<std::vector<double>, std::vector<double>> &gauss_legendre(int n)
{
  static const auto table = []()
  {
    std::array<std::pair<std::vector<double>, std::vector<double>>, kMaxGaussPoints + 1> t;
    for (int k = 1; k <= kMaxGaussPoints; k++)
    {
      t[k] = ComputeGaussLegendre(k);
    }
    return t;
  }();
  if (n < 1 || n > kMaxGaussPoints)
  {
    throw std::invalid_argument("gauss_legendre: unsupported number of points");
  }
  return table[n];
}

QuadratureRule triangle_rule(const Vec2 &a, const Vec2 &b, const Vec2 &c, int degree)
{
  // Collapse [0,1]^2 onto the triangle: x = a + u (b - a) + u v (c - b), Jacobian 2|T| u.
  const int n = std::max(1, (degree + 2 + 1) / 2);
  const auto &[z, w] = gauss_legendre(n);
  const Vec2 ab = b - a;
  const Vec2 bc = c - b;
  const double jac = ab.x() * (c - a).y() - ab.y() * (c - a).x();
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; i++)
  {
    const double u = 0.5 * (z[i] + 1.0);
    for (int j = 0; j < n; j++)
    {
      const double v = 0.5 * (z[j] + 1.0);
      rule.points.push_back(a + u * ab + u * v * bc);
      rule.weights.push_back(0.25 * w[i] * w[j] * u * jac);
    }
  }
  return rule;
}

QuadratureRule polygon_rule(std::span<const Vec2> polygon, int degree)
{
  Vec2 anchor;
  if (!find_kernel_point(polygon, anchor))
  {
    throw GeometryError("no interior kernel point found for polygon quadrature");
  }
  QuadratureRule rule;
  rule.degree = degree;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; i++)
  {
    const auto t = triangle_rule(anchor, polygon[i], polygon[(i + 1) % n], degree);
    rule.points.insert(rule.points.end(), t.points.begin(), t.points.end());
    rule.weights.insert(rule.weights.end(), t.weights.begin(), t.weights.end());
  }
  return rule;
}

QuadratureRule cell_rule(const PolyMesh &mesh, int cell, int degree)
{
  const auto poly = mesh.polygon(cell);
  return polygon_rule(poly, degree);
}

QuadratureRule edge_rule(const Vec2 &a, const Vec2 &b, int degree)
{
  const int n = std::max(1, (degree + 2) / 2);
  const auto &[z, w] = gauss_legendre(n);
  const double len = (b - a).norm();
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(n);
  rule.weights.reserve(n);
  for (int i = 0; i < n; i++)
  {
    rule.points.push_back(a + 0.5 * (z[i] + 1.0) * (b - a));
    rule.weights.push_back(0.5 * w[i] * len);
  }
  return rule;
}

QuadratureRule edge_rule(const PolyMesh &mesh, int edge, int degree)
{
  const auto &e = mesh.edge(edge);
  return edge_rule(mesh.vertex(e.v0), mesh.vertex(e.v1), degree);
}

Eigen::MatrixXd monomial_gram(std::span<const Vec2> polygon, const ScaledMonomials &basis)
{
  const auto rule = polygon_rule(polygon, 2 * basis.degree());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (std::size_t q = 0; q < rule.size(); q++)
  {
    const Eigen::VectorXd m = basis.Values(rule.points[q]);
    g.noalias() += rule.weights[q] * m * m.transpose();
  }
  return g;
}

Eigen::MatrixXd monomial_gram(const PolyMesh &mesh, int cell, int k)
{
  const auto poly = mesh.polygon(cell);
  return monomial_gram(poly, ScaledMonomials(mesh, cell, k));
}

}  // namespace vemhd
