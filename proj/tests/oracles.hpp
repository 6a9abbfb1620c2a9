// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

// Reference computations that share no code with the library quadrature.

#ifndef VEMHD_TESTS_ORACLES_HPP
#define VEMHD_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "vemhd/mesh.hpp"

namespace vemhd::oracle
{

// Polynomial in one variable s, coefficients by increasing power.
using Poly1 = std::vector<double>;

inline Poly1 Multiply(const Poly1 &a, const Poly1 &b)
{
  Poly1 c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); i++)
  {
    for (std::size_t j = 0; j < b.size(); j++)
    {
      c[i + j] += a[i] * b[j];
    }
  }
  return c;
}

inline Poly1 Power(const Poly1 &a, int k)
{
  Poly1 r = {1.0};
  for (int i = 0; i < k; i++)
  {
    r = Multiply(r, a);
  }
  return r;
}

inline double IntegrateUnit(const Poly1 &p)
{
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); k++)
  {
    s += p[k] / static_cast<double>(k + 1);
  }
  return s;
}

// Exact int_P (x - cx)^a (y - cy)^b dA through Green's theorem,
// int_P f = oint (x - cx)^{a+1} (y - cy)^b / (a + 1) dy, with exact segment integrals.
inline double Moment(const std::vector<Vec2> &poly, int a, int b, const Vec2 &c = Vec2::Zero())
{
  double total = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; i++)
  {
    const Vec2 p0 = poly[i] - c;
    const Vec2 p1 = poly[(i + 1) % n] - c;
    const Poly1 x = {p0.x(), p1.x() - p0.x()};
    const Poly1 y = {p0.y(), p1.y() - p0.y()};
    const Poly1 integrand = Multiply(Power(x, a + 1), Power(y, b));
    total += IntegrateUnit(integrand) * (p1.y() - p0.y()) / (a + 1);
  }
  return total;
}

// Exact int_e (x)^a (y)^b dl along a segment.
inline double EdgeMoment(const Vec2 &p0, const Vec2 &p1, int a, int b)
{
  const Poly1 x = {p0.x(), p1.x() - p0.x()};
  const Poly1 y = {p0.y(), p1.y() - p0.y()};
  return IntegrateUnit(Multiply(Power(x, a), Power(y, b))) * (p1 - p0).norm();
}

// Exact integral of a polynomial integrand of total degree <= degree over a polygon: the
// integrand is fitted on a Chebyshev grid (exact for polynomials) and the fit is integrated
// with the Green's-theorem moments above.
class PolyIntegrator
{
public:
  PolyIntegrator(const std::vector<Vec2> &poly, int degree)
  {
    std::vector<std::pair<int, int>> exps;
    for (int d = 0; d <= degree; d++)
    {
      for (int b = 0; b <= d; b++)
      {
        exps.emplace_back(d - b, b);
      }
    }
    Vec2 lo = poly[0], hi = poly[0];
    for (const auto &p : poly)
    {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec2 center = 0.5 * (lo + hi);
    const double scale = 0.5 * (hi - lo).maxCoeff();
    const int grid = degree + 3;
    Eigen::MatrixXd vander(grid * grid, exps.size());
    for (int i = 0; i < grid; i++)
    {
      for (int j = 0; j < grid; j++)
      {
        const double u = std::cos(M_PI * (i + 0.5) / grid), v = std::cos(M_PI * (j + 0.5) / grid);
        points_.push_back(center + scale * Vec2(u, v));
        for (std::size_t m = 0; m < exps.size(); m++)
        {
          vander(i * grid + j, m) = std::pow(u, exps[m].first) * std::pow(v, exps[m].second);
        }
      }
    }
    Eigen::VectorXd moments(exps.size());
    for (std::size_t m = 0; m < exps.size(); m++)
    {
      moments[m] = Moment(poly, exps[m].first, exps[m].second, center) /
                   std::pow(scale, exps[m].first + exps[m].second);
    }
    // The integral is moments . pinv(V) f, a fixed linear functional of the samples.
    const int n = static_cast<int>(exps.size());
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(vander);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(vander.rows());
    y.head(n) = r.transpose().triangularView<Eigen::Lower>().solve(moments);
    weights_ = qr.householderQ() * y;
  }

  double operator()(const std::function<double(const Vec2 &)> &f) const
  {
    double s = 0.0;
    for (std::size_t k = 0; k < points_.size(); k++)
    {
      s += weights_[k] * f(points_[k]);
    }
    return s;
  }

private:
  std::vector<Vec2> points_;
  Eigen::VectorXd weights_;
};

// Dense L2 projection of a vector field onto span{basis} over a polygon; `degree` bounds the
// total degree of every product field * basis and basis * basis.
inline Eigen::VectorXd DenseProjection(const std::vector<Vec2> &poly,
                                       const std::vector<std::function<Vec2(const Vec2 &)>> &basis,
                                       const std::function<Vec2(const Vec2 &)> &field, int degree)
{
  const PolyIntegrator integrate(poly, degree);
  const int nb = static_cast<int>(basis.size());
  Eigen::MatrixXd gram(nb, nb);
  Eigen::VectorXd rhs(nb);
  for (int i = 0; i < nb; i++)
  {
    for (int j = 0; j < nb; j++)
    {
      gram(i, j) = integrate([&](const Vec2 &x) { return basis[i](x).dot(basis[j](x)); });
    }
    rhs[i] = integrate([&](const Vec2 &x) { return basis[i](x).dot(field(x)); });
  }
  return gram.ldlt().solve(rhs);
}

inline PolyMesh UnitSquare()
{
  return PolyMesh::FromCells({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}, {{0, 1, 2, 3}});
}

// All sample meshes used by mesh-wide properties: every generator at two sizes.
inline std::vector<PolyMesh> SampleMeshes()
{
  std::vector<PolyMesh> m;
  m.push_back(gen_triangular(2));
  m.push_back(gen_triangular(5));
  m.push_back(gen_perturbed_quads(3, 0.2, 1));
  m.push_back(gen_perturbed_quads(6, 0.3, 2));
  m.push_back(gen_voronoi(12, 10, 3));
  m.push_back(gen_voronoi(40, 30, 4));
  m.push_back(gen_center_refined(1, 0.5, 4));
  m.push_back(gen_center_refined(2, 0.5, 4));
  return m;
}

}  // namespace vemhd::oracle

#endif  // VEMHD_TESTS_ORACLES_HPP
