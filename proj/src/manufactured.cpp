// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "vemhd/app.hpp"

namespace vemhd
{

namespace
{

// (x^2 + y^2 - 1)(sin xy + cos xy) - 100 e^x + 100 e^y; u x B = -N e^{-t}.
double Numerator(const Vec2 &p)
{
  const double x = p.x(), y = p.y();
  return (x * x + y * y - 1.0) * (std::sin(x * y) + std::cos(x * y)) - 100.0 * std::exp(x) +
         100.0 * std::exp(y);
}

}  // namespace

Vec2 ManufacturedSolution::b(const Vec2 &p, double t)
{
  const double x = p.x(), y = p.y();
  const double s = std::sin(x * y), c = std::cos(x * y);
  const double decay = std::exp(-t);
  return Vec2((50.0 * std::exp(y) + x * s - x * c) * decay,
              (50.0 * std::exp(x) - y * s + y * c) * decay);
}

double ManufacturedSolution::e(const Vec2 &p, double t)
{
  const double x = p.x(), y = p.y();
  return -(50.0 * (std::exp(x) - std::exp(y)) + std::cos(x * y) + std::sin(x * y)) * std::exp(-t);
}

Vec2 ManufacturedSolution::u(const Vec2 &p)
{
  const double x = p.x(), y = p.y();
  const double s = std::sin(x * y), c = std::cos(x * y);
  const double n = Numerator(p);
  return Vec2(-n / (2.0 * (50.0 * std::exp(x) - y * s + y * c)),
              n / (2.0 * (50.0 * std::exp(y) + x * s - x * c)));
}

double ManufacturedSolution::rot_b(const Vec2 &p, double t)
{
  const double x = p.x(), y = p.y();
  const double s = std::sin(x * y), c = std::cos(x * y);
  return (50.0 * (std::exp(x) - std::exp(y)) - (x * x + y * y) * (s + c)) * std::exp(-t);
}

double ManufacturedSolution::self_test(int points, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double d = 1e-3;
  double worst = 0.0;
  for (int k = 0; k < points; k++)
  {
    const Vec2 p(-1.0 + 2.0 * uniform(), -1.0 + 2.0 * uniform());
    const double t = 0.25 * uniform();
    const Vec2 dx(d, 0.0), dy(0.0, d);
    // Fourth-order centered differences keep truncation well below the tolerance.
    auto diff = [&](auto f, const Vec2 &h)
    { return (-f(p + 2.0 * h) + 8.0 * f(p + h) - 8.0 * f(p - h) + f(p - 2.0 * h)) / (12.0 * d); };
    const double dedx = diff([&](const Vec2 &q) { return e(q, t); }, dx);
    const double dedy = diff([&](const Vec2 &q) { return e(q, t); }, dy);
    const double dbdt = (-b(p, t + 2 * d).x() + 8 * b(p, t + d).x() - 8 * b(p, t - d).x() +
                         b(p, t - 2 * d).x()) / (12.0 * d);
    const double dbdt_y = (-b(p, t + 2 * d).y() + 8 * b(p, t + d).y() - 8 * b(p, t - d).y() +
                           b(p, t - 2 * d).y()) / (12.0 * d);
    const double dbydx = diff([&](const Vec2 &q) { return b(q, t).y(); }, dx);
    const double dbxdy = diff([&](const Vec2 &q) { return b(q, t).x(); }, dy);
    const Vec2 bv = b(p, t);
    const Vec2 uv = u(p);
    const double scale = bv.norm();
    // Faraday: dB/dt + rot E = 0 with rot E = (dE/dy, -dE/dx).
    const double faraday = std::hypot(dbdt + dedy, dbdt_y - dedx) / scale;
    // Ohm: E + u x B - rot B = 0 with R_m = 1.
    const double ohm =
      std::abs(e(p, t) + (uv.x() * bv.y() - uv.y() * bv.x()) - (dbydx - dbxdy)) / scale;
    worst = std::max({worst, faraday, ohm});
  }
  return worst;
}

}  // namespace vemhd
