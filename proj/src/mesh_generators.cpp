// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <unordered_map>

#include "vemhd/mesh.hpp"

namespace vemhd
{

namespace
{

constexpr double kLo = -1.0;
constexpr double kHi = 1.0;

// Uniform double in [0, 1) from the top 53 bits; independent of the standard library's
// distribution implementation, so seeded meshes are reproducible across toolchains.
double Uniform01(std::mt19937_64 &rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double GridCoord(int i, int n)
{
  if (i == 0)
  {
    return kLo;
  }
  if (i == n)
  {
    return kHi;
  }
  return kLo + (kHi - kLo) * static_cast<double>(i) / n;
}

// Keeps the part of a convex polygon with n.x <= c.
std::vector<Vec2> ClipHalfPlane(const std::vector<Vec2> &poly, const Vec2 &n, double c)
{
  std::vector<Vec2> out;
  out.reserve(poly.size() + 1);
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; i++)
  {
    const Vec2 &p = poly[i];
    const Vec2 &q = poly[(i + 1) % m];
    const double fp = n.dot(p) - c;
    const double fq = n.dot(q) - c;
    if (fp <= 0.0)
    {
      out.push_back(p);
    }
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0))
    {
      const double t = fp / (fp - fq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

double SnapToBox(double x)
{
  if (std::abs(x - kLo) < 1e-12)
  {
    return kLo;
  }
  if (std::abs(x - kHi) < 1e-12)
  {
    return kHi;
  }
  return x;
}

class SeedGrid
{
public:
  explicit SeedGrid(const std::vector<Vec2> &seeds) : seeds_(seeds)
  {
    g_ = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(seeds.size())))));
    w_ = (kHi - kLo) / g_;
    buckets_.assign(g_ * g_, {});
    for (std::size_t i = 0; i < seeds.size(); i++)
    {
      const auto [bx, by] = Bucket(seeds[i]);
      buckets_[by * g_ + bx].push_back(static_cast<int>(i));
    }
  }

  // Voronoi cell of seed i clipped to the box.
  std::vector<Vec2> Cell(int i) const
  {
    const Vec2 s = seeds_[i];
    std::vector<Vec2> poly = {Vec2(kLo, kLo), Vec2(kHi, kLo), Vec2(kHi, kHi), Vec2(kLo, kHi)};
    const auto [bx, by] = Bucket(s);
    for (int r = 0; r <= g_; r++)
    {
      double reach = 0.0;
      for (const auto &p : poly)
      {
        reach = std::max(reach, (p - s).norm());
      }
      // Seeds outside ring r - 1 are at least (r - 1) * w away; their bisectors cannot cut
      // a polygon that lies within `reach` of s once that distance exceeds 2 * reach.
      if ((r - 1) * w_ > 2.0 * reach)
      {
        break;
      }
      for (int j = by - r; j <= by + r; j++)
      {
        for (int k = bx - r; k <= bx + r; k++)
        {
          if (j < 0 || j >= g_ || k < 0 || k >= g_)
          {
            continue;
          }
          if (std::max(std::abs(j - by), std::abs(k - bx)) != r)
          {
            continue;
          }
          for (int o : buckets_[j * g_ + k])
          {
            if (o == i)
            {
              continue;
            }
            const Vec2 t = seeds_[o];
            const Vec2 n = t - s;
            poly = ClipHalfPlane(poly, n, 0.5 * (t.squaredNorm() - s.squaredNorm()));
          }
        }
      }
    }
    for (auto &p : poly)
    {
      p = Vec2(SnapToBox(p.x()), SnapToBox(p.y()));
    }
    return poly;
  }

private:
  std::pair<int, int> Bucket(const Vec2 &p) const
  {
    const int bx = std::clamp(static_cast<int>((p.x() - kLo) / w_), 0, g_ - 1);
    const int by = std::clamp(static_cast<int>((p.y() - kLo) / w_), 0, g_ - 1);
    return {bx, by};
  }

  const std::vector<Vec2> &seeds_;
  int g_ = 1;
  double w_ = 2.0;
  std::vector<std::vector<int>> buckets_;
};

Vec2 PolygonCentroid(const std::vector<Vec2> &poly)
{
  const Vec2 o = poly[0];
  double a2 = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < poly.size(); i++)
  {
    const Vec2 p = poly[i] - o;
    const Vec2 q = poly[(i + 1) % poly.size()] - o;
    const double cr = p.x() * q.y() - q.x() * p.y();
    a2 += cr;
    c += cr * (p + q);
  }
  return o + c / (3.0 * a2);
}

// Merges points closer than tol and returns the index of each input point.
class PointMerger
{
public:
  explicit PointMerger(double tol) : tol_(tol) {}

  int Insert(const Vec2 &p)
  {
    const long long kx = static_cast<long long>(std::floor(p.x() / tol_));
    const long long ky = static_cast<long long>(std::floor(p.y() / tol_));
    for (long long dx = -1; dx <= 1; dx++)
    {
      for (long long dy = -1; dy <= 1; dy++)
      {
        const auto it = buckets_.find(Key(kx + dx, ky + dy));
        if (it == buckets_.end())
        {
          continue;
        }
        for (int idx : it->second)
        {
          if ((points_[idx] - p).norm() <= tol_)
          {
            return idx;
          }
        }
      }
    }
    const int idx = static_cast<int>(points_.size());
    points_.push_back(p);
    buckets_[Key(kx, ky)].push_back(idx);
    return idx;
  }

  std::vector<Vec2> &points() { return points_; }

private:
  static std::uint64_t Key(long long x, long long y)
  {
    return (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull) ^ static_cast<std::uint64_t>(y);
  }

  double tol_;
  std::vector<Vec2> points_;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

}  // namespace

PolyMesh gen_triangular(int n)
{
  if (n < 1)
  {
    throw std::invalid_argument("gen_triangular: n must be at least 1");
  }
  std::vector<Vec2> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; j++)
  {
    for (int i = 0; i <= n; i++)
    {
      vertices.emplace_back(GridCoord(i, n), GridCoord(j, n));
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> loops;
  loops.reserve(2 * n * n);
  for (int j = 0; j < n; j++)
  {
    for (int i = 0; i < n; i++)
    {
      loops.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      loops.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return PolyMesh::FromCells(std::move(vertices), std::move(loops));
}

PolyMesh gen_perturbed_quads(int n, double amplitude, std::uint64_t seed)
{
  if (n < 1)
  {
    throw std::invalid_argument("gen_perturbed_quads: n must be at least 1");
  }
  if (!(amplitude >= 0.0 && amplitude < 0.5))
  {
    throw std::invalid_argument("gen_perturbed_quads: amplitude must lie in [0, 0.5)");
  }
  const double h = (kHi - kLo) / n;
  std::mt19937_64 rng(seed);
  std::vector<Vec2> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; j++)
  {
    for (int i = 0; i <= n; i++)
    {
      Vec2 p(GridCoord(i, n), GridCoord(j, n));
      if (i > 0 && i < n && j > 0 && j < n)
      {
        const double dx = (2.0 * Uniform01(rng) - 1.0) * amplitude * h;
        const double dy = (2.0 * Uniform01(rng) - 1.0) * amplitude * h;
        p += Vec2(dx, dy);
      }
      vertices.push_back(p);
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> loops;
  loops.reserve(n * n);
  for (int j = 0; j < n; j++)
  {
    for (int i = 0; i < n; i++)
    {
      loops.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return PolyMesh::FromCells(std::move(vertices), std::move(loops));
}

PolyMesh gen_voronoi(int n_seeds, int lloyd_iters, std::uint64_t seed)
{
  if (n_seeds < 1)
  {
    throw std::invalid_argument("gen_voronoi: n_seeds must be at least 1");
  }
  if (lloyd_iters < 0)
  {
    throw std::invalid_argument("gen_voronoi: lloyd_iters must be non-negative");
  }
  std::mt19937_64 rng(seed);
  std::vector<Vec2> seeds(n_seeds);
  for (auto &s : seeds)
  {
    const double x = kLo + (kHi - kLo) * Uniform01(rng);
    const double y = kLo + (kHi - kLo) * Uniform01(rng);
    s = Vec2(x, y);
  }
  for (int it = 0; it < lloyd_iters; it++)
  {
    SeedGrid grid(seeds);
    std::vector<Vec2> next(n_seeds);
    for (int i = 0; i < n_seeds; i++)
    {
      next[i] = PolygonCentroid(grid.Cell(i));
    }
    seeds = std::move(next);
  }
  SeedGrid grid(seeds);
  PointMerger merger(1e-10);
  std::vector<std::vector<int>> loops(n_seeds);
  for (int i = 0; i < n_seeds; i++)
  {
    for (const auto &p : grid.Cell(i))
    {
      const int v = merger.Insert(p);
      if (loops[i].empty() || loops[i].back() != v)
      {
        loops[i].push_back(v);
      }
    }
    while (loops[i].size() > 1 && loops[i].front() == loops[i].back())
    {
      loops[i].pop_back();
    }
  }
  return PolyMesh::FromCells(std::move(merger.points()), std::move(loops));
}

PolyMesh gen_center_refined(int levels, double refine_radius, int base_n)
{
  if (levels < 0 || base_n < 1 || !(refine_radius > 0.0))
  {
    throw std::invalid_argument("gen_center_refined: need levels >= 0, base_n >= 1, radius > 0");
  }
  if (levels > 20)
  {
    throw std::invalid_argument("gen_center_refined: too many levels");
  }
  // Leaves are (level, i, j); coordinates are integers in units of the finest spacing.
  const long long fine = static_cast<long long>(base_n) << levels;
  const double unit = (kHi - kLo) / static_cast<double>(fine);
  using Leaf = std::tuple<int, long long, long long>;
  std::vector<Leaf> leaves;
  for (long long j = 0; j < base_n; j++)
  {
    for (long long i = 0; i < base_n; i++)
    {
      leaves.emplace_back(0, i, j);
    }
  }
  auto span = [&](int level) { return 1ll << (levels - level); };
  for (int round = 1; round <= levels; round++)
  {
    const double radius = refine_radius / static_cast<double>(1ll << (round - 1));
    std::vector<Leaf> next;
    for (const auto &[level, i, j] : leaves)
    {
      const long long s = span(level);
      const double x0 = kLo + unit * static_cast<double>(i * s);
      const double x1 = kLo + unit * static_cast<double>((i + 1) * s);
      const double y0 = kLo + unit * static_cast<double>(j * s);
      const double y1 = kLo + unit * static_cast<double>((j + 1) * s);
      const double dx = x0 > 0.0 ? x0 : (x1 < 0.0 ? -x1 : 0.0);
      const double dy = y0 > 0.0 ? y0 : (y1 < 0.0 ? -y1 : 0.0);
      const bool hit = level == round - 1 && std::hypot(dx, dy) < radius;
      if (hit)
      {
        for (int b = 0; b < 2; b++)
        {
          for (int a = 0; a < 2; a++)
          {
            next.emplace_back(level + 1, 2 * i + a, 2 * j + b);
          }
        }
      }
      else
      {
        next.emplace_back(level, i, j);
      }
    }
    leaves = std::move(next);
  }
  // Corner points indexed both by row and by column for hanging-node lookup.
  std::map<std::pair<long long, long long>, int> ids;  // (Y, X) -> vertex id
  for (const auto &[level, i, j] : leaves)
  {
    const long long s = span(level);
    for (long long b = 0; b < 2; b++)
    {
      for (long long a = 0; a < 2; a++)
      {
        ids.emplace(std::make_pair((j + b) * s, (i + a) * s), 0);
      }
    }
  }
  std::vector<Vec2> vertices;
  vertices.reserve(ids.size());
  std::map<long long, std::set<long long>> rows, cols;
  for (auto &[key, id] : ids)
  {
    id = static_cast<int>(vertices.size());
    const auto [Y, X] = key;
    const double x = X == fine ? kHi : kLo + unit * static_cast<double>(X);
    const double y = Y == fine ? kHi : kLo + unit * static_cast<double>(Y);
    vertices.emplace_back(x, y);
    rows[Y].insert(X);
    cols[X].insert(Y);
  }
  std::vector<std::vector<int>> loops;
  loops.reserve(leaves.size());
  for (const auto &[level, i, j] : leaves)
  {
    const long long s = span(level);
    const long long X0 = i * s, X1 = (i + 1) * s, Y0 = j * s, Y1 = (j + 1) * s;
    std::vector<int> loop;
    // Bottom: left to right.
    for (auto it = rows[Y0].lower_bound(X0); it != rows[Y0].end() && *it < X1; ++it)
    {
      loop.push_back(ids.at({Y0, *it}));
    }
    // Right: bottom to top.
    for (auto it = cols[X1].lower_bound(Y0); it != cols[X1].end() && *it < Y1; ++it)
    {
      loop.push_back(ids.at({*it, X1}));
    }
    // Top: right to left.
    {
      const auto &row = rows[Y1];
      for (auto it = std::make_reverse_iterator(row.upper_bound(X1));
           it != row.rend() && *it > X0; ++it)
      {
        loop.push_back(ids.at({Y1, *it}));
      }
    }
    // Left: top to bottom.
    {
      const auto &col = cols[X0];
      for (auto it = std::make_reverse_iterator(col.upper_bound(Y1));
           it != col.rend() && *it > Y0; ++it)
      {
        loop.push_back(ids.at({*it, X0}));
      }
    }
    loops.push_back(std::move(loop));
  }
  return PolyMesh::FromCells(std::move(vertices), std::move(loops));
}

}  // namespace vemhd
