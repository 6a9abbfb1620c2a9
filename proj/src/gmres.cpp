// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "vemhd/solver.hpp"

namespace vemhd
{

GmresResult gmres_solve(const LinearMap &a, const Eigen::VectorXd &b, double tol,
                        const GmresParams &params)
{
  GmresResult out;
  const Eigen::Index n = b.size();
  out.x = Eigen::VectorXd::Zero(n);
  const double beta = b.norm();
  out.history.push_back(beta);
  if (beta == 0.0)
  {
    out.converged = true;
    return out;
  }
  const int m_max = static_cast<int>(std::min<Eigen::Index>(params.max_iterations, n));
  std::vector<Eigen::VectorXd> v;
  v.reserve(m_max + 1);
  v.push_back(b / beta);
  // Column j of the Hessenberg matrix has j + 2 meaningful entries.
  std::vector<Eigen::VectorXd> h;
  h.reserve(m_max);
  std::vector<double> cs, sn;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m_max + 1);
  g[0] = beta;
  double best = beta;
  int last_improvement = 0;
  int j = 0;
  for (; j < m_max; j++)
  {
    Eigen::VectorXd w = a(v[j]);
    Eigen::VectorXd col = Eigen::VectorXd::Zero(j + 2);
    for (int pass = 0; pass < 2; pass++)
    {
      for (int i = 0; i <= j; i++)
      {
        const double r = v[i].dot(w);
        col[i] += r;
        w -= r * v[i];
      }
    }
    col[j + 1] = w.norm();
    for (int i = 0; i < j; i++)
    {
      const double t = cs[i] * col[i] + sn[i] * col[i + 1];
      col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
      col[i] = t;
    }
    const double denom = std::hypot(col[j], col[j + 1]);
    const double c = denom == 0.0 ? 1.0 : col[j] / denom;
    const double s = denom == 0.0 ? 0.0 : col[j + 1] / denom;
    cs.push_back(c);
    sn.push_back(s);
    const double sub = col[j + 1];
    col[j] = c * col[j] + s * col[j + 1];
    col[j + 1] = 0.0;
    g[j + 1] = -s * g[j];
    g[j] = c * g[j];
    h.push_back(col);
    const double res = std::abs(g[j + 1]);
    out.history.push_back(res);
    const bool done = res <= tol * beta || sub == 0.0;
    if (res < best * (1.0 - 1e-14))
    {
      best = res;
      last_improvement = j + 1;
    }
    if (done)
    {
      j++;
      out.converged = res <= tol * beta || sub == 0.0;
      break;
    }
    if (j + 1 - last_improvement >= params.stagnation_window)
    {
      throw SolverError("GMRES stagnated", out.history);
    }
    v.push_back(w / sub);
  }
  // Back substitution on the rotated Hessenberg system.
  const int k = j;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
  for (int i = k - 1; i >= 0; i--)
  {
    double s = g[i];
    for (int l = i + 1; l < k; l++)
    {
      s -= h[l][i] * y[l];
    }
    y[i] = h[i][i] == 0.0 ? 0.0 : s / h[i][i];
  }
  for (int i = 0; i < k; i++)
  {
    out.x += y[i] * v[i];
  }
  out.iterations = k;
  return out;
}

}  // namespace vemhd
