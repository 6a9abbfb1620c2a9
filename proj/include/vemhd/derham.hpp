// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef VEMHD_DERHAM_HPP
#define VEMHD_DERHAM_HPP

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "vemhd/mesh.hpp"

namespace vemhd
{

// Nodal scalar field: one value per mesh vertex.
using FieldV = Eigen::VectorXd;
// Edge field: one mean normal flux per edge, relative to the global edge normal.
using FieldE = Eigen::VectorXd;
// Cell field: one average per cell.
using FieldP = Eigen::VectorXd;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ScalarFunction = std::function<double(const Vec2 &)>;
using VectorFunction = std::function<Vec2(const Vec2 &)>;

FieldV interp_V(const PolyMesh &mesh, const ScalarFunction &f);
FieldE interp_E(const PolyMesh &mesh, const VectorFunction &c, int degree = 4);
FieldP interp_P(const PolyMesh &mesh, const ScalarFunction &q, int degree = 4);

// R: FieldV -> FieldE, row for edge a->b is (D(b) - D(a))/h_e.
SparseMatrix rot_map(const PolyMesh &mesh);
// D: FieldE -> FieldP, row for cell P is (1/|P|) sum_e s_e h_e f_e.
SparseMatrix div_map(const PolyMesh &mesh);

struct ChainMaps
{
  SparseMatrix rot;
  SparseMatrix div;
};

ChainMaps build_chain(const PolyMesh &mesh);

// Zero-mean predicate of P_h0: |sum_P |P| q_P| <= tol * sum_P |P| |q_P|.
bool is_zero_mean(const PolyMesh &mesh, const FieldP &q, double tol = 1e-12);

// max |interp_E(rot D) - R interp_V(D)| with rot D = (dD/dy, -dD/dx).
double commuting_check_rot(const PolyMesh &mesh, const ScalarFunction &d,
                           const VectorFunction &grad_d, int edge_degree);
// max |interp_P(div C) - D interp_E(C)|.
double commuting_check_div(const PolyMesh &mesh, const VectorFunction &c,
                           const ScalarFunction &div_c, int edge_degree, int cell_degree);

}  // namespace vemhd

#endif  // VEMHD_DERHAM_HPP
