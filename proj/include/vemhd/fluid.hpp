// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef VEMHD_FLUID_HPP
#define VEMHD_FLUID_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vemhd/derham.hpp"
#include "vemhd/polyquad.hpp"
#include "vemhd/products.hpp"

namespace vemhd
{

// Velocity field: two components at every vertex and every edge midpoint. Vertex v owns
// global DOFs (2v, 2v + 1); edge e owns (2(nV + e), 2(nV + e) + 1).
using FieldTV = Eigen::VectorXd;

int tv_dof_count(const PolyMesh &mesh);
FieldTV interp_TV(const PolyMesh &mesh, const VectorFunction &v);

// Local node k of a cell: k = 2i is vertex i, k = 2i + 1 is the midpoint of local edge i.
// Local DOFs are (2k, 2k + 1) for node k.
std::vector<int> tv_local_dofs(const PolyMesh &mesh, int cell);
std::vector<Vec2> tv_local_nodes(const PolyMesh &mesh, int cell);
Eigen::VectorXd gather_tv(const PolyMesh &mesh, int cell, const FieldTV &global);

// Vector quadratics in [P2]^2 are stored as 12 coefficients of the scaled monomials of the
// cell: entries 0..5 for the x component, 6..11 for the y component.
using VectorQuadratic = Eigen::Matrix<double, 12, 1>;

Vec2 eval_vector_quadratic(const ScaledMonomials &p2, const VectorQuadratic &c, const Vec2 &x);
// Row i of the result is d(component)/dx_j laid out as [dqx/dx, dqx/dy; dqy/dx, dqy/dy].
Eigen::Matrix2d grad_vector_quadratic(const ScaledMonomials &p2, const VectorQuadratic &c,
                                      const Vec2 &x);

// Columns: basis of {q in [P2]^2 : div q in P0}, L2-orthonormal on the cell. Columns 0 and
// 1 are the normalized constants (1,0) and (0,1).
Eigen::MatrixXd basis_PSv(const PolyMesh &mesh, int cell);

struct VelocityCellOps
{
  ScaledMonomials p2{Vec2::Zero(), 1.0, 2};
  Eigen::MatrixXd psv;        // 12 x dim(PSv)
  Eigen::MatrixXd pi_nabla;   // dim(PSv) x local DOFs
  Eigen::MatrixXd pi0;        // dim(PSv) x local DOFs
  Eigen::RowVectorXd div_row; // local DOFs -> cell divergence
  Eigen::MatrixXd g2;         // 12 x 9, gradients of P3 monomials
  Eigen::MatrixXd g2_perp;    // 12 x 3, L2 complement of g2 in [P2]^2
  Eigen::MatrixXd psv_mass;   // dim(PSv) x dim(PSv)
  Eigen::MatrixXd psv_stiff;  // dim(PSv) x dim(PSv)
  Eigen::MatrixXd node_values_nabla;  // local DOFs x local DOFs
  Eigen::MatrixXd node_values_pi0;    // local DOFs x local DOFs
};

VelocityCellOps build_velocity_ops(const PolyMesh &mesh, int cell);

// Mass-like (|P|-scaled stabilization) and gradient (unit stabilization) local products.
LocalGram gram_TV(const PolyMesh &mesh, int cell, const VelocityCellOps &ops);
LocalGram stiff_TV(const PolyMesh &mesh, int cell, const VelocityCellOps &ops);

// Global assemblies over all TV DOFs.
SparseMatrix assemble_tv(const PolyMesh &mesh, const std::vector<LocalGram> &grams);
// Per-cell divergence rows as a sparse (cells x TV DOFs) operator.
SparseMatrix div_TV_map(const PolyMesh &mesh, const std::vector<VelocityCellOps> &ops);

// Interior (TV_h0) DOF mask.
std::vector<bool> tv_interior_mask(const PolyMesh &mesh);

class InfSupError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct InfSupResult
{
  double beta = 0.0;
  int velocity_dofs = 0;
  int pressure_dofs = 0;
  bool stable = false;  // beta >= 1e-10
};

// Smallest generalized singular value of the divergence coupling between TV_h0 (H1 seminorm
// from stiff_TV) and P_h0 (L2). Dense; intended for at most a few thousand DOFs.
InfSupResult infsup_probe(const PolyMesh &mesh);

}  // namespace vemhd

#endif  // VEMHD_FLUID_HPP
