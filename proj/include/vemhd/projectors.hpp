// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef VEMHD_PROJECTORS_HPP
#define VEMHD_PROJECTORS_HPP

#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "vemhd/mesh.hpp"
#include "vemhd/polyquad.hpp"

namespace vemhd
{

enum class ReconstructionKind
{
  Elliptic,
  LeastSquares,
  GalerkinInterp
};

// Accepts "elliptic", "ls", "galerkin".
ReconstructionKind parse_reconstruction(std::string_view name);
std::string to_string(ReconstructionKind kind);

// Local V_h reconstruction of one cell. Local DOFs are the cell's vertex values in loop order.
struct PolyReconstruction
{
  ReconstructionKind kind = ReconstructionKind::Elliptic;
  ScaledMonomials basis{Vec2::Zero(), 1.0, 1};
  // 3 x N: vertex values -> coefficients of the scaled P1 basis. For the Galerkin
  // interpolant these are the coefficients of its L2 projection onto P1.
  Eigen::MatrixXd coeffs;
  // N x N: vertex values of the reconstruction (identity for the Galerkin interpolant).
  Eigen::MatrixXd vertex_values;
  // Galerkin interpolant only: fan anchor x*, anchor weights alpha_V and the exact mass
  // matrix of the piecewise-linear interpolant in terms of the vertex values.
  Vec2 anchor = Vec2::Zero();
  Eigen::VectorXd alpha;
  Eigen::MatrixXd fan_mass;

  int size() const { return static_cast<int>(coeffs.cols()); }
};

PolyReconstruction build_elliptic(const PolyMesh &mesh, int cell);
PolyReconstruction build_least_squares(const PolyMesh &mesh, int cell);
PolyReconstruction build_galerkin_interp(const PolyMesh &mesh, int cell);
PolyReconstruction build_reconstruction(const PolyMesh &mesh, int cell, ReconstructionKind kind);

// Value at x of the piecewise-linear Galerkin interpolant of vertex values d.
double galerkin_value(const PolyMesh &mesh, int cell, const PolyReconstruction &rec,
                      const Eigen::VectorXd &d, const Vec2 &x);

enum class EdgeProjectorKind
{
  P0,
  RT0
};

// Local E_h projector. Local DOFs are the global edge fluxes of the cell's edges in loop
// order; orientation signs are folded into the matrix.
struct EdgeProjector
{
  EdgeProjectorKind kind = EdgeProjectorKind::P0;
  // P0: 2 x N giving (c_x, c_y). RT0: 3 x N giving (a, b, c) of a(1,0) + b(0,1) + c(x,y).
  Eigen::MatrixXd matrix;

  // Value of the projected field at x given the projector coefficients.
  static Vec2 Evaluate(EdgeProjectorKind kind, const Eigen::VectorXd &coeffs, const Vec2 &x);
};

EdgeProjector project_P0_E(const PolyMesh &mesh, int cell);
EdgeProjector project_RT(const PolyMesh &mesh, int cell);

// Local DOF gathers.
Eigen::VectorXd gather_vertices(const PolyMesh &mesh, int cell, const Eigen::VectorXd &global);
Eigen::VectorXd gather_edges(const PolyMesh &mesh, int cell, const Eigen::VectorXd &global);

}  // namespace vemhd

#endif  // VEMHD_PROJECTORS_HPP
