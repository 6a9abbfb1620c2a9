// Copyright The vemhd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef VEMHD_PRODUCTS_HPP
#define VEMHD_PRODUCTS_HPP

#include <vector>

#include <Eigen/Dense>

#include "vemhd/derham.hpp"
#include "vemhd/projectors.hpp"

namespace vemhd
{

enum class Space
{
  V,
  E
};

// Local stabilized inner product: matrix() = consistency + stabilization.
struct LocalGram
{
  Space space = Space::V;
  Eigen::MatrixXd consistency;
  Eigen::MatrixXd stabilization;

  Eigen::MatrixXd matrix() const { return consistency + stabilization; }
};

LocalGram gram_V(const PolyMesh &mesh, int cell, const PolyReconstruction &rec);
LocalGram gram_E(const PolyMesh &mesh, int cell, const EdgeProjector &p0);

// Diagonal of the P_h product, |P| per cell.
Eigen::VectorXd gram_P(const PolyMesh &mesh);

// Scatter-add of local grams by global vertex (V) or edge (E) indices. Cells are summed in
// index order, so the result is bit-stable.
SparseMatrix assemble(const PolyMesh &mesh, Space space, const std::vector<LocalGram> &grams);

// Everything needed to evaluate discrete inner products on a mesh.
struct DiscreteSpaces
{
  const PolyMesh *mesh = nullptr;
  ReconstructionKind kind = ReconstructionKind::Elliptic;
  std::vector<PolyReconstruction> reconstructions;
  std::vector<EdgeProjector> p0;
  std::vector<EdgeProjector> rt;
  std::vector<LocalGram> local_v;
  std::vector<LocalGram> local_e;
  SparseMatrix mass_v;
  SparseMatrix mass_e;
  Eigen::VectorXd mass_p;
  ChainMaps chain;
};

// Builds projectors and grams for every cell; per-cell work honours VEMHD_THREADS.
DiscreteSpaces build_spaces(const PolyMesh &mesh, ReconstructionKind kind);

struct NormDiagnostics
{
  double b_div = 0.0;   // (dt^-1 <B,B>_E + ||div B||_P^2)^(1/2)
  double e_curl = 0.0;  // (<E,E>_V + dt ||rot E||_E^2)^(1/2)
  double u_grad = 0.0;  // (u^T K u)^(1/2) when a velocity stiffness is supplied
};

NormDiagnostics norm_X_diagnostics(const DiscreteSpaces &spaces, const FieldE &b, const FieldV &e,
                                   double dt, const SparseMatrix *velocity_stiffness = nullptr,
                                   const Eigen::VectorXd *u = nullptr);

}  // namespace vemhd

#endif  // VEMHD_PRODUCTS_HPP
