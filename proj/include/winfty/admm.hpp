#pragma once

#include "winfty/shape_gradient.hpp"

#include <vector>

namespace winfty {

struct AdmmParams {
  double tau0 = 1.0;
  double tol = 1e-6;          // scaled by (1 + max norm of the dual vector)
  int max_iter = 2000;
  double balance_ratio = 10;  // residual-balancing trigger
  double balance_factor = 2;  // tau multiplier
};

struct AdmmState {
  std::vector<Vec2> V;        // nodal direction, zero on the boundary of D
  std::vector<Mat2> q;        // per-cell matrix field, spectral norm <= 1
  std::vector<Mat2> lambda;   // per-cell multiplier field
  double tau = 1.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nearest matrix (Frobenius) with spectral norm <= 1: clips both singular
/// values at 1 using the closed-form 2x2 decomposition.
Mat2 project_spectral_ball(const Mat2& a);

struct DirectionResult {
  std::vector<Vec2> direction;
  AdmmState state;
};

/// Approximates the direction of steepest descent under the per-cell
/// constraint |DV| <= 1 by ADMM: per-cell spectral projection, a vector
/// Laplacian solve on the deformed mesh, and a multiplier update.  The
/// returned direction always satisfies pairing(grad, V) <= 0.
DirectionResult admm_direction(const ReferenceMesh& mesh, const DeformationMap& phi,
                               const ShapeGradient& grad, const AdmmParams& params,
                               const AdmmState* warm_start = nullptr);

/// -pairing(grad, V*) >= 0, the stationarity measure.
double dual_norm(const ShapeGradient& grad, const ReferenceMesh& mesh, const DeformationMap& phi,
                 const AdmmParams& params);

}  // namespace winfty
