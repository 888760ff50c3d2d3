#pragma once

#include "winfty/fem.hpp"

#include <vector>

namespace winfty {

/// The discrete shape derivative as a nodal dual vector: pairing with a nodal
/// vector field V is sum_i dual_vector[i] . V[i].  Entries vanish at vertices
/// whose star contains no omega cell and at vertices on the boundary of D.
struct ShapeGradient {
  std::vector<Vec2> dual_vector;
  std::vector<int> support;  // vertices with nonzero entries

  double max_norm() const;
};

/// Assembles the five integrand groups of the volume-form shape derivative
/// (j div V, j_x . V, -j_z . DV^T grad u, (DV + DV^T - div V I) grad u . grad p,
/// div(f V) p) over omega cells, plus the volume-penalty term when active.
ShapeGradient assemble_shape_gradient(const ReferenceMesh& mesh, const DeformationMap& phi,
                                      const FeFunction& u, const FeFunction& p,
                                      const CostIntegrand& problem,
                                      const PenaltyConfig* penalty = nullptr);

double evaluate_pairing(const ShapeGradient& grad, const std::vector<Vec2>& field);

/// Sum of deformed areas of omega cells.
double volume(const ReferenceMesh& mesh, const DeformationMap& phi);

}  // namespace winfty
