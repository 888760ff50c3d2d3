#pragma once

#include "winfty/mesh.hpp"
#include "winfty/problems.hpp"

#include <optional>
#include <span>
#include <vector>

namespace winfty {

/// Discrete Hausdorff complementary distance: max over deformed vertices of
/// |d_target(x_i) - d_h(x_i)|, where d_h is the distance to the deformed
/// omega-boundary vertices for interior vertices and 0 otherwise.
double discrete_hcd(const ReferenceMesh& mesh, const DeformationMap& phi,
                    const TargetShape& target);

/// Max spectral norms of the deformation gradient and of its inverse over all
/// cells.  Throws on a cell with non-positive determinant.
std::pair<double, double> deformation_norms(const ReferenceMesh& mesh, const DeformationMap& phi);

/// Pairwise experimental order of convergence between consecutive rows.
/// Requires positive values and strictly decreasing mesh sizes.
std::vector<double> eoc(std::span<const double> values, std::span<const double> hs);

struct ConvergenceRow {
  double h = 0.0;
  std::optional<double> mu;
  double energy = 0.0;
  std::optional<double> eoc_energy;
  double hcd = 0.0;
  std::optional<double> eoc_hcd;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::string to_csv() const;
};

}  // namespace winfty
