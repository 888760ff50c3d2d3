#pragma once

#include "winfty/geometry.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace winfty {

/// Fixed triangulation of the hold-all square D = (-2,2)^2 with a flag per
/// cell marking the reference domain.  Connectivity is immutable after
/// construction; derived per-cell data is filled by finalize().
struct ReferenceMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::uint8_t> omega_cells;  // 1 iff the cell lies in the reference domain
  std::vector<int> boundary_vertices;     // sorted indices of vertices on the boundary of D
  double h = 0.0;                         // longest reference edge over omega cells

  // Derived, filled by finalize():
  std::vector<std::uint8_t> on_boundary;      // per vertex
  std::vector<std::uint8_t> touches_omega;    // vertex star contains an omega cell
  std::vector<std::uint8_t> touches_nonomega; // vertex star contains a non-omega cell
  std::vector<double> ref_area;               // per cell, reference configuration
  std::vector<std::array<Vec2, 3>> ref_grad;  // P1 basis gradients, reference configuration

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(triangles.size()); }
  bool is_omega(int cell) const { return omega_cells[static_cast<std::size_t>(cell)] != 0; }
  bool is_boundary_vertex(int v) const { return on_boundary[static_cast<std::size_t>(v)] != 0; }
  /// Interior-of-omega vertex: star meets omega cells only.
  bool is_omega_interior_vertex(int v) const {
    return touches_omega[static_cast<std::size_t>(v)] && !touches_nonomega[static_cast<std::size_t>(v)];
  }
  /// Vertex on the boundary of the (deformed) omega region, detected topologically.
  bool is_omega_boundary_vertex(int v) const {
    return touches_omega[static_cast<std::size_t>(v)] && touches_nonomega[static_cast<std::size_t>(v)];
  }

  /// Recomputes derived fields (boundary mask, star flags, areas, gradients, h).
  void finalize();
};

/// Nodal deformation: values[i] = image of reference vertex i.
struct DeformationMap {
  std::vector<Vec2> values;
};

DeformationMap identity_map(const ReferenceMesh& mesh);

struct CellGeometry {
  double area = 0.0;                       // deformed
  std::array<Vec2, 3> basis_gradients{};   // P1 gradients on the deformed cell
  Mat2 jacobian = Mat2::Zero();            // deformation gradient on the cell
};

struct AdmissibilityReport {
  bool admissible = false;
  bool boundary_identity = false;     // deformation equals identity on the boundary of D
  std::vector<double> cell_det;       // det of the deformation gradient per cell
  std::vector<int> bad_cells;         // cells failing the positivity tolerance
};

/// Criss-cross grid on D with n squares per side, each split into 4 triangles
/// at its center; omega flags the cells inside (-1,1)^2.  Requires n >= 4 and
/// n divisible by 4 so the square boundaries align with the grid.
ReferenceMesh generate_square_in_square(int n);

/// Polygonal annulus between the regular n_angular-gons at radii r_inner and
/// r_outer (omega), with a fan filling the hole and rings out to the boundary
/// of D.
ReferenceMesh generate_annulus_in_square(int n_angular, int n_radial, double r_inner,
                                         double r_outer);

/// Polygonal disk of given radius (omega), fan plus n_rings rings, embedded in D.
ReferenceMesh generate_disk_in_square(int n_angular, int n_rings, double radius);

/// Red refinement: each triangle splits into 4 congruent children via edge
/// midpoints; the deformation is carried by P1 interpolation.
std::pair<ReferenceMesh, DeformationMap> refine_congruent(const ReferenceMesh& mesh,
                                                          const DeformationMap& phi);

/// Circumradius over twice the inradius; 1 exactly for equilateral triangles.
double radius_ratio(const Vec2& p0, const Vec2& p1, const Vec2& p2);

/// Positive deformation gradient determinant on every cell and identity on the
/// boundary of D.
AdmissibilityReport check_admissible(const ReferenceMesh& mesh, const DeformationMap& phi);

CellGeometry cell_geometry(const ReferenceMesh& mesh, const DeformationMap& phi, int cell);

ReferenceMesh read_mesh(const std::string& path);
void write_mesh(const ReferenceMesh& mesh, const std::string& path);

/// Throws std::runtime_error if a structural invariant is violated.
void validate_mesh(const ReferenceMesh& mesh);

}  // namespace winfty
