#pragma once

#include "winfty/mesh.hpp"
#include "winfty/problems.hpp"

#include <Eigen/Sparse>

#include <array>
#include <stdexcept>
#include <vector>

namespace winfty {

/// Nodal scalar field on the deformed mesh; zero at vertices on or outside the
/// boundary of the omega region.
struct FeFunction {
  Eigen::VectorXd nodal_values;
};

struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

struct SolveError : std::runtime_error {
  double residual;
  explicit SolveError(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
};

/// Map from mesh vertices to the interior-of-omega degrees of freedom.
struct DofMap {
  std::vector<int> vertex_to_dof;  // -1 for constrained vertices
  std::vector<int> dof_to_vertex;
  int count = 0;
};

DofMap omega_interior_dofs(const ReferenceMesh& mesh);

/// Deformed cell data for assembly: vertex images, area, P1 basis gradients
/// and the edge midpoints used as quadrature points (weights area/3 each).
struct DeformedCell {
  std::array<int, 3> v{};
  std::array<Vec2, 3> y{};
  std::array<Vec2, 3> grad{};
  std::array<Vec2, 3> mid{};  // midpoints of edges (0,1), (1,2), (2,0)
  double area = 0.0;
};

DeformedCell deformed_cell(const ReferenceMesh& mesh, const DeformationMap& phi, int cell);

/// Preconditioned conjugate gradient with Jacobi preconditioning.  Solves to
/// relative residual <= tol or throws SolveError carrying the final residual.
Eigen::VectorXd cg_solve(const SparseSystem& system, double tol, int max_iter);

FeFunction solve_state(const ReferenceMesh& mesh, const DeformationMap& phi,
                       const CostIntegrand& problem);

FeFunction solve_adjoint(const ReferenceMesh& mesh, const DeformationMap& phi,
                         const FeFunction& u, const CostIntegrand& problem);

double evaluate_cost(const ReferenceMesh& mesh, const DeformationMap& phi, const FeFunction& u,
                     const CostIntegrand& problem, const PenaltyConfig* penalty = nullptr);

inline constexpr double kCgTol = 1e-10;

}  // namespace winfty
