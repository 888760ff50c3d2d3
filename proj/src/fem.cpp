#include "winfty/fem.hpp"

#include <cmath>
#include <vector>

namespace winfty {

namespace {

// Basis values at the edge-midpoint quadrature nodes m01, m12, m20.
constexpr double kMidWeight[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};

}  // namespace

DofMap omega_interior_dofs(const ReferenceMesh& mesh) {
  DofMap map;
  map.vertex_to_dof.assign(static_cast<std::size_t>(mesh.num_vertices()), -1);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_omega_interior_vertex(v)) {
      map.vertex_to_dof[static_cast<std::size_t>(v)] = map.count++;
      map.dof_to_vertex.push_back(v);
    }
  }
  return map;
}

DeformedCell deformed_cell(const ReferenceMesh& mesh, const DeformationMap& phi, int cell) {
  DeformedCell dc;
  dc.v = mesh.triangles[static_cast<std::size_t>(cell)];
  for (int k = 0; k < 3; ++k) dc.y[k] = phi.values[static_cast<std::size_t>(dc.v[k])];
  dc.area = signed_area(dc.y[0], dc.y[1], dc.y[2]);
  if (dc.area <= 0.0)
    throw std::runtime_error("assembly: non-positive deformed area on cell " +
                             std::to_string(cell) + " (inadmissible deformation)");
  const double inv = 1.0 / (2.0 * dc.area);
  dc.grad[0] = Vec2{(dc.y[1].y() - dc.y[2].y()) * inv, (dc.y[2].x() - dc.y[1].x()) * inv};
  dc.grad[1] = Vec2{(dc.y[2].y() - dc.y[0].y()) * inv, (dc.y[0].x() - dc.y[2].x()) * inv};
  dc.grad[2] = Vec2{(dc.y[0].y() - dc.y[1].y()) * inv, (dc.y[1].x() - dc.y[0].x()) * inv};
  dc.mid[0] = 0.5 * (dc.y[0] + dc.y[1]);
  dc.mid[1] = 0.5 * (dc.y[1] + dc.y[2]);
  dc.mid[2] = 0.5 * (dc.y[2] + dc.y[0]);
  return dc;
}

Eigen::VectorXd cg_solve(const SparseSystem& system, double tol, int max_iter) {
  const Eigen::SparseMatrix<double>& A = system.matrix;
  const Eigen::VectorXd& b = system.rhs;
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  if (bnorm == 0.0) return x;

  Eigen::VectorXd inv_diag(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const double d = A.coeff(i, i);
    inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
  }

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd Ap = A * p;
    const double p_ap = p.dot(Ap);
    if (p_ap <= 0.0) throw SolveError("cg: matrix not positive definite", r.norm() / bnorm);
    const double alpha = rz / p_ap;
    x += alpha * p;
    r -= alpha * Ap;
    if (r.norm() <= tol * bnorm) return x;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw SolveError("cg: no convergence after " + std::to_string(max_iter) + " iterations",
                   r.norm() / bnorm);
}

namespace {

SparseSystem assemble_omega_poisson(const ReferenceMesh& mesh, const DeformationMap& phi,
                                    const DofMap& dofs) {
  SparseSystem sys;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(9 * mesh.num_cells() / 2));
  for (int t = 0; t < mesh.num_cells(); ++t) {
    if (!mesh.is_omega(t)) continue;
    const DeformedCell dc = deformed_cell(mesh, phi, t);
    for (int a = 0; a < 3; ++a) {
      const int da = dofs.vertex_to_dof[static_cast<std::size_t>(dc.v[a])];
      if (da < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int db = dofs.vertex_to_dof[static_cast<std::size_t>(dc.v[b])];
        if (db < 0) continue;
        triplets.emplace_back(da, db, dc.area * dc.grad[a].dot(dc.grad[b]));
      }
    }
  }
  sys.matrix.resize(dofs.count, dofs.count);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = Eigen::VectorXd::Zero(dofs.count);
  return sys;
}

FeFunction scatter(const ReferenceMesh& mesh, const DofMap& dofs, const Eigen::VectorXd& x) {
  FeFunction fe;
  fe.nodal_values = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (int d = 0; d < dofs.count; ++d)
    fe.nodal_values[dofs.dof_to_vertex[static_cast<std::size_t>(d)]] = x[d];
  return fe;
}

}  // namespace

FeFunction solve_state(const ReferenceMesh& mesh, const DeformationMap& phi,
                       const CostIntegrand& problem) {
  const DofMap dofs = omega_interior_dofs(mesh);
  if (dofs.count == 0) {
    FeFunction fe;
    fe.nodal_values = Eigen::VectorXd::Zero(mesh.num_vertices());
    return fe;
  }
  SparseSystem sys = assemble_omega_poisson(mesh, phi, dofs);
  for (int t = 0; t < mesh.num_cells(); ++t) {
    if (!mesh.is_omega(t)) continue;
    const DeformedCell dc = deformed_cell(mesh, phi, t);
    const double w = dc.area / 3.0;
    for (int q = 0; q < 3; ++q) {
      const double fq = problem.f(dc.mid[q]);
      for (int a = 0; a < 3; ++a) {
        const int da = dofs.vertex_to_dof[static_cast<std::size_t>(dc.v[a])];
        if (da >= 0) sys.rhs[da] += w * fq * kMidWeight[q][a];
      }
    }
  }
  return scatter(mesh, dofs, cg_solve(sys, kCgTol, 10 * dofs.count));
}

FeFunction solve_adjoint(const ReferenceMesh& mesh, const DeformationMap& phi,
                         const FeFunction& u, const CostIntegrand& problem) {
  const DofMap dofs = omega_interior_dofs(mesh);
  if (dofs.count == 0) {
    FeFunction fe;
    fe.nodal_values = Eigen::VectorXd::Zero(mesh.num_vertices());
    return fe;
  }
  SparseSystem sys = assemble_omega_poisson(mesh, phi, dofs);
  for (int t = 0; t < mesh.num_cells(); ++t) {
    if (!mesh.is_omega(t)) continue;
    const DeformedCell dc = deformed_cell(mesh, phi, t);
    const double w = dc.area / 3.0;
    Vec2 grad_u = Vec2::Zero();
    for (int k = 0; k < 3; ++k) grad_u += u.nodal_values[dc.v[k]] * dc.grad[k];
    for (int q = 0; q < 3; ++q) {
      double uq = 0.0;
      for (int k = 0; k < 3; ++k) uq += kMidWeight[q][k] * u.nodal_values[dc.v[k]];
      const double ju = problem.j_u(dc.mid[q], uq, grad_u);
      const Vec2 jz = problem.j_z(dc.mid[q], uq, grad_u);
      for (int a = 0; a < 3; ++a) {
        const int da = dofs.vertex_to_dof[static_cast<std::size_t>(dc.v[a])];
        if (da >= 0) sys.rhs[da] += w * (ju * kMidWeight[q][a] + jz.dot(dc.grad[a]));
      }
    }
  }
  return scatter(mesh, dofs, cg_solve(sys, kCgTol, 10 * dofs.count));
}

double evaluate_cost(const ReferenceMesh& mesh, const DeformationMap& phi, const FeFunction& u,
                     const CostIntegrand& problem, const PenaltyConfig* penalty) {
  double cost = 0.0;
  double vol = 0.0;
  for (int t = 0; t < mesh.num_cells(); ++t) {
    if (!mesh.is_omega(t)) continue;
    const DeformedCell dc = deformed_cell(mesh, phi, t);
    vol += dc.area;
    const double w = dc.area / 3.0;
    Vec2 grad_u = Vec2::Zero();
    for (int k = 0; k < 3; ++k) grad_u += u.nodal_values[dc.v[k]] * dc.grad[k];
    for (int q = 0; q < 3; ++q) {
      double uq = 0.0;
      for (int k = 0; k < 3; ++k) uq += kMidWeight[q][k] * u.nodal_values[dc.v[k]];
      cost += w * problem.j(dc.mid[q], uq, grad_u);
    }
  }
  if (penalty) cost += penalty_value_and_derivative(vol, *penalty).first;
  return cost;
}

}  // namespace winfty
