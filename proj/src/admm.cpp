#include "winfty/admm.hpp"

#include "winfty/util.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace winfty {

Mat2 project_spectral_ball(const Mat2& a) {
  const ConformalSplit s = conformal_split(a);
  const double q = s.q(), r = s.r();
  if (q + r <= 1.0) return a;
  const double s1 = std::min(q + r, 1.0);
  const double s2 = std::clamp(q - r, -1.0, 1.0);
  const double qp = 0.5 * (s1 + s2), rp = 0.5 * (s1 - s2);
  const double cq = q > 0.0 ? qp / q : 0.0;
  const double cr = r > 0.0 ? rp / r : 0.0;
  Mat2 out;
  out(0, 0) = cq * s.e + cr * s.f;
  out(1, 1) = cq * s.e - cr * s.f;
  out(0, 1) = -cq * s.h + cr * s.g;
  out(1, 0) = cq * s.h + cr * s.g;
  return out;
}

namespace {

struct VectorDofs {
  std::vector<int> vertex_to_dof;  // -1 on the boundary of D
  std::vector<int> dof_to_vertex;
  int count = 0;
};

VectorDofs interior_dofs(const ReferenceMesh& mesh) {
  VectorDofs dofs;
  dofs.vertex_to_dof.assign(static_cast<std::size_t>(mesh.num_vertices()), -1);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (!mesh.is_boundary_vertex(v)) {
      dofs.vertex_to_dof[static_cast<std::size_t>(v)] = dofs.count++;
      dofs.dof_to_vertex.push_back(v);
    }
  }
  return dofs;
}

Mat2 cell_dv(const std::vector<Vec2>& field, const DeformedCell& dc) {
  Mat2 dv = Mat2::Zero();
  for (int k = 0; k < 3; ++k)
    dv += field[static_cast<std::size_t>(dc.v[k])] * dc.grad[k].transpose();
  return dv;
}

}  // namespace

DirectionResult admm_direction(const ReferenceMesh& mesh, const DeformationMap& phi,
                               const ShapeGradient& grad, const AdmmParams& params,
                               const AdmmState* warm_start) {
  const int nv = mesh.num_vertices();
  const int nc = mesh.num_cells();
  const std::size_t nvz = static_cast<std::size_t>(nv);
  const std::size_t ncz = static_cast<std::size_t>(nc);

  AdmmState state;
  state.V.assign(nvz, Vec2::Zero());
  state.q.assign(ncz, Mat2::Zero());
  state.lambda.assign(ncz, Mat2::Zero());
  state.tau = params.tau0;

  const double gmax = grad.max_norm();
  if (gmax < 1e-14) {
    state.converged = true;
    return {state.V, state};
  }
  const double tol = params.tol * (1.0 + gmax);

  if (warm_start && static_cast<int>(warm_start->V.size()) == nv &&
      static_cast<int>(warm_start->q.size()) == nc &&
      static_cast<int>(warm_start->lambda.size()) == nc && warm_start->tau > 0.0) {
    state.V = warm_start->V;
    state.q = warm_start->q;
    state.lambda = warm_start->lambda;
    state.tau = warm_start->tau;
  }

  // Deformed cell data and the vector-Laplacian stiffness over all of D,
  // factorized once; both components share the matrix.
  std::vector<DeformedCell> cells(ncz);
  for (int t = 0; t < nc; ++t) cells[static_cast<std::size_t>(t)] = deformed_cell(mesh, phi, t);

  const VectorDofs dofs = interior_dofs(mesh);
  Eigen::SparseMatrix<double> stiffness(dofs.count, dofs.count);
  {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(9 * nc));
    for (const DeformedCell& dc : cells) {
      for (int a = 0; a < 3; ++a) {
        const int da = dofs.vertex_to_dof[static_cast<std::size_t>(dc.v[a])];
        if (da < 0) continue;
        for (int b = 0; b < 3; ++b) {
          const int db = dofs.vertex_to_dof[static_cast<std::size_t>(dc.v[b])];
          if (db >= 0) triplets.emplace_back(da, db, dc.area * dc.grad[a].dot(dc.grad[b]));
        }
      }
    }
    stiffness.setFromTriplets(triplets.begin(), triplets.end());
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(stiffness);
  if (solver.info() != Eigen::Success)
    throw SolveError("admm: stiffness factorization failed", 0.0);

  std::vector<Mat2> dv(ncz);
  for (int t = 0; t < nc; ++t)
    dv[static_cast<std::size_t>(t)] = cell_dv(state.V, cells[static_cast<std::size_t>(t)]);

  Eigen::VectorXd rhs_x(dofs.count), rhs_y(dofs.count);
  state.residual = std::numeric_limits<double>::infinity();

  for (int it = 0; it < params.max_iter; ++it) {
    state.iterations = it + 1;
    const double tau = state.tau;

    // q-update: per-cell projection of DV + lambda/tau onto the spectral ball.
    double dual_sq = 0.0;  // tau^2 |q_new - q_old|^2, accumulated in chunk order
    {
      std::vector<double> partial;
      const int grain = 2048;
      const int chunks = (nc + grain - 1) / grain;
      partial.assign(static_cast<std::size_t>(chunks), 0.0);
      parallel_for_chunks(nc, [&](int lo, int hi) {
        double local = 0.0;
        for (int t = lo; t < hi; ++t) {
          const std::size_t tz = static_cast<std::size_t>(t);
          const Mat2 target = dv[tz] + state.lambda[tz] / tau;
          const Mat2 q_new = project_spectral_ball(target);
          local += cells[tz].area * (q_new - state.q[tz]).squaredNorm();
          state.q[tz] = q_new;
        }
        partial[static_cast<std::size_t>(lo / grain)] = local;
      }, grain);
      for (double v : partial) dual_sq += v;
      dual_sq *= tau * tau;
    }

    // V-update: tau * K V = -Asm(lambda - tau q) - g.
    rhs_x.setZero();
    rhs_y.setZero();
    for (std::size_t tz = 0; tz < ncz; ++tz) {
      const DeformedCell& dc = cells[tz];
      const Mat2 m = state.lambda[tz] - tau * state.q[tz];
      for (int a = 0; a < 3; ++a) {
        const int da = dofs.vertex_to_dof[static_cast<std::size_t>(dc.v[a])];
        if (da < 0) continue;
        const Vec2 contrib = dc.area * (m * dc.grad[a]);
        rhs_x[da] -= contrib.x();
        rhs_y[da] -= contrib.y();
      }
    }
    for (int d = 0; d < dofs.count; ++d) {
      const Vec2& g = grad.dual_vector[static_cast<std::size_t>(dofs.dof_to_vertex[static_cast<std::size_t>(d)])];
      rhs_x[d] -= g.x();
      rhs_y[d] -= g.y();
    }
    const Eigen::VectorXd sol_x = solver.solve(rhs_x / tau);
    const Eigen::VectorXd sol_y = solver.solve(rhs_y / tau);
    if (solver.info() != Eigen::Success) throw SolveError("admm: V-update solve failed", 0.0);

    double dv_change_sq = 0.0;
    double primal_sq = 0.0;
    double dv_norm_sq = 0.0;
    for (int d = 0; d < dofs.count; ++d)
      state.V[static_cast<std::size_t>(dofs.dof_to_vertex[static_cast<std::size_t>(d)])] =
          Vec2{sol_x[d], sol_y[d]};
    for (int t = 0; t < nc; ++t) {
      const std::size_t tz = static_cast<std::size_t>(t);
      const Mat2 dv_new = cell_dv(state.V, cells[tz]);
      dv_change_sq += cells[tz].area * (dv_new - dv[tz]).squaredNorm();
      dv[tz] = dv_new;
      const Mat2 gap = dv_new - state.q[tz];
      primal_sq += cells[tz].area * gap.squaredNorm();
      dv_norm_sq += cells[tz].area * dv_new.squaredNorm();
      state.lambda[tz] += tau * gap;
    }

    state.residual = std::sqrt(tau * tau * primal_sq + dv_change_sq);
    const double primal = std::sqrt(primal_sq);
    if (state.residual < tol && primal <= tol * (1.0 + std::sqrt(dv_norm_sq))) {
      state.converged = true;
      break;
    }

    // Residual balancing; the rescaled multiplier keeps the next q-update target.
    const double dual = std::sqrt(dual_sq);
    if (primal > params.balance_ratio * dual) {
      state.tau *= params.balance_factor;
      for (Mat2& l : state.lambda) l /= params.balance_factor;
    } else if (dual > params.balance_ratio * primal) {
      state.tau /= params.balance_factor;
      for (Mat2& l : state.lambda) l *= params.balance_factor;
    }
  }

  // Descent safeguard: never return an ascent direction.
  if (evaluate_pairing(grad, state.V) > 0.0)
    return {std::vector<Vec2>(nvz, Vec2::Zero()), state};
  return {state.V, state};
}

double dual_norm(const ShapeGradient& grad, const ReferenceMesh& mesh, const DeformationMap& phi,
                 const AdmmParams& params) {
  const DirectionResult res = admm_direction(mesh, phi, grad, params);
  return -evaluate_pairing(grad, res.direction);
}

}  // namespace winfty
