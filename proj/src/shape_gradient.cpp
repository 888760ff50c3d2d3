#include "winfty/shape_gradient.hpp"

namespace winfty {

namespace {
constexpr double kMidWeight[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
}

double ShapeGradient::max_norm() const {
  double m = 0.0;
  for (const Vec2& g : dual_vector) m = std::max(m, g.lpNorm<Eigen::Infinity>());
  return m;
}

double volume(const ReferenceMesh& mesh, const DeformationMap& phi) {
  double vol = 0.0;
  for (int t = 0; t < mesh.num_cells(); ++t) {
    if (!mesh.is_omega(t)) continue;
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    vol += signed_area(phi.values[static_cast<std::size_t>(tri[0])],
                       phi.values[static_cast<std::size_t>(tri[1])],
                       phi.values[static_cast<std::size_t>(tri[2])]);
  }
  return vol;
}

ShapeGradient assemble_shape_gradient(const ReferenceMesh& mesh, const DeformationMap& phi,
                                      const FeFunction& u, const FeFunction& p,
                                      const CostIntegrand& problem,
                                      const PenaltyConfig* penalty) {
  ShapeGradient grad;
  grad.dual_vector.assign(static_cast<std::size_t>(mesh.num_vertices()), Vec2::Zero());

  double penalty_coeff = 0.0;
  if (penalty) penalty_coeff = penalty_value_and_derivative(volume(mesh, phi), *penalty).second;

  for (int t = 0; t < mesh.num_cells(); ++t) {
    if (!mesh.is_omega(t)) continue;
    const DeformedCell dc = deformed_cell(mesh, phi, t);
    const double w = dc.area / 3.0;
    Vec2 grad_u = Vec2::Zero(), grad_p = Vec2::Zero();
    for (int k = 0; k < 3; ++k) {
      grad_u += u.nodal_values[dc.v[k]] * dc.grad[k];
      grad_p += p.nodal_values[dc.v[k]] * dc.grad[k];
    }

    double j_sum = 0.0;         // quadrature of j
    Vec2 jz_sum = Vec2::Zero(); // quadrature of j_z
    double fp_sum = 0.0;        // quadrature of f p
    std::array<Vec2, 3> jx_q;
    std::array<Vec2, 3> gradf_q;
    std::array<double, 3> p_q{};
    for (int q = 0; q < 3; ++q) {
      double uq = 0.0, pq = 0.0;
      for (int k = 0; k < 3; ++k) {
        uq += kMidWeight[q][k] * u.nodal_values[dc.v[k]];
        pq += kMidWeight[q][k] * p.nodal_values[dc.v[k]];
      }
      j_sum += w * problem.j(dc.mid[q], uq, grad_u);
      jz_sum += w * problem.j_z(dc.mid[q], uq, grad_u);
      fp_sum += w * problem.f(dc.mid[q]) * pq;
      jx_q[q] = problem.j_x(dc.mid[q], uq, grad_u);
      gradf_q[q] = problem.grad_f(dc.mid[q]);
      p_q[q] = pq;
    }

    const double up = grad_u.dot(grad_p);
    for (int a = 0; a < 3; ++a) {
      const Vec2& ga = dc.grad[a];
      Vec2 contrib = (j_sum + fp_sum + penalty_coeff * dc.area - dc.area * up) * ga;
      contrib -= jz_sum.dot(ga) * grad_u;
      contrib += dc.area * (ga.dot(grad_u) * grad_p + ga.dot(grad_p) * grad_u);
      for (int q = 0; q < 3; ++q) {
        const double lam = kMidWeight[q][a];
        if (lam == 0.0) continue;
        contrib += w * lam * (jx_q[q] + p_q[q] * gradf_q[q]);
      }
      grad.dual_vector[static_cast<std::size_t>(dc.v[a])] += contrib;
    }
  }

  // Fields vanish on the boundary of D; store zeros there.
  for (int v : mesh.boundary_vertices)
    grad.dual_vector[static_cast<std::size_t>(v)] = Vec2::Zero();
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!grad.dual_vector[static_cast<std::size_t>(v)].isZero(0.0)) grad.support.push_back(v);
  return grad;
}

double evaluate_pairing(const ShapeGradient& grad, const std::vector<Vec2>& field) {
  if (field.size() != grad.dual_vector.size())
    throw std::invalid_argument("evaluate_pairing: field size mismatch");
  double sum = 0.0;
  for (int v : grad.support) sum += grad.dual_vector[static_cast<std::size_t>(v)].dot(
      field[static_cast<std::size_t>(v)]);
  return sum;
}

}  // namespace winfty
