#include "winfty/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace winfty {

double target_distance(const TargetShape& shape, const Vec2& x) {
  const double r = x.norm();
  if (shape.kind == TargetShape::Kind::Ball) return std::max(0.0, shape.r_outer - r);
  return std::max(0.0, std::min(r - shape.r_inner, shape.r_outer - r));
}

ExperimentSetup experiment1() {
  ExperimentSetup setup;
  setup.name = "exp1";
  auto u_d = [](const Vec2& x) { return 4.0 / M_PI - x.squaredNorm(); };
  setup.integrand.j = [u_d](const Vec2& x, double u, const Vec2&) {
    const double e = u - u_d(x);
    return 0.5 * e * e;
  };
  setup.integrand.j_u = [u_d](const Vec2& x, double u, const Vec2&) { return u - u_d(x); };
  setup.integrand.j_z = [](const Vec2&, double, const Vec2&) { return Vec2::Zero().eval(); };
  setup.integrand.j_x = [u_d](const Vec2& x, double u, const Vec2&) {
    return Vec2{2.0 * (u - u_d(x)) * x};  // -(u - u_d) grad u_d, grad u_d = -2x
  };
  setup.integrand.f = [](const Vec2&) { return 1.0; };
  setup.integrand.grad_f = [](const Vec2&) { return Vec2::Zero().eval(); };
  setup.target = {TargetShape::Kind::Ball, 0.0, 4.0 / std::sqrt(3.0 * M_PI)};
  setup.mesh = {MeshSpec::Kind::SquareGrid, 8, 0.0, 0.0, {}};
  return setup;
}

ExperimentSetup experiment2() {
  ExperimentSetup setup;
  setup.name = "exp2";
  const double ln4 = std::log(4.0);
  const double scale = 5.0 / (M_PI * std::log(256.0));
  auto guard = [](const Vec2& x) {
    if (x.norm() < 1e-12)
      throw std::domain_error("experiment2: integrand evaluated at the log singularity x = 0");
  };
  auto u_d = [=](const Vec2& x) {
    guard(x);
    const double r2 = x.squaredNorm();
    return scale * (-M_PI * r2 * ln4 + 3.0 * std::log(r2) + 3.0 * std::log(M_PI) + ln4);
  };
  auto grad_u_d = [=](const Vec2& x) {
    guard(x);
    return Vec2{scale * (-2.0 * M_PI * ln4 * x + 6.0 / x.squaredNorm() * x)};
  };
  setup.integrand.j = [u_d](const Vec2& x, double u, const Vec2&) {
    const double e = u - u_d(x);
    return 0.5 * e * e;
  };
  setup.integrand.j_u = [u_d](const Vec2& x, double u, const Vec2&) { return u - u_d(x); };
  setup.integrand.j_z = [](const Vec2&, double, const Vec2&) { return Vec2::Zero().eval(); };
  setup.integrand.j_x = [u_d, grad_u_d](const Vec2& x, double u, const Vec2&) {
    return Vec2{-(u - u_d(x)) * grad_u_d(x)};
  };
  setup.integrand.f = [](const Vec2&) { return 5.0; };
  setup.integrand.grad_f = [](const Vec2&) { return Vec2::Zero().eval(); };
  setup.target = {TargetShape::Kind::Annulus, 1.0 / std::sqrt(M_PI), 2.0 / std::sqrt(M_PI)};
  setup.mesh = {MeshSpec::Kind::Annulus, 16, 0.7, 1.4, {}};
  return setup;
}

ExperimentSetup experiment3() {
  ExperimentSetup setup;
  setup.name = "exp3";
  setup.integrand.j = [](const Vec2& x, double, const Vec2& z) {
    return 0.5 * (z + 0.5 * x).squaredNorm();
  };
  setup.integrand.j_u = [](const Vec2&, double, const Vec2&) { return 0.0; };
  setup.integrand.j_z = [](const Vec2& x, double, const Vec2& z) { return Vec2{z + 0.5 * x}; };
  setup.integrand.j_x = [](const Vec2& x, double, const Vec2& z) {
    return Vec2{0.5 * (z + 0.5 * x)};
  };
  setup.integrand.f = [](const Vec2&) { return 1.0; };
  setup.integrand.grad_f = [](const Vec2&) { return Vec2::Zero().eval(); };
  setup.target = {TargetShape::Kind::Ball, 0.0, 2.0 / std::sqrt(M_PI)};
  setup.mesh = {MeshSpec::Kind::SquareGrid, 8, 0.0, 0.0, {}};
  setup.penalty_m0 = 4.0;
  setup.penalty_mu_of_h = [](double h) { return 1.0 / std::sqrt(8.0 * h); };
  return setup;
}

std::pair<double, double> penalty_value_and_derivative(double volume,
                                                       const PenaltyConfig& config) {
  if (!(config.m0 > 0.0) || config.mu < 0.0)
    throw std::invalid_argument("penalty: need m0 > 0 and mu >= 0");
  const double gap = volume - config.m0;
  return {0.5 * config.mu * gap * gap, config.mu * gap};
}

}  // namespace winfty
