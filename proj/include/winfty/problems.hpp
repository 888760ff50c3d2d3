#pragma once

#include "winfty/geometry.hpp"

#include <functional>
#include <optional>
#include <string>

namespace winfty {

/// Cost integrand j(x,u,z) with the partials consumed by the adjoint equation
/// and the shape derivative, plus the PDE right-hand side f and its gradient.
struct CostIntegrand {
  std::function<double(const Vec2&, double, const Vec2&)> j;
  std::function<Vec2(const Vec2&, double, const Vec2&)> j_x;
  std::function<double(const Vec2&, double, const Vec2&)> j_u;
  std::function<Vec2(const Vec2&, double, const Vec2&)> j_z;
  std::function<double(const Vec2&)> f;
  std::function<Vec2(const Vec2&)> grad_f;
};

struct PenaltyConfig {
  double m0 = 0.0;  // target volume
  double mu = 0.0;  // penalty weight
};

/// Analytic complement distance of a target shape (ball or annulus about the origin).
struct TargetShape {
  enum class Kind { Ball, Annulus };
  Kind kind = Kind::Ball;
  double r_inner = 0.0;  // unused for balls
  double r_outer = 0.0;  // ball radius, or outer annulus radius
};

double target_distance(const TargetShape& shape, const Vec2& x);

/// Initial mesh description for an experiment or a run configuration.
struct MeshSpec {
  enum class Kind { SquareGrid, Annulus, File };
  Kind kind = Kind::SquareGrid;
  int n = 8;                 // squares per side, or angular segments
  double r_inner = 0.0;
  double r_outer = 0.0;
  std::string path;          // mesh file, Kind::File only
};

struct ExperimentSetup {
  std::string name;
  CostIntegrand integrand;
  TargetShape target;
  MeshSpec mesh;
  double penalty_m0 = 0.0;
  std::function<double(double)> penalty_mu_of_h;  // empty when no volume penalty

  bool has_penalty() const { return static_cast<bool>(penalty_mu_of_h); }
  std::optional<PenaltyConfig> penalty_at(double h) const {
    if (!has_penalty()) return std::nullopt;
    return PenaltyConfig{penalty_m0, penalty_mu_of_h(h)};
  }
};

/// Tracking of u_d(x) = 4/pi - |x|^2 with f = 1; optimal shape is the ball of
/// radius 4/sqrt(3 pi).
ExperimentSetup experiment1();

/// Tracking with a log-singular u_d and f = 5; optimal shape is the annulus
/// between radii 1/sqrt(pi) and 2/sqrt(pi).
ExperimentSetup experiment2();

/// Gradient matching j = |z + x/2|^2 / 2 with f = 1 and a volume penalty
/// (m0 = 4, mu = (8h)^{-1/2}); optimal shape is the ball of radius 2/sqrt(pi).
ExperimentSetup experiment3();

/// Quadratic volume penalty: value mu/2 (vol - m0)^2 and the scalar coefficient
/// mu (vol - m0) multiplying the divergence integral in the derivative.
std::pair<double, double> penalty_value_and_derivative(double volume, const PenaltyConfig& config);

}  // namespace winfty
