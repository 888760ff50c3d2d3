#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace winfty {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Hold-all domain D = (-2,2)^2.
inline constexpr double kDomainHalf = 2.0;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Signed area of triangle (a,b,c); positive for counter-clockwise order.
inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross2(b - a, c - a);
}

/// Conformal/anti-conformal split of a 2x2 matrix. Any A decomposes as
///   A = [E,-H; H,E] + [F,G; G,-F]
/// with singular values q+r and |q-r| for q = |(E,H)|, r = |(F,G)|.
struct ConformalSplit {
  double e, f, g, h;
  double q() const { return std::hypot(e, h); }
  double r() const { return std::hypot(f, g); }
};

inline ConformalSplit conformal_split(const Mat2& a) {
  return {0.5 * (a(0, 0) + a(1, 1)), 0.5 * (a(0, 0) - a(1, 1)),
          0.5 * (a(1, 0) + a(0, 1)), 0.5 * (a(1, 0) - a(0, 1))};
}

/// Largest singular value of a 2x2 matrix (spectral norm).
inline double spectral_norm(const Mat2& a) {
  const ConformalSplit s = conformal_split(a);
  return s.q() + s.r();
}

/// Smallest singular value of a 2x2 matrix.
inline double smallest_singular_value(const Mat2& a) {
  const ConformalSplit s = conformal_split(a);
  return std::abs(s.q() - s.r());
}

}  // namespace winfty
