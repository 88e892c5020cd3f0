#pragma once

#include <array>
#include <numbers>

#include <Eigen/Dense>

namespace umbilic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;

inline constexpr int kSurfaceDimension = 2;  // n; surfaces live in 3-dimensional spaceforms

/// Polar warp data at geodesic radius r: ϑ(r), ϑ'(r) and the primitive Θ with Θ(0) = 0.
struct Warp {
  double theta = 0.0;
  double theta_prime = 1.0;
  double Theta = 0.0;
};

class ConformalChart;

/// Simply connected 3-dimensional space of constant sectional curvature
/// K ∈ {-1, 0, 1}, written in geodesic polar coordinates as dr² + ϑ(r)² σ.
///
/// Points are handled in a conformally flat chart on a coordinate ball:
/// the identity for K = 0, the Poincaré ball for K = -1 and stereographic
/// projection of the open northern hemisphere for K = 1.
class Spaceform {
 public:
  explicit Spaceform(int curvature);
  Spaceform(int curvature, double radius_cap);

  static Spaceform euclidean() { return Spaceform(0); }
  static Spaceform hyperbolic() { return Spaceform(-1); }
  static Spaceform hemisphere() { return Spaceform(1); }

  int curvature() const noexcept { return curvature_; }
  /// Upper bound on admissible geodesic radii (exclusive).
  double radius_cap() const noexcept { return radius_cap_; }

  /// Throws DomainError unless 0 <= r < radius_cap().
  Warp warp(double r) const;
  double theta(double r) const;
  double theta_prime(double r) const;
  double theta_second(double r) const { return -curvature_ * theta(r); }

  /// Coordinate radius in the chart of the point at geodesic radius r.
  double coordinate_radius(double r) const;
  /// Geodesic distance from the origin of a chart point at coordinate radius s.
  double geodesic_radius(double s) const;
  /// Exclusive bound on chart coordinate radii.
  double chart_radius_bound() const;
  bool in_chart(const Vec3& x) const;
  bool admits_radius(double r) const noexcept { return r >= 0.0 && r < radius_cap_; }

  /// Closed-form geodesic distance between chart points.
  double geodesic_distance(const Vec3& a, const Vec3& b) const;

  ConformalChart chart() const;

  friend bool operator==(const Spaceform&, const Spaceform&) = default;

 private:
  int curvature_;
  double radius_cap_;
};

Warp warp_eval(const Spaceform& space, double r);
double geodesic_distance(const Spaceform& space, const Vec3& a, const Vec3& b);

/// Christoffel symbols Γ^α_{βγ} in chart coordinates, indexed [α](β, γ).
using Christoffel = std::array<Mat3, 3>;

/// Conformal exponent ψ of the chart metric ḡ = e^{2ψ} <·,·>.
class ConformalChart {
 public:
  explicit ConformalChart(int curvature) : curvature_(curvature) {}

  int curvature() const noexcept { return curvature_; }
  double psi(const Vec3& x) const;
  Vec3 grad_psi(const Vec3& x) const;
  Mat3 hess_psi(const Vec3& x) const;
  double conformal_factor(const Vec3& x) const;  // e^{ψ}
  Christoffel christoffel(const Vec3& x) const;

  /// Covariant Hessian components ∇̄²f_{βγ} = ∂²f − Γ^α_{βγ} ∂_α f.
  Mat3 covariant_hessian(const Vec3& x, const Vec3& grad, const Mat3& hess) const;

 private:
  int curvature_;
};

ConformalChart conformal_model(const Spaceform& space);

}  // namespace umbilic
