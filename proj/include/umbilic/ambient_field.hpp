#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "umbilic/spaceform.hpp"

namespace umbilic {

/// Value with coordinate gradient and coordinate Hessian at a chart point.
struct FieldJet {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
  Mat3 hess = Mat3::Zero();
};

/// Scalar field on the chart of a spaceform. Derivatives are plain
/// coordinate derivatives; covariant quantities are formed by the caller.
class AmbientField {
 public:
  enum class Mode { analytic, finite_difference };

  using ValueFn = std::function<double(const Vec3&)>;
  using JetFn = std::function<FieldJet(const Vec3&)>;

  static AmbientField analytic(std::string name, JetFn jet);
  /// Central differences of `value` with the given step: O(step²) accurate.
  static AmbientField finite_difference(std::string name, ValueFn value, double step = 1e-4);

  const std::string& name() const noexcept { return name_; }
  Mode mode() const noexcept { return mode_; }
  double step() const noexcept { return step_; }

  double value(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const { return jet(x).grad; }
  Mat3 hessian(const Vec3& x) const { return jet(x).hess; }
  FieldJet jet(const Vec3& x) const;

  /// scale * f + offset, same mode.
  AmbientField affine(double scale, double offset) const;
  /// Same values evaluated by finite differences of this field.
  AmbientField as_finite_difference(double step) const;

 private:
  AmbientField(std::string name, Mode mode, ValueFn value, JetFn jet, double step);

  std::string name_;
  Mode mode_;
  ValueFn value_;
  JetFn jet_;
  double step_ = 0.0;
};

/// f(x) = xᵀ A x + c (A symmetrised).
AmbientField quadratic_field(const Mat3& A, double c);

/// Radial field ϑ'(r(x)) where r is the geodesic distance from the chart origin.
AmbientField warp_prime_field(const Spaceform& space);

/// Torsion solution of Δ̄f + 3Kf = 1 on the geodesic ball of radius r0 about the origin.
AmbientField torsion_ball_field(const Spaceform& space, double r0);

/// Sum of monomials c · x^i y^j z^k.
struct Monomial {
  double coefficient = 0.0;
  std::array<int, 3> powers{0, 0, 0};
};
AmbientField polynomial_field(std::vector<Monomial> terms, std::string name = "polynomial");

/// All monomials of degree <= max_degree with coefficients uniform in [-1, 1],
/// drawn from stream `stream` of `seed`.
AmbientField random_polynomial_field(std::uint64_t seed, std::uint64_t stream, int max_degree = 4);

/// x²/1.44 + y² + z²/0.81 + 0.2 x⁴ + 0.1 y²z² - 1: a non-radial field whose
/// zero level is a convex, non-spherical surface.
AmbientField anisotropic_quartic_field();

/// Trilinear interpolation of samples on a regular box grid, values stored
/// with x fastest. Derivatives by central differences of the interpolant.
struct TabulatedGrid {
  Vec3 origin = Vec3::Zero();
  Vec3 spacing = Vec3::Ones();
  std::array<int, 3> dims{2, 2, 2};
  std::vector<double> values;
};
AmbientField tabulated_field(TabulatedGrid grid);

}  // namespace umbilic
