#pragma once

#include <functional>
#include <memory>
#include <string>

#include "umbilic/ambient_field.hpp"
#include "umbilic/hypersurface.hpp"

namespace umbilic {

/// Radial solution of Δ̄f + 3Kf = 1, f = 0 on the geodesic sphere of radius r0.
struct TorsionSolution {
  Spaceform space{0};
  double r0 = 1.0;
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  double boundary_gradient = 0.0;  // f'(r0) = ϑ(r0) / (3 ϑ'(r0))
  AmbientField field() const;
};

TorsionSolution torsion_solve_ball(const Spaceform& space, double r0);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / (|lhs| + |rhs| + 1)
};

/// Both sides of the Reilly-type formula for an arbitrary field on Ω.
IdentitySides reilly_sides(const Hypersurface& M, const AmbientField& f, int radial_nodes = 64);
inline double reilly_residual(const Hypersurface& M, const AmbientField& f, int radial_nodes = 64) {
  return reilly_sides(M, f, radial_nodes).residual;
}

/// Radial profile with analytic derivatives, r ↦ f(r).
struct RadialProfile {
  std::string name;
  std::function<double(double)> f, df, d2f;
};

RadialProfile torsion_profile(double scale = 1.0);  // scale (r² - 1)/6
RadialProfile quartic_profile();                    // (r² - 1)/6 + (r⁴ - 1)/60
RadialProfile exponential_profile();                // (e^{r²} - e)/4

/// Euclidean pair (f, φ) with Δf = φ(f) on the ball of radius r0.
class SerrinPair {
 public:
  SerrinPair(RadialProfile profile, double r0, int samples = 512);

  const RadialProfile& profile() const noexcept { return profile_; }
  double r0() const noexcept { return r0_; }
  double value_at_center() const noexcept { return f_min_; }

  /// Radius where the profile takes the value y.
  double radius_of(double y) const;
  double phi(double y) const;
  double Phi(double y) const;  // ∫_0^y φ
  double phi0() const { return phi(0.0); }
  double laplacian(double r) const;  // f'' + (2/r) f'

  /// (1/|M|) ∫_Ω φ(f), and the mean boundary derivative f'(r0).
  double R() const noexcept { return R_; }
  double R_boundary() const noexcept { return R_boundary_; }

  AmbientField field() const;

 private:
  RadialProfile profile_;
  double r0_;
  double f_min_;
  double R_ = 0.0;
  double R_boundary_ = 0.0;
  struct Inverse;
  std::shared_ptr<const Inverse> inverse_;
};

SerrinPair serrin_pair_manufacture(const RadialProfile& profile, double r0);

struct SerrinTerms {
  double lhs = 0.0;           // ∫_Ω (-f) |∇̊²f|²
  double boundary = 0.0;      // ½ ∫_M (∂_ν f - ∂_ν q)(|∇̄f|² - R²)
  double r_term = 0.0;        // (R²/2) ∫_Ω (φ - φ(0))
  double phi_term = 0.0;      // ∫_Ω (φ - φ(0))((3/2)Φ - (2/3) f φ)
  double phi0_term = 0.0;     // (φ(0)/2) ∫_Ω (Φ - f φ)
  double rhs = 0.0;
  double residual = 0.0;      // |lhs - rhs| / (|lhs| + |rhs| + scale)
};

SerrinTerms serrin_identity(const SerrinPair& pair, Resolution resolution = {32, 64}, int radial_nodes = 64);
inline double serrin_identity_residual(const SerrinPair& pair, Resolution resolution = {32, 64},
                                       int radial_nodes = 64) {
  return serrin_identity(pair, resolution, radial_nodes).residual;
}

struct SteklovResult {
  double residual = 0.0;
  double rayleigh = 0.0;          // μ = ∫_Ω (Δw)² / ∫_M (∂_ν w)²
  double deficit = 0.0;           // ∫_M (μ - 3 H_1)_+
  double lhs = 0.0;               // 3 ∫_Ω |∇̊²w|²
  double rhs = 0.0;               // 2 ∫_M (μ - 3 H_1)(∂_ν w)²
  double raw_difference = 0.0;    // lhs - rhs
  double max_boundary_value = 0.0;
  double min_boundary_gradient = 0.0;
};

/// K = 0 only; w must vanish on M (|w| <= 1e-8 at the nodes).
SteklovResult steklov_identity_residual(const Hypersurface& M, const AmbientField& w, int radial_nodes = 64);

struct HopfCheck {
  double min_boundary_gradient = 0.0;
  bool positive = false;
  bool precondition_satisfied = true;
  std::string note;
};

HopfCheck hopf_gradient_check(const TorsionSolution& sol, Resolution resolution = {32, 64});
HopfCheck hopf_gradient_check(const SerrinPair& pair, Resolution resolution = {32, 64});

}  // namespace umbilic
