#pragma once

#include <vector>

#include "umbilic/hypersurface.hpp"

namespace umbilic {

struct SphericalMode {
  int l = 2;
  int m = 0;
  double coefficient = 1.0;
};

/// Degree-2 and degree-3 combination used by every perturbation family.
std::vector<SphericalMode> default_perturbation_modes();

double mode_sum(const std::vector<SphericalMode>& modes, const Vec3& xi);

/// Geodesic sphere of radius r about a chart point; the chart origin must lie inside.
Hypersurface geodesic_sphere(const Spaceform& space, double r, Resolution resolution = {},
                             const Vec3& center = Vec3::Zero());

/// Radial graph ρ(ξ) = (Σ ξ_i² / a_i²)^{-1/2} in geodesic radius. For K = 0 this
/// is the ellipsoid with semi-axes (a, b, c); `center` shifts it (K = 0 only).
Hypersurface ellipsoid(const Spaceform& space, double a, double b, double c, Resolution resolution = {},
                       const Vec3& center = Vec3::Zero());

/// ρ(ξ) = r0 + eps Σ c_i Y_{l_i m_i}(ξ).
Hypersurface perturbed_sphere(const Spaceform& space, double r0, double eps,
                              const std::vector<SphericalMode>& modes, Resolution resolution = {});

}  // namespace umbilic
