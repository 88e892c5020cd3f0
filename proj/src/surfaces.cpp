#include "umbilic/surfaces.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "umbilic/errors.hpp"

namespace umbilic {

std::vector<SphericalMode> default_perturbation_modes() { return {{2, 0, 0.6}, {3, 2, 0.4}}; }

double mode_sum(const std::vector<SphericalMode>& modes, const Vec3& xi) {
  double sum = 0.0;
  for (const auto& mode : modes) sum += mode.coefficient * real_spherical_harmonic(mode.l, mode.m, xi);
  return sum;
}

Hypersurface geodesic_sphere(const Spaceform& space, double r, Resolution resolution, const Vec3& center) {
  if (!(r > 0.0)) throw DomainError("sphere radius must be positive");
  if (center.isZero(0.0)) return Hypersurface::build(space, [r](const Vec3&) { return r; }, resolution);

  if (!space.in_chart(center)) throw DomainError("sphere center outside the chart");
  if (space.geodesic_distance(Vec3::Zero(), center) >= r) {
    throw DomainError("off-center sphere must contain the chart origin");
  }
  const double bound = std::min(space.chart_radius_bound(), space.coordinate_radius(space.radius_cap()));
  const double upper = std::isfinite(bound) ? bound * (1.0 - 1e-12) : center.norm() + r + 1.0;
  return Hypersurface::build(
      space,
      [&](const Vec3& xi) {
        auto excess = [&](double s) { return space.geodesic_distance(s * xi, center) - r; };
        if (excess(upper) <= 0.0) throw DomainError("sphere leaves the admissible chart region");
        boost::uintmax_t iters = 200;
        const auto [lo, hi] = boost::math::tools::toms748_solve(
            excess, 0.0, upper, excess(0.0), excess(upper), boost::math::tools::eps_tolerance<double>(52), iters);
        return space.geodesic_radius(0.5 * (lo + hi));
      },
      resolution);
}

Hypersurface ellipsoid(const Spaceform& space, double a, double b, double c, Resolution resolution,
                       const Vec3& center) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw DomainError("ellipsoid semi-axes must be positive");
  const Vec3 inv_sq(1.0 / (a * a), 1.0 / (b * b), 1.0 / (c * c));
  if (center.isZero(0.0)) {
    return Hypersurface::build(
        space, [inv_sq](const Vec3& xi) { return 1.0 / std::sqrt(xi.cwiseAbs2().dot(inv_sq)); }, resolution);
  }
  if (space.curvature() != 0) throw UnsupportedSpaceError("shifted ellipsoids are only defined for K = 0");
  if (center.cwiseAbs2().dot(inv_sq) >= 1.0) throw DomainError("shifted ellipsoid must contain the origin");
  // Σ (s ξ_i - c_i)² / a_i² = 1, positive root
  return Hypersurface::build(
      space,
      [&](const Vec3& xi) {
        const double A = xi.cwiseAbs2().dot(inv_sq);
        const double B = -2.0 * xi.cwiseProduct(center).dot(inv_sq);
        const double C = center.cwiseAbs2().dot(inv_sq) - 1.0;
        const double disc = std::sqrt(B * B - 4.0 * A * C);
        return B > 0.0 ? -2.0 * C / (B + disc) : (disc - B) / (2.0 * A);
      },
      resolution);
}

Hypersurface perturbed_sphere(const Spaceform& space, double r0, double eps,
                              const std::vector<SphericalMode>& modes, Resolution resolution) {
  return Hypersurface::build(space, [&](const Vec3& xi) { return r0 + eps * mode_sum(modes, xi); }, resolution);
}

}  // namespace umbilic
