#pragma once

#include <span>

#include "umbilic/errors.hpp"
#include "umbilic/hypersurface.hpp"

namespace umbilic {

struct SphereFit {
  Vec3 center = Vec3::Zero();  // chart point
  double radius = 0.0;         // geodesic
  double dist = 0.0;           // max_q |d(x_q, center) - radius|
  int iterations = 0;
};

class FitError : public NumericalError {
 public:
  FitError(const std::string& what, SphereFit best) : NumericalError(what), best_(best) {}
  const SphereFit& best() const noexcept { return best_; }

 private:
  SphereFit best_;
};

struct FitOptions {
  int max_iterations = 400;
  double tolerance = 1e-12;  // on the search step, relative to the surface size
};

/// Geodesic sphere minimising the Chebyshev radial deviation of M.
SphereFit fit_sphere_distance(const Hypersurface& M, FitOptions options = {});

/// Same objective for a point cloud, starting from `start`.
SphereFit fit_sphere_points(const Spaceform& space, std::span<const Vec3> points, const Vec3& start,
                            FitOptions options = {});

/// Chebyshev deviation of the points from the best sphere about `center`.
SphereFit sphere_deviation(const Spaceform& space, std::span<const Vec3> points, const Vec3& center);

}  // namespace umbilic
