#include "umbilic/sphere_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace umbilic {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

std::array<Vec3, 13> search_directions() {
  std::array<Vec3, 13> dirs{
      Vec3(1, 0, 0),  Vec3(0, 1, 0),  Vec3(0, 0, 1),  Vec3(1, 1, 1),  Vec3(1, -1, 1),
      Vec3(1, 1, -1), Vec3(-1, 1, 1), Vec3(1, 1, 0),  Vec3(1, -1, 0), Vec3(1, 0, 1),
      Vec3(1, 0, -1), Vec3(0, 1, 1),  Vec3(0, 1, -1)};
  for (auto& d : dirs) d.normalize();
  return dirs;
}

// Golden-section minimisation of g on [a, b].
template <class G>
std::pair<double, double> golden_section(G&& g, double a, double b, double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c), gd = g(d);
  while (std::abs(b - a) > tol) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  return gc < gd ? std::make_pair(c, gc) : std::make_pair(d, gd);
}

}  // namespace

SphereFit sphere_deviation(const Spaceform& space, std::span<const Vec3> points, const Vec3& center) {
  SphereFit fit;
  fit.center = center;
  if (!space.in_chart(center)) {
    fit.dist = std::numeric_limits<double>::infinity();
    return fit;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const Vec3& x : points) {
    const double d = space.geodesic_distance(x, center);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  fit.radius = 0.5 * (lo + hi);
  fit.dist = 0.5 * (hi - lo);
  return fit;
}

SphereFit fit_sphere_points(const Spaceform& space, std::span<const Vec3> points, const Vec3& start,
                            FitOptions options) {
  const auto dirs = search_directions();
  SphereFit best = sphere_deviation(space, points, start);
  if (!std::isfinite(best.dist)) throw FitError("sphere fit started outside the chart", best);

  double scale = 0.0;
  for (const Vec3& x : points) scale = std::max(scale, (x - start).norm());
  scale = std::max(scale, 1e-12);
  double step = 0.25 * scale;
  const double min_step = options.tolerance * scale;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (best.dist == 0.0 || step < min_step) break;
    bool improved = false;
    for (const Vec3& dir : dirs) {
      const Vec3 c0 = best.center;
      auto objective = [&](double t) { return sphere_deviation(space, points, c0 + t * dir).dist; };
      const auto [t, value] = golden_section(objective, -step, step, 1e-2 * step);
      if (value < best.dist * (1.0 - 1e-14)) {
        best = sphere_deviation(space, points, c0 + t * dir);
        improved = true;
      }
    }
    if (!improved) step *= 0.25;
  }
  best.iterations = it;
  if (it >= options.max_iterations) throw FitError("sphere fit did not converge", best);
  return best;
}

SphereFit fit_sphere_distance(const Hypersurface& M, FitOptions options) {
  const CurvatureField& F = M.curvature();
  Vec3 centroid = Vec3::Zero();
  double area = 0.0;
  for (const auto& node : F.nodes) {
    centroid += node.weight * node.x;
    area += node.weight;
  }
  centroid /= area;
  const std::vector<Vec3> pts = M.points();
  return fit_sphere_points(M.space(), pts, centroid, options);
}

}  // namespace umbilic
