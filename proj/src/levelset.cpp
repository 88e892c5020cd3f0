#include "umbilic/levelset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "umbilic/errors.hpp"
#include "umbilic/quadrature.hpp"

namespace umbilic {

namespace {

constexpr int n = kSurfaceDimension;

double scan_limit(const Spaceform& space, const LevelOptions& options) {
  if (space.curvature() == 0) return options.search_radius;
  const double bound = std::min(space.chart_radius_bound(), space.coordinate_radius(space.radius_cap()));
  return bound * (1.0 - 1e-9);
}

}  // namespace

CovariantHessian covariant_hessian(const Spaceform& space, const AmbientField& f, const Vec3& x) {
  if (!space.in_chart(x)) throw DomainError("covariant_hessian: point outside chart");
  const ConformalChart chart = space.chart();
  const FieldJet jet = f.jet(x);
  CovariantHessian out;
  out.hess = chart.covariant_hessian(x, jet.grad, jet.hess);
  const double psi = chart.psi(x);
  const double e2 = std::exp(2.0 * psi);
  out.laplacian = out.hess.trace() / e2;
  const double norm_sq = out.hess.squaredNorm() / (e2 * e2);
  out.cs_deficit = norm_sq - out.laplacian * out.laplacian / (n + 1);
  out.grad_norm = jet.grad.norm() / std::exp(psi);
  return out;
}

Hypersurface extract_level(const Spaceform& space, const AmbientField& f, double level, Resolution resolution,
                           LevelOptions options) {
  auto grid = SphereGrid::shared(resolution);
  const double limit = scan_limit(space, options);
  const double g0 = f.value(Vec3::Zero()) - level;
  if (g0 == 0.0) throw LevelSetError("level set passes through the star center");

  std::vector<double> rho(grid->size());
  std::vector<std::size_t> failed;
  for (std::size_t q = 0; q < grid->size(); ++q) {
    const Vec3& xi = grid->node(q);
    auto g = [&](double s) { return f.value(s * xi) - level; };
    double lo = 0.0, glo = g0;
    bool found = false;
    for (int j = 1; j <= options.scan_steps; ++j) {
      const double hi = limit * j / options.scan_steps;
      const double ghi = g(hi);
      if (ghi == 0.0) {
        rho[q] = space.geodesic_radius(hi);
        found = true;
        break;
      }
      if ((ghi > 0.0) != (glo > 0.0)) {
        boost::uintmax_t iters = 100;
        const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                                               boost::math::tools::eps_tolerance<double>(50), iters);
        rho[q] = space.geodesic_radius(0.5 * (a + b));
        found = true;
        break;
      }
      lo = hi;
      glo = ghi;
    }
    if (!found) failed.push_back(q);
  }
  if (!failed.empty()) {
    std::ostringstream os;
    os << "level " << level << " is not starshaped about the origin within chart radius " << limit;
    throw LevelSetError(describe_nodes(os.str(), failed));
  }
  return Hypersurface(space, std::move(grid), std::move(rho));
}

HessianSffResidual hessian_vs_sff_residual(const Spaceform& space, const AmbientField& f, const Hypersurface& level) {
  const CurvatureField& F = level.curvature();
  const ConformalChart chart = space.chart();

  // Orientation of ν_f = -∇̄f/|∇̄f| against the outward normal, by majority.
  long votes = 0;
  for (const auto& node : F.nodes) votes += (-f.gradient(node.x).dot(node.nu_euclid) >= 0.0) ? 1 : -1;
  const double sigma = votes >= 0 ? 1.0 : -1.0;

  HessianSffResidual out;
  out.orientation_flipped = sigma < 0.0;
  for (const auto& node : F.nodes) {
    const FieldJet jet = f.jet(node.x);
    const Mat3 hcov = chart.covariant_hessian(node.x, jet.grad, jet.hess);
    const double e = std::exp(node.psi);
    const double grad_norm = jet.grad.norm() / e;
    const auto& X = node.tangents;
    Mat2 tangential;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) tangential(a, b) = X[a].dot(hcov * X[b]);
    }
    const Mat2 g_inv = node.g.inverse();
    const Mat2 E = tangential + grad_norm * sigma * node.h;
    out.residual = std::max(out.residual, std::sqrt(std::abs((g_inv * E * g_inv * E).trace())));

    // |∇̄f|²|Å|² = |∇̊²f(tan, tan)|² - (1/n)(∇̊²f(ν, ν))²
    const double lap = hcov.trace() / (e * e);
    const Mat3 traceless = hcov - (lap / (n + 1)) * (e * e) * Mat3::Identity();
    Mat2 T;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) T(a, b) = X[a].dot(traceless * X[b]);
    }
    const double nn = node.nu.dot(traceless * node.nu);
    const double rhs = (g_inv * T * g_inv * T).trace() - nn * nn / n;
    const double lhs = grad_norm * grad_norm * node.a_traceless_norm * node.a_traceless_norm;
    out.pointwise_residual = std::max(out.pointwise_residual, std::abs(lhs - rhs));
  }
  return out;
}

BandIntegral band_norm(const Spaceform& space, const AmbientField& f, const BandSpec& band) {
  if (!(band.level_cap > 0.0)) throw DomainError("band level cap must be positive");
  if (band.n_levels < 1) throw DomainError("band needs at least one level");
  BandIntegral out;
  const double f0 = f.value(Vec3::Zero());
  if (f0 == 0.0) throw LevelSetError("band: field vanishes at the star center");
  out.sign = f0 > 0.0 ? 1.0 : -1.0;
  out.max_abs_f = band.level_cap;
  out.min_gradient = std::numeric_limits<double>::infinity();

  const QuadratureRule rule = gauss_legendre(band.n_levels, 0.0, band.level_cap);
  out.levels = rule.nodes;
  out.level_weights = rule.weights;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Hypersurface Ms = extract_level(space, f, out.sign * rule.nodes[i], band.resolution, band.level_options);
    const CurvatureField& F = Ms.curvature();
    double slice = 0.0, umb = 0.0;
    for (const auto& node : F.nodes) {
      const CovariantHessian ch = covariant_hessian(space, f, node.x);
      if (!(ch.grad_norm > 0.0)) throw LevelSetError("band: vanishing gradient on a level set");
      out.min_gradient = std::min(out.min_gradient, ch.grad_norm);
      slice += node.weight * std::pow(std::max(0.0, ch.cs_deficit), 0.5 * band.p) / ch.grad_norm;
      umb += node.weight * std::pow(node.a_traceless_norm, band.p);
    }
    out.slice_integrals.push_back(slice);
    out.slice_umbilicity.push_back(umb);
    out.integral += rule.weights[i] * slice;
  }
  out.norm = std::pow(out.integral, 1.0 / band.p);
  return out;
}

Foliation foliate(const Spaceform& space, const AmbientField& f, double from_level, double to_level,
                  const std::vector<Vec3>& seeds, double gradient_floor) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 4>;
  const ConformalChart chart = space.chart();
  const double span = to_level - from_level;

  Foliation out;
  out.arc_lengths.resize(seeds.size(), 0.0);
  out.endpoints = seeds;
  out.min_gradient = std::numeric_limits<double>::infinity();
  if (span == 0.0) return out;

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    // τ ∈ [0, 1] ↦ level from + τ span; dx/dτ = span ∂f / |∂f|², dL/dτ = |span| e^ψ / |∂f|
    auto system = [&](const State& s, State& ds, double) {
      const Vec3 x(s[0], s[1], s[2]);
      if (!space.in_chart(x)) throw LevelSetError("foliation trajectory left the chart");
      const Vec3 grad = f.gradient(x);
      const double e = std::exp(chart.psi(x));
      const double gn = grad.norm();
      const double metric_norm = gn / e;
      out.min_gradient = std::min(out.min_gradient, metric_norm);
      if (!(metric_norm >= gradient_floor)) {
        std::ostringstream os;
        os << "gradient floor violated on trajectory " << i << " at (" << x.transpose() << "), |grad f| = " << metric_norm;
        throw LevelSetError(os.str());
      }
      const Vec3 v = (span / (gn * gn)) * grad;
      ds = {v[0], v[1], v[2], std::abs(span) * e / gn};
    };
    State state{seeds[i][0], seeds[i][1], seeds[i][2], 0.0};
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-10, 1e-10), system,
                               state, 0.0, 1.0, 1e-2);
    const Vec3 end(state[0], state[1], state[2]);
    out.endpoints[i] = end;
    out.arc_lengths[i] = state[3];
    out.max_level_error = std::max(out.max_level_error, std::abs(f.value(end) - to_level));
  }
  if (out.max_level_error > 1e-8) {
    std::ostringstream os;
    os << "foliation missed the target level by " << out.max_level_error;
    throw LevelSetError(os.str());
  }
  return out;
}

SliceChoice best_slice(const BandIntegral& band, const BandSpec& spec) {
  SliceChoice out;
  if (band.levels.empty()) return out;
  const auto it = std::min_element(band.slice_umbilicity.begin(), band.slice_umbilicity.end());
  out.index = static_cast<std::size_t>(it - band.slice_umbilicity.begin());
  out.level = band.levels[out.index];
  out.slice_norm = std::pow(*it, 1.0 / spec.p);
  out.bound = 2.0 * band.integral / (spec.level_cap * std::pow(band.min_gradient, spec.p - 1.0));
  out.ratio = out.bound > 0.0 ? *it / out.bound : 0.0;
  out.holds = *it <= out.bound * (1.0 + 1e-12) + 1e-14;
  return out;
}

SliceChoice best_slice(const Spaceform& space, const AmbientField& f, const BandSpec& band) {
  return best_slice(band_norm(space, f, band), band);
}

PipelineResult levelset_stability_pipeline(const Spaceform& space, const AmbientField& f, const BandSpec& band) {
  PipelineResult out;
  const Hypersurface M = extract_level(space, f, 0.0, band.resolution, band.level_options);
  out.fit = fit_sphere_distance(M);
  out.dist = out.fit.dist;
  out.area = M.curvature().area();

  const BandIntegral bi = band_norm(space, f, band);
  out.band_integral = bi.integral;
  out.max_abs_f = bi.max_abs_f;
  out.min_gradient = bi.min_gradient;
  for (const auto& node : M.curvature().nodes) {
    out.min_gradient = std::min(out.min_gradient, covariant_hessian(space, f, node.x).grad_norm);
  }
  out.slice = best_slice(bi, band);

  const double slice_level = bi.sign * out.slice.level;
  const Hypersurface slice = extract_level(space, f, slice_level, band.resolution, band.level_options);
  out.slice_dist = fit_sphere_distance(slice).dist;
  const Foliation fol = foliate(space, f, slice_level, 0.0, slice.points());
  out.transfer = *std::max_element(fol.arc_lengths.begin(), fol.arc_lengths.end());

  const double p = band.p;
  out.normalizer = std::min(out.max_abs_f, std::pow(out.area, 1.0 / n) * out.min_gradient);
  const double area_power = -(n - 3.0 * p) / (n * (p + 1.0));
  out.bound_rhs = std::pow(out.area, area_power) * std::pow(out.band_integral, 1.0 / (p + 1.0)) /
                  std::pow(out.normalizer, p / (p + 1.0));
  out.ratio = out.bound_rhs > 0.0 ? out.dist / out.bound_rhs : 0.0;
  return out;
}

}  // namespace umbilic
