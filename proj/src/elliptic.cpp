#include "umbilic/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/fpclassify.hpp>  // pchip.hpp uses unqualified isnan
#include <boost/math/interpolators/pchip.hpp>

#include "umbilic/errors.hpp"
#include "umbilic/levelset.hpp"
#include "umbilic/quadrature.hpp"
#include "umbilic/surfaces.hpp"

namespace umbilic {

namespace {

constexpr int n = kSurfaceDimension;
constexpr double kSmallRadius = 1e-8;

// Radial field f(|x|) in Euclidean coordinates.
AmbientField radial_field(std::string name, const RadialProfile& p) {
  return AmbientField::analytic(std::move(name), [p](const Vec3& x) {
    FieldJet jet;
    const double r = x.norm();
    jet.value = p.f(r);
    const double f2 = p.d2f(r);
    if (r < kSmallRadius) {
      jet.grad = f2 * x;
      jet.hess = f2 * Mat3::Identity();
      return jet;
    }
    const double f1 = p.df(r);
    const Vec3 e = x / r;
    jet.grad = f1 * e;
    const Mat3 radial = e * e.transpose();
    jet.hess = f2 * radial + (f1 / r) * (Mat3::Identity() - radial);
    return jet;
  });
}

}  // namespace

AmbientField TorsionSolution::field() const { return torsion_ball_field(space, r0); }

TorsionSolution torsion_solve_ball(const Spaceform& space, double r0) {
  if (!(r0 > 0.0) || !space.admits_radius(r0)) throw DomainError("torsion ball radius outside admissible range");
  TorsionSolution sol;
  sol.space = space;
  sol.r0 = r0;
  const int K = space.curvature();
  if (K == 0) {
    sol.f = [r0](double r) { return (r * r - r0 * r0) / (2.0 * (n + 1)); };
    sol.f_prime = [](double r) { return r / (n + 1); };
  } else {
    const double tp0 = space.theta_prime(r0);
    sol.f = [space, K, tp0](double r) { return (1.0 - space.theta_prime(r) / tp0) / ((n + 1) * K); };
    // d/dr ϑ' = -K ϑ
    sol.f_prime = [space, tp0](double r) { return space.theta(r) / ((n + 1) * tp0); };
  }
  sol.boundary_gradient = space.theta(r0) / ((n + 1) * space.theta_prime(r0));
  return sol;
}

IdentitySides reilly_sides(const Hypersurface& M, const AmbientField& f, int radial_nodes) {
  const Spaceform& space = M.space();
  const ConformalChart chart = space.chart();
  const int K = space.curvature();

  IdentitySides out;
  out.lhs = integrate_domain(
      M,
      [&](double r, const Vec3& xi) {
        const Vec3 x = chart_point(space, r, xi);
        const FieldJet jet = f.jet(x);
        const Mat3 hcov = chart.covariant_hessian(x, jet.grad, jet.hess);
        const double e2 = std::exp(2.0 * chart.psi(x));
        const double lap = hcov.trace() / e2;
        const double shifted = lap + (n + 1) * K * jet.value;
        const double norm_sq = (hcov + K * jet.value * e2 * Mat3::Identity()).squaredNorm() / (e2 * e2);
        return space.theta_prime(r) * (shifted * shifted - norm_sq);
      },
      radial_nodes);

  const CurvatureField& F = M.curvature();
  const TangentialData t = tangential_calculus(M, F, f);
  double rhs = 0.0;
  for (std::size_t q = 0; q < F.size(); ++q) {
    const CurvatureNode& p = F[q];
    const double dn = t.dnu[q];
    const double warp_term = 2.0 * dn * t.lap[q] + n * p.Hk[1] * dn * dn + t.h_grad[q] + 2.0 * n * K * t.f[q] * dn;
    const double dnu_warp = -K * p.u;  // ∂_ν ϑ'
    rhs += p.weight * (p.theta_prime * warp_term + dnu_warp * (t.grad_sq[q] - n * K * t.f[q] * t.f[q]));
  }
  out.rhs = rhs;
  out.residual = std::abs(out.lhs - out.rhs) / (std::abs(out.lhs) + std::abs(out.rhs) + 1.0);
  return out;
}

RadialProfile torsion_profile(double scale) {
  return {"torsion", [scale](double r) { return scale * (r * r - 1.0) / 6.0; },
          [scale](double r) { return scale * r / 3.0; }, [scale](double) { return scale / 3.0; }};
}

RadialProfile quartic_profile() {
  return {"quartic", [](double r) { return (r * r - 1.0) / 6.0 + (std::pow(r, 4) - 1.0) / 60.0; },
          [](double r) { return r / 3.0 + std::pow(r, 3) / 15.0; }, [](double r) { return 1.0 / 3.0 + r * r / 5.0; }};
}

RadialProfile exponential_profile() {
  return {"exponential", [](double r) { return (std::exp(r * r) - std::numbers::e) / 4.0; },
          [](double r) { return 0.5 * r * std::exp(r * r); },
          [](double r) { return 0.5 * (1.0 + 2.0 * r * r) * std::exp(r * r); }};
}

struct SerrinPair::Inverse {
  boost::math::interpolators::pchip<std::vector<double>> spline;
};

SerrinPair::SerrinPair(RadialProfile profile, double r0, int samples) : profile_(std::move(profile)), r0_(r0) {
  if (!(r0 > 0.0)) throw DomainError("Serrin pair needs a positive radius");
  if (samples < 8) throw DomainError("Serrin pair needs at least 8 inversion samples");
  if (std::abs(profile_.f(r0)) > 1e-12) throw DomainError("Serrin profile must vanish at r0");

  // samples uniform in q = r², where f is smooth in q near the center
  std::vector<double> ys(samples), qs(samples);
  for (int i = 0; i < samples; ++i) {
    qs[i] = r0 * r0 * i / (samples - 1.0);
    ys[i] = profile_.f(std::sqrt(qs[i]));
    if (i > 0 && !(ys[i] > ys[i - 1])) {
      std::ostringstream os;
      os << "Serrin profile is not strictly increasing near r = " << std::sqrt(qs[i]);
      throw DomainError(os.str());
    }
  }
  f_min_ = ys.front();
  for (int i = 0; i < samples; ++i) {
    if (!(laplacian(std::sqrt(qs[i])) > 0.0)) throw DomainError("Serrin profile needs a positive Laplacian");
  }
  inverse_ = std::make_shared<Inverse>(Inverse{{std::move(ys), std::move(qs)}});

  // R = (1/|M|) ∫_Ω φ(f) = r0^{-2} ∫_0^{r0} Δf r² dr
  const QuadratureRule rule = gauss_legendre(64, 0.0, r0);
  double integral = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double r = rule.nodes[k];
    integral += rule.weights[k] * phi(profile_.f(r)) * r * r;
  }
  R_ = integral / (r0 * r0);
  R_boundary_ = profile_.df(r0);
}

double SerrinPair::laplacian(double r) const {
  if (r < kSmallRadius) return (n + 1) * profile_.d2f(0.0);
  return profile_.d2f(r) + n * profile_.df(r) / r;
}

double SerrinPair::radius_of(double y) const {
  y = std::clamp(y, f_min_, 0.0);
  double q = std::clamp(inverse_->spline(y), 0.0, r0_ * r0_);
  for (int it = 0; it < 4; ++it) {
    const double r = std::sqrt(q);
    const double slope = r < kSmallRadius ? 0.5 * profile_.d2f(0.0) : profile_.df(r) / (2.0 * r);
    const double step = (profile_.f(r) - y) / slope;
    q = std::clamp(q - step, 0.0, r0_ * r0_);
    if (std::abs(step) <= 1e-17 * (1.0 + q)) break;
  }
  return std::sqrt(q);
}

double SerrinPair::phi(double y) const { return laplacian(radius_of(y)); }

double SerrinPair::Phi(double y) const {
  // Φ(y) = -∫_{r(y)}^{r0} Δf(t) f'(t) dt
  const double a = radius_of(y);
  const QuadratureRule rule = gauss_legendre(48, a, r0_);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * laplacian(rule.nodes[k]) * profile_.df(rule.nodes[k]);
  }
  return -sum;
}

AmbientField SerrinPair::field() const { return radial_field(profile_.name, profile_); }

SerrinPair serrin_pair_manufacture(const RadialProfile& profile, double r0) { return SerrinPair(profile, r0); }

SerrinTerms serrin_identity(const SerrinPair& pair, Resolution resolution, int radial_nodes) {
  const auto grid = SphereGrid::shared(resolution);
  const Spaceform flat(0);
  const AmbientField f = pair.field();
  const double r0 = pair.r0();
  const double R = pair.R();
  const double phi0 = pair.phi0();
  const QuadratureRule rule = gauss_legendre(radial_nodes, 0.0, r0);

  SerrinTerms t;
  double scale = 0.0, domain_phi = 0.0, domain_mixed = 0.0, domain_phi0 = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double r = rule.nodes[k];
    const double y = pair.profile().f(r);
    const double ph = pair.phi(y);
    const double Ph = pair.Phi(y);
    for (std::size_t q = 0; q < grid->size(); ++q) {
      const double w = rule.weights[k] * r * r * grid->weights()[q];
      const Vec3 x = r * grid->node(q);
      const CovariantHessian ch = covariant_hessian(flat, f, x);
      const double fx = f.value(x);
      t.lhs += w * (-fx) * ch.cs_deficit;
      scale += w * (-fx) * ch.hess.squaredNorm();
      domain_phi += w * (ph - phi0);
      domain_mixed += w * (ph - phi0) * (1.5 * Ph - (static_cast<double>(n) / (n + 1)) * fx * ph);
      domain_phi0 += w * (Ph - fx * ph);
    }
  }
  // q = φ(0)|x|²/(2(n+1)), so ∂_ν q = φ(0) r0/(n+1) on the sphere
  const double dnu_q = phi0 * r0 / (n + 1);
  for (std::size_t q = 0; q < grid->size(); ++q) {
    const Vec3& xi = grid->node(q);
    const Vec3 grad = f.gradient(r0 * xi);
    t.boundary += 0.5 * r0 * r0 * grid->weights()[q] * (grad.dot(xi) - dnu_q) * (grad.squaredNorm() - R * R);
  }
  t.r_term = 0.5 * R * R * domain_phi;
  t.phi_term = domain_mixed;
  t.phi0_term = 0.5 * phi0 * domain_phi0;
  t.rhs = t.boundary + t.r_term + t.phi_term + t.phi0_term;
  t.residual = std::abs(t.lhs - t.rhs) / (std::abs(t.lhs) + std::abs(t.rhs) + scale);
  return t;
}

SteklovResult steklov_identity_residual(const Hypersurface& M, const AmbientField& w, int radial_nodes) {
  if (M.space().curvature() != 0) throw UnsupportedSpaceError("Steklov identity is verified for K = 0 only");
  const Spaceform& space = M.space();
  const CurvatureField& F = M.curvature();

  SteklovResult out;
  out.min_boundary_gradient = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> nonzero;
  std::vector<double> dnu(F.size());
  double flux = 0.0;
  for (std::size_t q = 0; q < F.size(); ++q) {
    const FieldJet jet = w.jet(F[q].x);
    out.max_boundary_value = std::max(out.max_boundary_value, std::abs(jet.value));
    if (std::abs(jet.value) > 1e-8) nonzero.push_back(q);
    dnu[q] = jet.grad.dot(F[q].nu);
    out.min_boundary_gradient = std::min(out.min_boundary_gradient, jet.grad.norm());
    flux += F[q].weight * dnu[q] * dnu[q];
  }
  if (!nonzero.empty()) throw PreconditionError(describe_nodes("Steklov field must vanish on M", nonzero), nonzero);

  const double bilaplace = integrate_domain(
      M,
      [&](double r, const Vec3& xi) {
        const double lap = w.hessian(chart_point(space, r, xi)).trace();
        return lap * lap;
      },
      radial_nodes);
  const double traceless = integrate_domain(
      M, [&](double r, const Vec3& xi) { return covariant_hessian(space, w, chart_point(space, r, xi)).cs_deficit; },
      radial_nodes);

  out.rayleigh = bilaplace / flux;
  out.lhs = (n + 1) * traceless;
  double rhs = 0.0, deficit = 0.0;
  for (std::size_t q = 0; q < F.size(); ++q) {
    const double pinch = out.rayleigh - (n + 1) * F[q].Hk[1];
    rhs += F[q].weight * pinch * dnu[q] * dnu[q];
    deficit += F[q].weight * std::max(0.0, pinch);
  }
  out.rhs = n * rhs;
  out.deficit = deficit;
  out.raw_difference = out.lhs - out.rhs;
  out.residual = std::abs(out.raw_difference) / (std::abs(out.lhs) + std::abs(out.rhs) + n * bilaplace);
  return out;
}

HopfCheck hopf_gradient_check(const TorsionSolution& sol, Resolution resolution) {
  const Hypersurface M = geodesic_sphere(sol.space, sol.r0, resolution);
  const AmbientField f = sol.field();
  HopfCheck out;
  out.min_boundary_gradient = std::numeric_limits<double>::infinity();
  for (const auto& node : M.curvature().nodes) {
    out.min_boundary_gradient =
        std::min(out.min_boundary_gradient, covariant_hessian(sol.space, f, node.x).grad_norm);
  }
  // Δ̄f + a f >= b with a = (n+1)K, b = 1
  const int K = sol.space.curvature();
  const double a = (n + 1.0) * K;
  out.precondition_satisfied = a <= (n + 1.0) * std::max(0, K);
  bool negative_inside = true;
  for (int i = 0; i < 64; ++i) negative_inside = negative_inside && sol.f(sol.r0 * i / 64.0) < 0.0;
  out.positive = out.min_boundary_gradient > 0.0 && negative_inside;
  std::ostringstream os;
  os << "a = " << a << ", b = 1, interior sphere radius " << sol.r0;
  out.note = os.str();
  return out;
}

HopfCheck hopf_gradient_check(const SerrinPair& pair, Resolution resolution) {
  const Hypersurface M = geodesic_sphere(Spaceform(0), pair.r0(), resolution);
  const AmbientField f = pair.field();
  HopfCheck out;
  out.min_boundary_gradient = std::numeric_limits<double>::infinity();
  for (const auto& node : M.curvature().nodes) {
    out.min_boundary_gradient = std::min(out.min_boundary_gradient, f.gradient(node.x).norm());
  }
  double b = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 64; ++i) b = std::min(b, pair.laplacian(pair.r0() * i / 64.0));
  out.precondition_satisfied = b > 0.0;
  out.positive = out.min_boundary_gradient > 0.0 && pair.value_at_center() < 0.0;
  std::ostringstream os;
  os << "a = 0, b = min phi = " << b << ", interior sphere radius " << pair.r0();
  out.note = os.str();
  return out;
}

}  // namespace umbilic
