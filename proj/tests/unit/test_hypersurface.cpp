#include <doctest.h>

#include <cmath>
#include <numbers>

#include "umbilic/errors.hpp"
#include "umbilic/hypersurface.hpp"
#include "umbilic/surfaces.hpp"

using namespace umbilic;

namespace {

constexpr double pi = std::numbers::pi;
const Resolution kRes{32, 64};

// Mean and Gauss curvature of the ellipsoid x²/a² + y²/b² + z²/c² = 1 at x.
std::pair<double, double> ellipsoid_curvatures(const Vec3& x, double a, double b, double c) {
  const double w = x.x() * x.x() / std::pow(a, 4) + x.y() * x.y() / std::pow(b, 4) + x.z() * x.z() / std::pow(c, 4);
  const double abc2 = a * a * b * b * c * c;
  const double mean = (a * a + b * b + c * c - x.squaredNorm()) / (2 * abc2 * std::pow(w, 1.5));
  const double gauss = 1.0 / (abc2 * w * w);
  return {mean, gauss};
}

}  // namespace

TEST_CASE("Euclidean sphere of radius 2") {
  const auto M = geodesic_sphere(Spaceform(0), 2.0, kRes);
  const auto& F = M.curvature();
  for (const auto& p : F.nodes) {
    CHECK(p.kappa[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p.kappa[1] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p.u == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(p.a_traceless_norm < 1e-10);
  }
  CHECK(F.area() == doctest::Approx(16 * pi).epsilon(1e-13));
  CHECK(enclosed_volume(M) == doctest::Approx(32 * pi / 3).epsilon(1e-13));
}

TEST_CASE("geodesic spheres in the hyperbolic and spherical charts") {
  const auto H = geodesic_sphere(Spaceform(-1), 1.0, kRes);
  for (const auto& p : H.curvature().nodes) {
    CHECK(p.Hk[1] == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-10));
    CHECK(p.u == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
  }
  CHECK(H.curvature().area() == doctest::Approx(4 * pi * std::pow(std::sinh(1.0), 2)).epsilon(1e-12));
  CHECK(enclosed_volume(H) == doctest::Approx(pi * (std::sinh(2.0) - 2.0)).epsilon(1e-12));

  const auto S = geodesic_sphere(Spaceform(1), 1.0, kRes);
  for (const auto& p : S.curvature().nodes) CHECK(p.Hk[2] == doctest::Approx(std::pow(std::tan(1.0), -2)).epsilon(1e-11));
  CHECK(S.curvature().area() == doctest::Approx(4 * pi * std::pow(std::sin(1.0), 2)).epsilon(1e-12));
}

TEST_CASE("off-centre hyperbolic sphere is umbilic with coth curvature") {
  const Spaceform space(-1);
  const auto M = geodesic_sphere(space, 0.8, kRes, Vec3(0.15, -0.05, 0.1));
  for (const auto& p : M.curvature().nodes) {
    CHECK(p.Hk[1] == doctest::Approx(1.0 / std::tanh(0.8)).epsilon(1e-9));
    CHECK(p.a_traceless_norm < 1e-8);
  }
  CHECK(M.curvature().area() == doctest::Approx(4 * pi * std::pow(std::sinh(0.8), 2)).epsilon(1e-10));
}

TEST_CASE("Euclidean ellipsoid curvature matches the closed form") {
  const double a = 1.2, b = 1.0, c = 0.9;
  const auto M = ellipsoid(Spaceform(0), a, b, c, {64, 128});
  double err = 0.0;
  for (const auto& p : M.curvature().nodes) {
    const auto [mean, gauss] = ellipsoid_curvatures(p.x, a, b, c);
    err = std::max({err, std::abs(p.Hk[1] - mean), std::abs(p.Hk[2] - gauss)});
  }
  CHECK(err < 1e-9);
  CHECK(enclosed_volume(M) == doctest::Approx(4 * pi * a * b * c / 3).epsilon(1e-12));
}

TEST_CASE("domain integral of the warp derivative over a hyperbolic ball") {
  const auto M = geodesic_sphere(Spaceform(-1), 1.0, kRes);
  const double v = integrate_domain(M, [](double r, const Vec3&) { return std::cosh(r); });
  CHECK(v == doctest::Approx(4 * pi * std::pow(std::sinh(1.0), 3) / 3).epsilon(1e-13));
}

TEST_CASE("tangential calculus on spheres") {
  SUBCASE("height function on the unit sphere") {
    const auto M = geodesic_sphere(Spaceform(0), 1.0, kRes);
    const auto f = polynomial_field({{1.0, {0, 0, 1}}});
    const auto T = tangential_calculus(M, M.curvature(), f);
    for (std::size_t q = 0; q < M.size(); ++q) {
      const double z = M.grid().node(q).z();
      CHECK(T.lap[q] == doctest::Approx(-2 * z).epsilon(1e-11).scale(1.0));
      CHECK(T.grad_sq[q] == doctest::Approx(1 - z * z).epsilon(1e-11).scale(1.0));
      CHECK(T.dnu[q] == doctest::Approx(z).epsilon(1e-12).scale(1.0));
      CHECK(T.h_grad[q] == doctest::Approx(1 - z * z).epsilon(1e-11).scale(1.0));
    }
  }
  SUBCASE("chart height on a hyperbolic sphere is a first eigenfunction") {
    const double r = 0.9;
    const auto M = geodesic_sphere(Spaceform(-1), r, kRes);
    const auto f = polynomial_field({{1.0, {0, 0, 1}}});
    const auto T = tangential_calculus(M, M.curvature(), f);
    for (std::size_t q = 0; q < M.size(); ++q) {
      CHECK(T.lap[q] == doctest::Approx(-2 * T.f[q] / std::pow(std::sinh(r), 2)).epsilon(1e-10).scale(1.0));
    }
  }
  SUBCASE("radial field is constant on a centred sphere") {
    const Spaceform space(1);
    const auto M = geodesic_sphere(space, 0.7, kRes);
    const auto T = tangential_calculus(M, M.curvature(), warp_prime_field(space));
    for (std::size_t q = 0; q < M.size(); ++q) {
      CHECK(std::abs(T.lap[q]) < 1e-10);
      CHECK(T.dnu[q] == doctest::Approx(-std::sin(0.7)).epsilon(1e-10));
    }
  }
}

TEST_CASE("invalid radial graphs are rejected") {
  CHECK_THROWS_AS(geodesic_sphere(Spaceform(1), 1.6, kRes), DomainError);
  CHECK_THROWS_AS(perturbed_sphere(Spaceform(0), 0.1, 1.0, default_perturbation_modes(), kRes), DomainError);
  CHECK_THROWS_AS(ellipsoid(Spaceform(-1), 1, 1, 1, kRes, Vec3(0.1, 0, 0)), UnsupportedSpaceError);
}

TEST_CASE("curvature cache is shared between copies") {
  const auto M = perturbed_sphere(Spaceform(0), 1.0, 0.1, default_perturbation_modes(), kRes);
  const Hypersurface copy = M;
  CHECK(&M.curvature() == &copy.curvature());
}
