#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "umbilic/deficits.hpp"
#include "umbilic/errors.hpp"
#include "umbilic/surfaces.hpp"

using namespace umbilic;

namespace {

constexpr double pi = std::numbers::pi;

// ∫ g(H, K) dA over the ellipsoid with semi-axes (a, b, c), from the
// (θ, φ) parametrisation and the closed-form curvatures.
template <class G>
double ellipsoid_integral(double a, double b, double c, G&& g) {
  using boost::math::quadrature::gauss;
  auto ring = [&](double t) {
    return gauss<double, 60>::integrate(
        [&](double p) {
          const Vec3 x(a * std::sin(t) * std::cos(p), b * std::sin(t) * std::sin(p), c * std::cos(t));
          const Vec3 xt(a * std::cos(t) * std::cos(p), b * std::cos(t) * std::sin(p), -c * std::sin(t));
          const Vec3 xp(-a * std::sin(t) * std::sin(p), b * std::sin(t) * std::cos(p), 0.0);
          const double w = x.x() * x.x() / std::pow(a, 4) + x.y() * x.y() / std::pow(b, 4) + x.z() * x.z() / std::pow(c, 4);
          const double abc2 = a * a * b * b * c * c;
          const double H = (a * a + b * b + c * c - x.squaredNorm()) / (2 * abc2 * std::pow(w, 1.5));
          const double K = 1.0 / (abc2 * w * w);
          return g(H, K) * xt.cross(xp).norm();
        },
        0.0, 2 * pi);
  };
  return gauss<double, 60>::integrate(ring, 0.0, pi);
}

}  // namespace

TEST_CASE("deficits vanish on geodesic spheres") {
  for (int K : {-1, 0, 1}) {
    for (double r : {0.4, 0.9, 1.3}) {
      const auto M = geodesic_sphere(Spaceform(K), r, {32, 64});
      CHECK(std::abs(hk_deficit(M).value) < 1e-9);
      CHECK(std::abs(cmc_deficit(M).value) < 1e-9);
      CHECK(std::abs(cfc_deficit(M, 1, 0).value) < 1e-9);
      CHECK(std::abs(cfc_deficit(M, 1, 1).value) < 1e-9);
      if (K == 0) CHECK(std::abs(af_deficit(M, 1).value) < 1e-12);
      if (K == 0) CHECK(std::abs(af_deficit(M, 2).value) < 1e-12);
    }
  }
}

TEST_CASE("CMC reference constant equals H1 on a sphere, n times that when literal") {
  const auto M = geodesic_sphere(Spaceform(0), 1.5, {32, 64});
  CHECK(cmc_deficit(M).reference_constant == doctest::Approx(1 / 1.5).epsilon(1e-12));
  CHECK(cmc_deficit(M, CmcConstant::literal).reference_constant == doctest::Approx(2 / 1.5).epsilon(1e-12));
}

TEST_CASE("HK deficit of the ellipsoid against parametric quadrature") {
  const double a = 1.2, b = 1.0, c = 1.0;
  const auto M = ellipsoid(Spaceform(0), a, b, c, {64, 128});
  const double inv_mean = ellipsoid_integral(a, b, c, [](double H, double) { return 1.0 / H; });
  const double expected = inv_mean - 3 * (4 * pi * a * b * c / 3);
  const auto report = hk_deficit(M);
  CHECK(report.value == doctest::Approx(expected).epsilon(1e-9));
  CHECK(report.value > 0.0);
}

TEST_CASE("quermassintegrals of a triaxial ellipsoid") {
  const double a = 1.3, b = 1.0, c = 0.8;
  const auto M = ellipsoid(Spaceform(0), a, b, c, {64, 128});
  const auto W = quermassintegrals(M);
  CHECK(W[0] == doctest::Approx(4 * pi * a * b * c / 3).epsilon(1e-12));
  CHECK(W[1] == doctest::Approx(ellipsoid_integral(a, b, c, [](double, double) { return 1.0; }) / 3).epsilon(1e-10));
  CHECK(W[2] == doctest::Approx(ellipsoid_integral(a, b, c, [](double H, double) { return H; }) / 3).epsilon(1e-10));
  CHECK(W[3] == doctest::Approx(4 * pi / 3).epsilon(1e-10));
  const auto Wn = normalized_quermassintegrals(M);
  CHECK(Wn[3] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("AF deficit") {
  const auto M = ellipsoid(Spaceform(0), 1.2, 1.0, 0.9, {32, 64});
  const auto W = normalized_quermassintegrals(M);
  CHECK(af_deficit(M, 1).value == doctest::Approx(W[2] - std::sqrt(W[1])).epsilon(1e-14));
  CHECK(af_deficit(M, 1).value > 0.0);
  CHECK(af_deficit(M, 2).value == doctest::Approx(W[3] - 1.0).epsilon(1e-14).scale(1.0));
  CHECK_THROWS_AS(af_deficit(geodesic_sphere(Spaceform(-1), 1.0, {16, 32}), 1), UnsupportedSpaceError);
  CHECK_THROWS_AS(af_deficit(M, 0), DomainError);
}

TEST_CASE("Hsiung identities hold to round-off") {
  for (int K : {-1, 0, 1}) {
    const auto M = perturbed_sphere(Spaceform(K), 1.0, 0.1, default_perturbation_modes(), {32, 64});
    for (int k : {0, 1}) CHECK(hsiung_sides(M, k).residual < 1e-10);
  }
}

TEST_CASE("preconditions are enforced") {
  // strongly dented: mean curvature changes sign
  const auto dented = perturbed_sphere(Spaceform(0), 1.0, 0.35, {{4, 0, 1.0}, {6, 3, 0.5}}, {32, 64});
  bool mean_convex = true;
  for (const auto& p : dented.curvature().nodes) mean_convex = mean_convex && p.Hk[1] > 0;
  REQUIRE_FALSE(mean_convex);
  CHECK_THROWS_AS(hk_deficit(dented), PreconditionError);
  CHECK_THROWS_AS(cfc_deficit(dented, 1, 0), PreconditionError);
  CHECK_THROWS_AS(cfc_deficit(dented, 2, 0), DomainError);
}

TEST_CASE("deficit reports serialise") {
  const auto M = ellipsoid(Spaceform(0), 1.2, 1.0, 1.0, {16, 32});
  const auto json = hk_deficit(M).to_json();
  CHECK(json.find("\"name\":\"HK\"") != std::string::npos);
  CHECK(json.find("\"refinement_residual\":null") != std::string::npos);
}
