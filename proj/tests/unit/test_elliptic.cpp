#include <doctest.h>

#include <cmath>
#include <numbers>

#include "umbilic/elliptic.hpp"
#include "umbilic/errors.hpp"
#include "umbilic/surfaces.hpp"

using namespace umbilic;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("torsion boundary gradients") {
  CHECK(torsion_solve_ball(Spaceform(0), 1.0).boundary_gradient == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(torsion_solve_ball(Spaceform(-1), 1.0).boundary_gradient == doctest::Approx(std::tanh(1.0) / 3).epsilon(1e-14));
  CHECK(torsion_solve_ball(Spaceform(1), pi / 4).boundary_gradient == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("torsion solutions solve the boundary value problem") {
  for (int K : {-1, 0, 1}) {
    const Spaceform space(K);
    const auto sol = torsion_solve_ball(space, 0.9);
    CHECK(std::abs(sol.f(0.9)) < 1e-15);
    // radial Laplacian f'' + 2 (ϑ'/ϑ) f' + 3K f = 1 by differences
    for (double r : {0.2, 0.5, 0.8}) {
      const double h = 1e-4;
      const double f2 = (sol.f(r + h) - 2 * sol.f(r) + sol.f(r - h)) / (h * h);
      const double lap = f2 + 2 * space.theta_prime(r) / space.theta(r) * sol.f_prime(r);
      CHECK(lap + 3 * K * sol.f(r) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK((sol.f(r + h) - sol.f(r - h)) / (2 * h) == doctest::Approx(sol.f_prime(r)).epsilon(1e-8));
    }
    const auto hopf = hopf_gradient_check(sol, {16, 32});
    CHECK(hopf.positive);
    CHECK(hopf.precondition_satisfied);
    CHECK(hopf.min_boundary_gradient == doctest::Approx(sol.boundary_gradient).epsilon(1e-10));
  }
}

TEST_CASE("Reilly formula on the unit ball has both sides 8 pi / 9") {
  const Spaceform space(0);
  const auto M = geodesic_sphere(space, 1.0, {32, 64});
  const auto sides = reilly_sides(M, torsion_ball_field(space, 1.0));
  CHECK(sides.lhs == doctest::Approx(8 * pi / 9).epsilon(1e-12));
  CHECK(sides.rhs == doctest::Approx(8 * pi / 9).epsilon(1e-12));
}

TEST_CASE("Reilly formula for random polynomials across spaceforms") {
  for (int K : {-1, 0, 1}) {
    const auto M = perturbed_sphere(Spaceform(K), 0.8, 0.1, default_perturbation_modes(), {32, 64});
    for (std::uint64_t s = 0; s < 2; ++s) CHECK(reilly_residual(M, random_polynomial_field(42, s)) < 1e-9);
  }
}

TEST_CASE("Serrin pairs") {
  SUBCASE("torsion pair has phi = 1") {
    const auto pair = serrin_pair_manufacture(torsion_profile(), 1.0);
    CHECK(pair.phi(-0.1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pair.R() == doctest::Approx(1.0 / 3).epsilon(1e-12));
    const auto t = serrin_identity(pair);
    CHECK(std::abs(t.lhs) < 1e-12);
    CHECK(t.residual < 1e-8);
  }
  SUBCASE("nonlinear pairs") {
    for (const auto& profile : {quartic_profile(), exponential_profile()}) {
      const auto pair = serrin_pair_manufacture(profile, 1.0);
      // inverse profile round trip
      for (double r : {0.1, 0.5, 0.9}) CHECK(pair.radius_of(profile.f(r)) == doctest::Approx(r).epsilon(1e-10));
      // Δf = φ(f) along the radius
      for (double r : {0.2, 0.6}) CHECK(pair.laplacian(r) == doctest::Approx(pair.phi(profile.f(r))).epsilon(1e-9));
      const auto coarse = serrin_identity(pair, {16, 32}, 8);
      const auto fine = serrin_identity(pair, {16, 32}, 32);
      CHECK(fine.residual < 1e-6);
      CHECK(fine.residual <= coarse.residual);
      CHECK(hopf_gradient_check(pair).positive);
    }
  }
  SUBCASE("non-monotone profile is rejected") {
    RadialProfile bad{"bad", [](double r) { return std::cos(4 * r) - std::cos(4.0); }, [](double r) { return -4 * std::sin(4 * r); },
                      [](double r) { return -16 * std::cos(4 * r); }};
    CHECK_THROWS_AS(serrin_pair_manufacture(bad, 1.0), DomainError);
  }
}

TEST_CASE("Steklov identity") {
  const Spaceform space(0);
  SUBCASE("unit ball") {
    const auto r = steklov_identity_residual(geodesic_sphere(space, 1.0, {32, 64}), quadratic_field(Mat3::Identity(), -1.0));
    CHECK(r.rayleigh == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(std::abs(r.deficit) < 1e-8);
    CHECK(r.residual < 1e-10);
  }
  SUBCASE("prolate ellipsoid with its quadric") {
    const auto M = ellipsoid(space, 1.2, 1.0, 1.0, {48, 96});
    const Mat3 A = Vec3(1 / 1.44, 1.0, 1.0).asDiagonal();
    const auto r = steklov_identity_residual(M, quadratic_field(A, -1.0));
    CHECK(r.residual < 1e-6);
    CHECK(r.deficit > 0.0);
    // Δw = 2 tr A is constant, so |∇̊²w|² = |2A|² - (2 tr A)²/3
    const double traceless = 4 * A.squaredNorm() - std::pow(2 * A.trace(), 2) / 3;
    CHECK(r.lhs == doctest::Approx(3 * traceless * 4 * pi * 1.2 / 3).epsilon(1e-10));
  }
  SUBCASE("boundary data must vanish") {
    CHECK_THROWS_AS(
        steklov_identity_residual(geodesic_sphere(space, 1.0, {16, 32}), quadratic_field(Mat3::Identity(), -0.5)),
        PreconditionError);
    CHECK_THROWS_AS(steklov_identity_residual(geodesic_sphere(Spaceform(1), 1.0, {16, 32}),
                                              quadratic_field(Mat3::Identity(), -1.0)),
                    UnsupportedSpaceError);
  }
}
