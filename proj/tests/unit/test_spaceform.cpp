#include <doctest.h>

#include <cmath>
#include <numbers>

#include "umbilic/errors.hpp"
#include "umbilic/random.hpp"
#include "umbilic/spaceform.hpp"

using namespace umbilic;

namespace {

// Hyperboloid and round-sphere embeddings of the chart; distances from them
// do not share code with the closed forms under test.
double hyperboloid_distance(const Vec3& a, const Vec3& b) {
  auto lift = [](const Vec3& x) {
    const double q = x.squaredNorm();
    Eigen::Vector4d X;
    X << (1 + q) / (1 - q), 2 * x / (1 - q);
    return X;
  };
  const auto A = lift(a), B = lift(b);
  const double inner = A[0] * B[0] - A.tail<3>().dot(B.tail<3>());
  return std::acosh(std::max(1.0, inner));
}

double sphere_distance(const Vec3& a, const Vec3& b) {
  auto lift = [](const Vec3& x) {
    const double q = x.squaredNorm();
    Eigen::Vector4d X;
    X << (1 - q) / (1 + q), 2 * x / (1 + q);
    return X;
  };
  return std::acos(std::clamp(lift(a).dot(lift(b)), -1.0, 1.0));
}

Vec3 random_point(const CounterStream& rng, std::uint64_t i, double radius) {
  Vec3 v(rng.uniform(3 * i, -1, 1), rng.uniform(3 * i + 1, -1, 1), rng.uniform(3 * i + 2, -1, 1));
  return radius * v / std::sqrt(3.0);
}

}  // namespace

TEST_CASE("warp functions at r = 1") {
  const auto h = warp_eval(Spaceform(-1), 1.0);
  CHECK(h.theta == doctest::Approx(1.1752011936438014).epsilon(1e-14));
  CHECK(h.theta_prime == doctest::Approx(1.5430806348152437).epsilon(1e-14));
  CHECK(h.Theta == doctest::Approx(0.5430806348152437).epsilon(1e-14));

  const auto s = warp_eval(Spaceform(1), 1.0);
  CHECK(s.theta == doctest::Approx(0.8414709848078965).epsilon(1e-14));
  CHECK(s.theta_prime == doctest::Approx(0.5403023058681398).epsilon(1e-14));
  CHECK(s.Theta == doctest::Approx(0.4596976941318602).epsilon(1e-14));

  const auto e = warp_eval(Spaceform(0), 1.5);
  CHECK(e.theta == 1.5);
  CHECK(e.theta_prime == 1.0);
  CHECK(e.Theta == doctest::Approx(1.125));
}

TEST_CASE("Theta' = theta for every K") {
  for (int K : {-1, 0, 1}) {
    const Spaceform space(K);
    for (double r : {0.1, 0.5, 1.2}) {
      const double h = 1e-5;
      const double dTheta = (space.warp(r + h).Theta - space.warp(r - h).Theta) / (2 * h);
      CHECK(dTheta == doctest::Approx(space.theta(r)).epsilon(1e-9));
    }
  }
}

TEST_CASE("radius outside the admissible range is rejected") {
  CHECK_THROWS_AS(Spaceform(2), DomainError);
  CHECK_THROWS_AS(Spaceform(1).warp(1.6), DomainError);
  CHECK_THROWS_AS(Spaceform(1, 2.0), DomainError);
  CHECK_THROWS_AS(Spaceform(0).warp(-0.1), DomainError);
  CHECK(Spaceform(1).radius_cap() == doctest::Approx(std::numbers::pi / 2 - 1e-6).epsilon(1e-15));
}

TEST_CASE("hyperbolic distance from the origin to chart radius 1/2 is log 3") {
  CHECK(geodesic_distance(Spaceform(-1), Vec3::Zero(), Vec3(0.5, 0, 0)) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(geodesic_distance(Spaceform(1), Vec3::Zero(), Vec3(0, std::tan(std::numbers::pi / 8), 0)) ==
        doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK(geodesic_distance(Spaceform(0), Vec3(1, 2, 3), Vec3(1, 2, 5)) == 2.0);
}

TEST_CASE("chart distance agrees with the embedded models") {
  const CounterStream rng(11);
  for (std::uint64_t i = 0; i < 200; i += 2) {
    const Vec3 a = random_point(rng, i, 0.9), b = random_point(rng, i + 1, 0.9);
    CHECK(geodesic_distance(Spaceform(-1), a, b) == doctest::Approx(hyperboloid_distance(a, b)).epsilon(1e-10));
    CHECK(geodesic_distance(Spaceform(1), a, b) == doctest::Approx(sphere_distance(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("coordinate and geodesic radius are inverse") {
  for (int K : {-1, 0, 1}) {
    const Spaceform space(K);
    for (double r : {0.05, 0.7, 1.4}) {
      CHECK(space.geodesic_radius(space.coordinate_radius(r)) == doctest::Approx(r).epsilon(1e-14));
      CHECK(space.geodesic_distance(Vec3::Zero(), Vec3(0, 0, space.coordinate_radius(r))) ==
            doctest::Approx(r).epsilon(1e-13));
    }
  }
}

TEST_CASE("conformal factor matches infinitesimal distances") {
  for (int K : {-1, 1}) {
    const Spaceform space(K);
    const ConformalChart chart = conformal_model(space);
    const Vec3 x(0.2, -0.3, 0.1), d(1e-6, 2e-6, -1e-6);
    CHECK(space.geodesic_distance(x, x + d) / d.norm() == doctest::Approx(chart.conformal_factor(x)).epsilon(1e-5));
    CHECK(std::exp(chart.psi(x)) == doctest::Approx(chart.conformal_factor(x)).epsilon(1e-14));
    // gradient of ψ by central differences
    for (int i = 0; i < 3; ++i) {
      Vec3 e = Vec3::Zero();
      e[i] = 1e-6;
      CHECK((chart.psi(x + e) - chart.psi(x - e)) / 2e-6 == doctest::Approx(chart.grad_psi(x)[i]).epsilon(1e-7));
    }
  }
}

TEST_CASE("covariant Hessian of the radial warp derivative is -K theta' g") {
  for (int K : {-1, 1}) {
    const Spaceform space(K);
    const ConformalChart chart = space.chart();
    const Vec3 x(0.3, 0.1, -0.2);
    // ϑ'(r(x)) in chart terms: (1 - K|x|²)/(1 + K|x|²)
    const double q = x.squaredNorm();
    const double f = (1 - K * q) / (1 + K * q);
    const Vec3 grad = (-4.0 * K / ((1 + K * q) * (1 + K * q))) * x;
    Mat3 hess = (-4.0 * K / ((1 + K * q) * (1 + K * q))) * Mat3::Identity() +
                (16.0 / std::pow(1 + K * q, 3)) * (x * x.transpose());
    const Mat3 cov = chart.covariant_hessian(x, grad, hess);
    const double e2 = std::pow(chart.conformal_factor(x), 2);
    CHECK((cov + K * f * e2 * Mat3::Identity()).norm() < 1e-12);
  }
}
