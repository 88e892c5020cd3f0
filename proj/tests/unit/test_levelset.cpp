#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "umbilic/errors.hpp"
#include "umbilic/levelset.hpp"
#include "umbilic/sphere_grid.hpp"

using namespace umbilic;

namespace {

// ∫_U |∇̊²f|^p over the band between {σf = 0} and {σf = t0}, ray by ray in
// geodesic polar coordinates. Assumes σf increases along every ray.
double band_volume_integral(const Spaceform& space, const AmbientField& f, double t0, double p, Resolution res) {
  const SphereGrid grid(res.n_theta, res.n_phi);
  const double sigma = f.value(Vec3::Zero()) > 0 ? 1.0 : -1.0;
  double total = 0.0;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const Vec3 xi = grid.node(q);
    auto level = [&](double r) { return f.value(space.coordinate_radius(r) * xi); };
    auto radius_at = [&](double target) {
      auto g = [&](double r) { return level(r) - target; };
      double hi = 0.1;
      while (g(0.0) * g(hi) > 0) hi *= 1.5;
      boost::uintmax_t it = 200;
      auto [a, b] = boost::math::tools::toms748_solve(g, 0.0, hi, boost::math::tools::eps_tolerance<double>(50), it);
      return 0.5 * (a + b);
    };
    const double r_zero = radius_at(0.0);
    const double r_cap = radius_at(sigma * t0);
    const double lo = std::min(r_zero, r_cap), hi = std::max(r_zero, r_cap);
    const double ray = boost::math::quadrature::gauss<double, 30>::integrate(
        [&](double r) {
          const auto ch = covariant_hessian(space, f, space.coordinate_radius(r) * xi);
          const double w = space.theta(r);
          return std::pow(std::max(0.0, ch.cs_deficit), 0.5 * p) * w * w;
        },
        lo, hi);
    total += grid.weights()[q] * ray;
  }
  return total;
}

}  // namespace

TEST_CASE("covariant Hessian of the warp derivative is pure trace") {
  for (int K : {-1, 1}) {
    const Spaceform space(K);
    const auto f = warp_prime_field(space);
    const Vec3 x(0.2, -0.1, 0.3);
    const auto ch = covariant_hessian(space, f, x);
    CHECK(std::abs(ch.cs_deficit) < 1e-12);
    CHECK(ch.laplacian == doctest::Approx(-3.0 * K * f.value(x)).epsilon(1e-12));
  }
  const auto q = quadratic_field(Vec3(1.0, 2.0, 3.0).asDiagonal(), 0.0);
  const auto ch = covariant_hessian(Spaceform(0), q, Vec3(0.1, 0.2, 0.3));
  // Hessian diag(2, 4, 6): |H|² - (tr H)²/3 = 56 - 48
  CHECK(ch.cs_deficit == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(ch.laplacian == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("level sets of radial fields are geodesic spheres") {
  const auto M = extract_level(Spaceform(0), quadratic_field(Mat3::Identity(), -1.0), 0.0, {16, 32});
  for (double r : M.rho()) CHECK(r == doctest::Approx(1.0).epsilon(1e-14));
  const Spaceform hyp(-1);
  const auto S = extract_level(hyp, warp_prime_field(hyp), std::cosh(0.5), {16, 32});
  for (double r : S.rho()) CHECK(r == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(extract_level(Spaceform(0), quadratic_field(Mat3::Identity(), 1.0), 0.0, {8, 16}), LevelSetError);
}

TEST_CASE("Hessian and second fundamental form agree on level sets") {
  SUBCASE("exact cases") {
    const auto f = quadratic_field(Mat3::Identity(), -1.0);
    const auto M = extract_level(Spaceform(0), f, 0.0, {16, 32});
    const auto r = hessian_vs_sff_residual(Spaceform(0), f, M);
    CHECK(r.residual < 1e-8);
    CHECK(r.pointwise_residual < 1e-8);
    const Spaceform sph(1);
    const auto g = warp_prime_field(sph);
    const auto S = extract_level(sph, g, std::cos(0.9), {16, 32});
    CHECK(hessian_vs_sff_residual(sph, g, S).residual < 1e-8);
  }
  SUBCASE("anisotropic field converges under refinement") {
    const auto f = anisotropic_quartic_field();
    const Spaceform space(0);
    const double coarse = hessian_vs_sff_residual(space, f, extract_level(space, f, 0.0, {12, 24})).residual;
    const double fine = hessian_vs_sff_residual(space, f, extract_level(space, f, 0.0, {24, 48})).residual;
    CHECK(fine < 1e-5);
    CHECK((fine < 1e-10 || coarse / fine >= 4.0));
    const auto quad = quadratic_field(Vec3(1 / 1.44, 1.0, 1 / 0.81).asDiagonal(), -1.0);
    CHECK(hessian_vs_sff_residual(space, quad, extract_level(space, quad, 0.0, {32, 64})).pointwise_residual < 1e-8);
  }
}

TEST_CASE("co-area band integral matches direct volume quadrature") {
  const Spaceform space(0);
  const auto f = anisotropic_quartic_field();
  BandSpec band;
  band.level_cap = 0.1;
  band.n_levels = 12;
  band.resolution = {24, 48};
  const auto bi = band_norm(space, f, band);
  const double direct = band_volume_integral(space, f, band.level_cap, band.p, {24, 48});
  CHECK(bi.integral == doctest::Approx(direct).epsilon(1e-3));
  CHECK(bi.sign == -1.0);
  CHECK(best_slice(bi, band).holds);
}

TEST_CASE("band integral is zero for pure-trace Hessians") {
  const Spaceform space(-1);
  BandSpec band;
  band.resolution = {12, 24};
  const auto f = warp_prime_field(space).affine(-1.0, std::cosh(0.8));
  const auto bi = band_norm(space, f, band);
  CHECK(bi.integral < 1e-20);
  CHECK(best_slice(bi, band).holds);
}

TEST_CASE("foliation between spheres has the radial gap as arc length") {
  const Spaceform space(0);
  const auto f = quadratic_field(Mat3::Identity(), 0.0);
  const std::vector<Vec3> seeds{{1, 0, 0}, {0, 0.6, 0.8}, Vec3(1, 1, 1).normalized()};
  const auto fol = foliate(space, f, 1.0, 1.21, seeds);
  for (double L : fol.arc_lengths) CHECK(L == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(fol.max_level_error < 1e-8);
  const Spaceform hyp(-1);
  const auto g = warp_prime_field(hyp);
  const auto H = foliate(hyp, g, std::cosh(0.3), std::cosh(0.7), {Vec3(hyp.coordinate_radius(0.3), 0, 0)});
  CHECK(H.arc_lengths[0] == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("stability pipeline on a round field") {
  const auto r = levelset_stability_pipeline(Spaceform(0), quadratic_field(Mat3::Identity(), -1.0), BandSpec{});
  CHECK(r.dist < 1e-10);
  CHECK(r.band_integral < 1e-20);
  CHECK(r.area == doctest::Approx(4 * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("stability pipeline on the anisotropic field") {
  BandSpec band;
  band.resolution = {24, 48};
  const auto r = levelset_stability_pipeline(Spaceform(0), anisotropic_quartic_field(), band);
  CHECK(r.dist > 0.01);
  CHECK(r.slice.holds);
  CHECK(r.bound_rhs > 0.0);
  CHECK(std::abs(r.dist - r.slice_dist) <= r.transfer + 1e-9);
}
