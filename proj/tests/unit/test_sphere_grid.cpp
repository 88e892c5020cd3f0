#include <doctest.h>

#include <cmath>
#include <numbers>

#include "umbilic/quadrature.hpp"
#include "umbilic/sphere_grid.hpp"

using namespace umbilic;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n - 1") {
  const auto rule = gauss_legendre(6, 0.0, 2.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], 11);
  CHECK(sum == doctest::Approx(std::pow(2.0, 12) / 12).epsilon(1e-13));
}

TEST_CASE("grid weights integrate the area and low harmonics") {
  const SphereGrid grid(16, 32);
  std::vector<double> one(grid.size(), 1.0), z2(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) z2[q] = std::pow(grid.node(q).z(), 2);
  CHECK(grid.integrate(one) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-14));
  CHECK(grid.integrate(z2) == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-14));
}

TEST_CASE("real spherical harmonics are orthonormal on the grid") {
  const SphereGrid grid(12, 24);
  const std::vector<std::pair<int, int>> lm{{0, 0}, {1, -1}, {2, 0}, {2, 2}, {3, 2}, {3, -3}, {5, 4}};
  for (auto [l1, m1] : lm) {
    for (auto [l2, m2] : lm) {
      std::vector<double> prod(grid.size());
      for (std::size_t q = 0; q < grid.size(); ++q) {
        prod[q] = real_spherical_harmonic(l1, m1, grid.node(q)) * real_spherical_harmonic(l2, m2, grid.node(q));
      }
      const double expected = (l1 == l2 && m1 == m2) ? 1.0 : 0.0;
      CHECK(grid.integrate(prod) == doctest::Approx(expected).epsilon(1e-13).scale(1.0));
    }
  }
  // Y_20 = sqrt(5/16π)(3z² - 1)
  const Vec3 xi = Vec3(0.3, -0.4, 0.5).normalized();
  CHECK(real_spherical_harmonic(2, 0, xi) ==
        doctest::Approx(std::sqrt(5 / (16 * std::numbers::pi)) * (3 * xi.z() * xi.z() - 1)).epsilon(1e-14));
}

TEST_CASE("spectral derivatives of x z are exact") {
  const SphereGrid grid(16, 32);
  std::vector<double> f(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) f[q] = grid.node(q).x() * grid.node(q).z();
  const auto d = grid.differentiate(f);
  double err = 0.0;
  for (int i = 0; i < grid.n_theta(); ++i) {
    const double t = grid.theta(i);
    for (int j = 0; j < grid.n_phi(); ++j) {
      const double p = grid.phi(j);
      const std::size_t q = grid.index(i, j);
      // f = sin t cos t cos p
      err = std::max(err, std::abs(d.t[q] - std::cos(2 * t) * std::cos(p)));
      err = std::max(err, std::abs(d.p[q] + std::sin(t) * std::cos(t) * std::sin(p)));
      err = std::max(err, std::abs(d.tt[q] + 2 * std::sin(2 * t) * std::cos(p)));
      err = std::max(err, std::abs(d.tp[q] + std::cos(2 * t) * std::sin(p)));
      err = std::max(err, std::abs(d.pp[q] + std::sin(t) * std::cos(t) * std::cos(p)));
    }
  }
  CHECK(err < 1e-12);
}

TEST_CASE("projection keeps band-limited data and is idempotent") {
  const SphereGrid grid(10, 20);
  std::vector<double> f(grid.size()), g(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) {
    f[q] = real_spherical_harmonic(4, 3, grid.node(q)) - 0.5 * real_spherical_harmonic(9, -2, grid.node(q));
    g[q] = std::exp(grid.node(q).x());
  }
  const auto pf = grid.project(f);
  for (std::size_t q = 0; q < grid.size(); ++q) CHECK(pf[q] == doctest::Approx(f[q]).epsilon(1e-12).scale(1.0));
  const auto pg = grid.project(g);
  const auto ppg = grid.project(pg);
  for (std::size_t q = 0; q < grid.size(); ++q) CHECK(ppg[q] == doctest::Approx(pg[q]).epsilon(1e-12).scale(1.0));
}
