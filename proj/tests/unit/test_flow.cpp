#include <doctest.h>

#include <cmath>
#include <numbers>

#include "umbilic/deficits.hpp"
#include "umbilic/errors.hpp"
#include "umbilic/flow.hpp"
#include "umbilic/surfaces.hpp"

using namespace umbilic;

TEST_CASE("round spheres are fixed points") {
  const auto M = geodesic_sphere(Spaceform(0), 1.3, {16, 32});
  const FlowState s0 = flow_initial(M, 1);
  const FlowState s1 = flow_step(s0, 1e-3);
  for (std::size_t q = 0; q < M.size(); ++q) CHECK(s1.surface.rho()[q] == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(s1.time == doctest::Approx(1e-3));
  CHECK(s0.monitor.a_traceless_max < 1e-12);
}

TEST_CASE("variation constant for k = 1 is 1 / 4 pi") {
  CHECK(variation_constant(1, {16, 32}) == doctest::Approx(1.0 / (4 * std::numbers::pi)).epsilon(1e-6));
  // k = 2: W̃_3 is fixed by Gauss-Bonnet
  CHECK(std::abs(variation_constant(2, {16, 32})) < 1e-8);
}

TEST_CASE("short flow preserves W1 and decreases W2") {
  const auto M = ellipsoid(Spaceform(0), 1.2, 1.0, 0.9, {24, 48});
  FlowOptions options;
  options.t_max = 0.05;
  const FlowRun run = flow_run(M, 1, options);
  CHECK(run.steps > 0);
  CHECK(run.max_wk_drift < 1e-8);
  CHECK(run.max_wk1_increase <= 1e-12);
  CHECK(run.final_state.time == doctest::Approx(0.05));
  CHECK(run.trajectory.back().a_traceless_max < run.trajectory.front().a_traceless_max);
  CHECK(run.min_newton_integrand >= -1e-12);
  CHECK(run.flow_integral < 0.0);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(flow_initial(geodesic_sphere(Spaceform(-1), 1.0, {8, 16}), 1), UnsupportedSpaceError);
  CHECK_THROWS_AS(flow_initial(geodesic_sphere(Spaceform(0), 1.0, {8, 16}), 3), DomainError);
  const auto dented = perturbed_sphere(Spaceform(0), 1.0, 0.35, {{4, 0, 1.0}, {6, 3, 0.5}}, {24, 48});
  CHECK_THROWS_AS(flow_initial(dented, 1), PreconditionError);
}

TEST_CASE("slice experiment on a nearly round ellipsoid") {
  const auto M = ellipsoid(Spaceform(0), 1.1, 1.0, 1.0, {24, 48});
  const AfSlice s = af_slice_experiment(M, 1);
  CHECK(s.eps == doctest::Approx(af_deficit(M, 1).value));
  CHECK(s.slice_integral <= s.mean_integral * (1 + 1e-12));
  CHECK(s.ratio <= 1.0 + 1e-12);
  CHECK(s.slice_dist <= std::sqrt(s.eps) * 10);
  const AfSlice round = af_slice_experiment(geodesic_sphere(Spaceform(0), 1.0, {16, 32}), 1);
  CHECK(round.slice_dist == 0.0);
}
