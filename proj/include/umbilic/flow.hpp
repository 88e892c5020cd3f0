#pragma once

#include <array>
#include <limits>
#include <vector>

#include "umbilic/hypersurface.hpp"

namespace umbilic {

/// Monitors of one flow state. W are quermassintegrals divided by their
/// unit-ball values; newton_integral is ∫(H_k - H_{k+1}H_{k-1}/H_k).
struct FlowMonitor {
  double t = 0.0;
  std::array<double, 4> W{};
  double a_traceless_max = 0.0;
  double dt = 0.0;
  double cone_margin = 0.0;        // min over nodes and 1 <= j <= k of H_j
  double newton_integral = 0.0;
  double newton_min = 0.0;         // pointwise minimum of the Newton integrand
  double speed_max = 0.0;          // max |H_{k-1}/H_k - u|
};

FlowMonitor measure_flow_state(const Hypersurface& M, int k);

struct FlowState {
  Hypersurface surface;
  double time = 0.0;
  int k = 1;
  FlowMonitor monitor;
};

struct FlowOptions {
  double cfl = 0.2;
  double step_drift_tol = 1e-8;    // relative change of W_k allowed per step
  double umbilic_tol = 1e-3;
  double t_max = 10.0;
  std::size_t max_steps = 1000000;
  double record_until = -1.0;      // keep surfaces of accepted states with t <= this
};

FlowState flow_initial(const Hypersurface& M, int k);

/// dt <= cfl Δ² min(ρ H_k / H_{k-1})², Δ = π / n_theta.
double flow_cfl_step(const FlowState& state, double cfl);

/// One RK4 step of ∂_t ρ = (H_{k-1}/H_k - u) / <ξ, ν>, followed by spectral
/// projection. The step is halved until the cone and W_k drift checks pass.
FlowState flow_step(const FlowState& state, double dt, const FlowOptions& options = {});

struct FlowRun {
  std::vector<FlowMonitor> trajectory;
  FlowState final_state;
  std::vector<FlowState> recorded;
  std::size_t steps = 0;
  bool converged = false;
  double flow_integral = 0.0;      // ∫∫ (H_{k+1}H_{k-1}/H_k - H_k) dA dt, trapezoidal
  double max_wk_drift = 0.0;       // relative to the initial W_k
  double max_wk1_increase = 0.0;   // largest single-step increase of W_{k+1}
  double min_newton_integrand = std::numeric_limits<double>::infinity();
};

FlowRun flow_run(const Hypersurface& initial, int k, const FlowOptions& options = {});

/// c_{n,k} in dW̃_{k+1}/dt = c ∫ H_{k+1} F for normal speed F, measured by
/// varying the radius of a round sphere.
double variation_constant(int k, Resolution resolution = {32, 64});

struct AfSlice {
  double eps = 0.0;
  double slice_time = 0.0;
  double slice_integral = 0.0;   // min over recorded states of the Newton integral
  double mean_integral = 0.0;    // (1/√ε) ∫_0^{√ε} of the same
  double ratio = 0.0;            // slice_integral / mean_integral
  double slice_dist = 0.0;       // max node displacement from the initial surface
  std::vector<double> slice_rho;
};

AfSlice af_slice_experiment(const Hypersurface& initial, int k, const FlowOptions& options = {});

}  // namespace umbilic
