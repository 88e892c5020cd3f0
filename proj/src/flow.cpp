#include "umbilic/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "umbilic/deficits.hpp"
#include "umbilic/errors.hpp"
#include "umbilic/surfaces.hpp"

namespace umbilic {

namespace {

constexpr int n = kSurfaceDimension;

double H(const CurvatureNode& p, int j) { return j > n ? 0.0 : p.Hk[j]; }

// Radial velocity of the graph, or an empty vector if the cone is left.
std::vector<double> radial_speed(const Hypersurface& M, int k) {
  const CurvatureField& F = M.curvature();
  std::vector<double> v(F.size());
  for (std::size_t q = 0; q < F.size(); ++q) {
    const CurvatureNode& p = F[q];
    for (int j = 1; j <= k; ++j) {
      if (!(p.Hk[j] > 0.0)) return {};
    }
    v[q] = (H(p, k - 1) / H(p, k) - p.u) / p.xi.dot(p.nu_euclid);
  }
  return v;
}

std::vector<double> axpy(std::span<const double> x, double a, const std::vector<double>& y) {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * y[i];
  return out;
}

}  // namespace

FlowMonitor measure_flow_state(const Hypersurface& M, int k) {
  const CurvatureField& F = M.curvature();
  FlowMonitor m;
  m.W = normalized_quermassintegrals(M);
  m.cone_margin = std::numeric_limits<double>::infinity();
  m.newton_min = std::numeric_limits<double>::infinity();
  for (const auto& p : F.nodes) {
    m.a_traceless_max = std::max(m.a_traceless_max, p.a_traceless_norm);
    for (int j = 1; j <= k; ++j) m.cone_margin = std::min(m.cone_margin, p.Hk[j]);
    const double integrand = H(p, k) - H(p, k + 1) * H(p, k - 1) / H(p, k);
    m.newton_min = std::min(m.newton_min, integrand);
    m.newton_integral += p.weight * integrand;
    m.speed_max = std::max(m.speed_max, std::abs(H(p, k - 1) / H(p, k) - p.u));
  }
  return m;
}

FlowState flow_initial(const Hypersurface& M, int k) {
  if (M.space().curvature() != 0) throw UnsupportedSpaceError("the normalised inverse curvature flow needs K = 0");
  if (k < 1 || k > n) throw DomainError("flow order k must satisfy 1 <= k <= n");
  FlowState s{M, 0.0, k, measure_flow_state(M, k)};
  if (!(s.monitor.cone_margin > 0.0)) throw PreconditionError("initial surface is not in the Garding cone");
  return s;
}

double flow_cfl_step(const FlowState& state, double cfl) {
  const CurvatureField& F = state.surface.curvature();
  const double spacing = std::numbers::pi / state.surface.grid().n_theta();
  double scale = std::numeric_limits<double>::infinity();
  for (const auto& p : F.nodes) {
    const double v = p.r * H(p, state.k) / H(p, state.k - 1);
    scale = std::min(scale, v * v);
  }
  return cfl * spacing * spacing * scale;
}

FlowState flow_step(const FlowState& state, double dt, const FlowOptions& options) {
  const Hypersurface& M = state.surface;
  const SphereGrid& grid = M.grid();
  const int k = state.k;
  const double wk0 = state.monitor.W[k];

  for (double h = dt; h >= 1e-12; h *= 0.5) {
    try {
      const auto rho = M.rho();
      const auto k1 = radial_speed(M, k);
      if (k1.empty()) throw PreconditionError("cone left");
      const auto k2 = radial_speed(M.with_rho(axpy(rho, 0.5 * h, k1)), k);
      if (k2.empty()) continue;
      const auto k3 = radial_speed(M.with_rho(axpy(rho, 0.5 * h, k2)), k);
      if (k3.empty()) continue;
      const auto k4 = radial_speed(M.with_rho(axpy(rho, h, k3)), k);
      if (k4.empty()) continue;
      std::vector<double> next(rho.begin(), rho.end());
      for (std::size_t q = 0; q < next.size(); ++q) next[q] += h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
      next = grid.project(next);

      FlowState out{M.with_rho(std::move(next)), state.time + h, k, {}};
      out.monitor = measure_flow_state(out.surface, k);
      out.monitor.t = out.time;
      out.monitor.dt = h;
      if (!(out.monitor.cone_margin > 0.0)) continue;
      if (std::abs(out.monitor.W[k] - wk0) > options.step_drift_tol * std::abs(wk0)) continue;
      return out;
    } catch (const DomainError&) {
      // radius left the admissible range: retry with a smaller step
    }
  }
  std::ostringstream os;
  os << "flow stalled at t = " << state.time << ": no step >= 1e-12 kept the cone and W_" << k
     << " (|A0|max = " << state.monitor.a_traceless_max << ", cone margin = " << state.monitor.cone_margin << ")";
  throw NumericalError(os.str());
}

FlowRun flow_run(const Hypersurface& initial, int k, const FlowOptions& options) {
  FlowRun run{{}, flow_initial(initial, k), {}, 0, false, 0.0, 0.0, 0.0, std::numeric_limits<double>::infinity()};
  FlowState& state = run.final_state;
  const double wk_initial = state.monitor.W[k];
  run.trajectory.push_back(state.monitor);
  run.min_newton_integrand = state.monitor.newton_min;
  if (options.record_until >= 0.0) run.recorded.push_back(state);

  const double t_end = options.record_until >= 0.0 ? std::min(options.t_max, options.record_until) : options.t_max;
  auto done = [&] {
    if (options.record_until >= 0.0) return state.time >= t_end * (1.0 - 1e-14);
    return state.monitor.a_traceless_max <= options.umbilic_tol || state.time >= t_end * (1.0 - 1e-14);
  };
  while (!done()) {
    if (run.steps >= options.max_steps) throw NumericalError("flow exceeded the step budget");
    const double dt = std::min(flow_cfl_step(state, options.cfl), t_end - state.time);
    FlowState next = flow_step(state, dt, options);
    const double h = next.time - state.time;
    run.flow_integral -= 0.5 * h * (state.monitor.newton_integral + next.monitor.newton_integral);
    run.max_wk1_increase = std::max(run.max_wk1_increase, next.monitor.W[k + 1] - state.monitor.W[k + 1]);
    run.max_wk_drift = std::max(run.max_wk_drift, std::abs(next.monitor.W[k] - wk_initial) / std::abs(wk_initial));
    run.min_newton_integrand = std::min(run.min_newton_integrand, next.monitor.newton_min);
    state = std::move(next);
    run.trajectory.push_back(state.monitor);
    if (options.record_until >= 0.0) run.recorded.push_back(state);
    ++run.steps;
  }
  run.converged = state.monitor.a_traceless_max <= options.umbilic_tol;
  return run;
}

double variation_constant(int k, Resolution resolution) {
  if (k < 1 || k > n) throw DomainError("variation_constant needs 1 <= k <= n");
  const Spaceform flat(0);
  constexpr double h = 1e-3;
  const double up = normalized_quermassintegrals(geodesic_sphere(flat, 1.0 + h, resolution))[k + 1];
  const double down = normalized_quermassintegrals(geodesic_sphere(flat, 1.0 - h, resolution))[k + 1];
  const Hypersurface ball = geodesic_sphere(flat, 1.0, resolution);
  const double speed_integral = ball.curvature().integrate_by([&](const CurvatureNode& p) { return H(p, k + 1); });
  if (speed_integral == 0.0) return 0.0;
  return (up - down) / (2.0 * h) / speed_integral;
}

AfSlice af_slice_experiment(const Hypersurface& initial, int k, const FlowOptions& options) {
  AfSlice out;
  out.eps = af_deficit(initial, k).value;
  out.slice_rho.assign(initial.rho().begin(), initial.rho().end());
  if (!(out.eps > 1e-14)) return out;

  FlowOptions opts = options;
  opts.record_until = std::sqrt(out.eps);
  const FlowRun run = flow_run(initial, k, opts);

  double integral = 0.0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
    if (run.trajectory[i].newton_integral < run.trajectory[best].newton_integral) best = i;
    if (i > 0) {
      const double h = run.trajectory[i].t - run.trajectory[i - 1].t;
      integral += 0.5 * h * (run.trajectory[i].newton_integral + run.trajectory[i - 1].newton_integral);
    }
  }
  const double span = run.trajectory.back().t;
  out.slice_time = run.trajectory[best].t;
  out.slice_integral = run.trajectory[best].newton_integral;
  out.mean_integral = span > 0.0 ? integral / span : out.slice_integral;
  out.ratio = out.mean_integral > 0.0 ? out.slice_integral / out.mean_integral : 0.0;
  const auto rho = run.recorded[best].surface.rho();
  out.slice_rho.assign(rho.begin(), rho.end());
  for (std::size_t q = 0; q < rho.size(); ++q) {
    out.slice_dist = std::max(out.slice_dist, std::abs(rho[q] - initial.rho()[q]));
  }
  return out;
}

}  // namespace umbilic
