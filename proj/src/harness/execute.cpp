#include "umbilic/harness/execute.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "umbilic/deficits.hpp"
#include "umbilic/elliptic.hpp"
#include "umbilic/errors.hpp"
#include "umbilic/flow.hpp"
#include "umbilic/harness/sweep.hpp"
#include "umbilic/levelset.hpp"
#include "umbilic/parallel.hpp"
#include "umbilic/sphere_fit.hpp"

namespace umbilic::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string resolution_label(Resolution r) { return std::to_string(r.n_theta) + "x" + std::to_string(r.n_phi); }

Resolution half(Resolution r) { return {r.n_theta / 2, r.n_phi / 2}; }

Json resolution_json(Resolution r) { return Json{{"n_theta", r.n_theta}, {"n_phi", r.n_phi}}; }

Json surface_json(const SurfaceSpec& s) {
  Json j{{"kind", s.kind}};
  if (s.kind == "sphere") j["radius"] = s.radius;
  if (s.kind == "ellipsoid") j["axes"] = s.axes;
  if (s.kind == "perturbed_sphere") {
    j["r0"] = s.r0;
    j["eps"] = s.eps;
    Json modes = Json::array();
    for (const auto& m : s.modes) modes.push_back({m.l, m.m, m.coefficient});
    j["modes"] = modes;
  }
  if (!s.center.isZero(0.0)) j["center"] = {s.center.x(), s.center.y(), s.center.z()};
  return j;
}

// Collects threshold checks for the report and the exit code.
class Checks {
 public:
  void at_most(const std::string& name, double value, double limit) {
    add(name, value, limit, "<=", value <= limit);
  }
  void at_least(const std::string& name, double value, double limit) {
    add(name, value, limit, ">=", value >= limit);
  }
  void flag(const std::string& name, bool ok) { add(name, ok ? 1.0 : 0.0, 1.0, "==", ok); }
  bool passed() const { return passed_; }
  const Json& json() const { return list_; }

 private:
  void add(const std::string& name, double value, double limit, const char* op, bool ok) {
    list_.push_back({{"name", name}, {"value", json_number(value)}, {"op", op}, {"limit", limit}, {"pass", ok}});
    passed_ = passed_ && ok;
  }
  Json list_ = Json::array();
  bool passed_ = true;
};

struct Outcome {
  Json report;
  std::optional<CsvTable> csv;
  Checks checks;
};

AmbientField load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field table '" + path + "'");
  TabulatedGrid grid;
  in >> grid.dims[0] >> grid.dims[1] >> grid.dims[2];
  in >> grid.origin.x() >> grid.origin.y() >> grid.origin.z();
  in >> grid.spacing.x() >> grid.spacing.y() >> grid.spacing.z();
  if (!in) throw ConfigError("field table '" + path + "': header must be 'nx ny nz / ox oy oz / hx hy hz'");
  const std::size_t count = static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2];
  grid.values.resize(count);
  for (auto& v : grid.values) {
    if (!(in >> v)) throw ConfigError("field table '" + path + "' has fewer than nx*ny*nz values");
  }
  try {
    return tabulated_field(std::move(grid));
  } catch (const std::exception& e) {
    throw ConfigError("field table '" + path + "': " + e.what());
  }
}

AmbientField build_field(const FieldSpec& spec, const Spaceform& space) {
  if (spec.kind == "quadratic") {
    return quadratic_field(Vec3(spec.A[0], spec.A[1], spec.A[2]).asDiagonal().toDenseMatrix(), spec.c);
  }
  if (spec.kind == "anisotropic") return anisotropic_quartic_field();
  if (spec.kind == "torsion") return torsion_ball_field(space, spec.r0);
  if (spec.kind == "tabulated") return load_table(spec.table);
  throw ConfigError("field kind '" + spec.kind + "' is not an ambient field for this command");
}

RadialProfile build_profile(const FieldSpec& spec) {
  if (spec.kind == "torsion" || spec.kind == "quadratic") return torsion_profile();
  if (spec.kind == "quartic") return quartic_profile();
  if (spec.kind == "exponential") return exponential_profile();
  throw ConfigError("serrin needs field kind torsion, quartic or exponential");
}

// ---- identity battery

struct IdentityCase {
  std::string name;
  double limit;
  std::function<double(Resolution, int)> residual;  // (surface resolution, radial nodes)
};

std::vector<IdentityCase> battery_cases(const std::string& which, std::uint64_t seed) {
  std::vector<IdentityCase> cases;
  const bool all = which == "all";
  if (all || which == "hsiung") {
    struct Shape {
      std::string name;
      int K;
      std::function<Hypersurface(const Spaceform&, Resolution)> make;
    };
    std::vector<Shape> shapes;
    for (int K : {-1, 0, 1}) {
      shapes.push_back({"sphere(0.8)", K, [](const Spaceform& s, Resolution r) { return geodesic_sphere(s, 0.8, r); }});
      shapes.push_back({"ellipsoid(1.2,1,0.9)", K,
                        [](const Spaceform& s, Resolution r) { return ellipsoid(s, 1.2, 1.0, 0.9, r); }});
      shapes.push_back({"perturbed_sphere(1,0.1)", K, [](const Spaceform& s, Resolution r) {
                          return perturbed_sphere(s, 1.0, 0.1, default_perturbation_modes(), r);
                        }});
    }
    for (const auto& shape : shapes) {
      for (int k = 0; k <= kSurfaceDimension - 1; ++k) {
        cases.push_back({"hsiung:k=" + std::to_string(k) + ":" + shape.name + ":K=" + std::to_string(shape.K), 1e-6,
                         [shape, k](Resolution r, int) {
                           return hsiung_sides(shape.make(Spaceform(shape.K), r), k).residual;
                         }});
      }
    }
  }
  if (all || which == "reilly") {
    for (int K : {-1, 0, 1}) {
      cases.push_back({"reilly:torsion:ball(1):K=" + std::to_string(K), 1e-6, [K](Resolution r, int radial) {
                         const Spaceform space(K);
                         return reilly_residual(geodesic_sphere(space, 1.0, r), torsion_ball_field(space, 1.0), radial);
                       }});
    }
    for (std::uint64_t s = 0; s < 3; ++s) {
      cases.push_back({"reilly:random_polynomial#" + std::to_string(s) + ":ellipsoid(1.2,1,0.9):K=0", 1e-6,
                       [seed, s](Resolution r, int radial) {
                         const Spaceform space(0);
                         return reilly_residual(ellipsoid(space, 1.2, 1.0, 0.9, r), random_polynomial_field(seed, s), radial);
                       }});
      cases.push_back({"reilly:random_polynomial#" + std::to_string(s) + ":perturbed_sphere(0.8,0.1):K=-1", 1e-6,
                       [seed, s](Resolution r, int radial) {
                         const Spaceform space(-1);
                         return reilly_residual(perturbed_sphere(space, 0.8, 0.1, default_perturbation_modes(), r),
                                                random_polynomial_field(seed, s), radial);
                       }});
    }
  }
  if (all || which == "serrin") {
    const std::vector<std::pair<RadialProfile, double>> profiles{
        {torsion_profile(), 1e-8}, {quartic_profile(), 1e-6}, {exponential_profile(), 1e-6}};
    for (const auto& [profile, limit] : profiles) {
      cases.push_back({"serrin:" + profile.name + ":ball(1):K=0", limit, [profile](Resolution r, int radial) {
                         return serrin_identity_residual(serrin_pair_manufacture(profile, 1.0), r, radial);
                       }});
    }
  }
  if (all || which == "steklov") {
    cases.push_back({"steklov:quadric:ellipsoid(1.2,1,1):K=0", 1e-6, [](Resolution r, int radial) {
                       const Spaceform space(0);
                       Mat3 A = Vec3(1.0 / 1.44, 1.0, 1.0).asDiagonal();
                       return steklov_identity_residual(ellipsoid(space, 1.2, 1.0, 1.0, r), quadratic_field(A, -1.0),
                                                        radial)
                           .residual;
                     }});
    cases.push_back({"steklov:quadric:ball(1):K=0", 1e-6, [](Resolution r, int radial) {
                       const Spaceform space(0);
                       return steklov_identity_residual(geodesic_sphere(space, 1.0, r),
                                                        quadratic_field(Mat3::Identity(), -1.0), radial)
                           .residual;
                     }});
  }
  return cases;
}

// ---- commands

Outcome run_identities(const RunPlan& plan) {
  Outcome o;
  const auto rows = identity_battery(plan.identities, resolution_for(plan), plan.seed);
  CsvTable table({"identity", "residual", "resolution", "order"});
  Json cases = Json::array();
  for (const auto& row : rows) {
    table.add_row({row.identity, format_number(row.residual), resolution_label(row.resolution), format_number(row.order)});
    cases.push_back({{"identity", row.identity},
                     {"residual", json_number(row.residual)},
                     {"coarse_residual", json_number(row.coarse_residual)},
                     {"order", json_number(row.order)},
                     {"limit", row.limit}});
    o.checks.at_most(row.identity, row.residual, row.limit);
  }
  o.report = {{"which", plan.identities}, {"resolution", resolution_json(resolution_for(plan))}, {"cases", cases}};
  o.csv = std::move(table);
  return o;
}

Outcome run_deficit(const RunPlan& plan) {
  Outcome o;
  const Spaceform space = make_space(plan);
  const Resolution res = resolution_for(plan);
  const Hypersurface M = build_surface(plan.surface, space, res);
  const Hypersurface fine = build_surface(plan.surface, space, res.refined());
  auto compute = [&](const Hypersurface& S) -> DeficitReport {
    const DeficitSpec& d = plan.deficit;
    if (d.kind == "hk") return hk_deficit(S);
    if (d.kind == "cmc") return cmc_deficit(S, d.literal_cmc ? CmcConstant::literal : CmcConstant::normalized);
    if (d.kind == "cfc") return cfc_deficit(S, d.k, d.l);
    return af_deficit(S, d.k);
  };
  DeficitReport report = compute(M);
  report.refinement_residual = std::abs(compute(fine).value - report.value);
  report.seed = plan.seed;
  o.report = Json::parse(report.to_json());
  o.report["space"] = {{"curvature", space.curvature()}};
  o.report["surface"] = surface_json(plan.surface);
  if (plan.deficit.kind == "cmc") o.report["cmc_convention"] = plan.deficit.literal_cmc ? "literal" : "normalized";
  o.checks.at_least("deficit_nonnegative", report.value, -1e-8);
  o.checks.at_most("refinement_residual", report.refinement_residual, 1e-6 * std::max(1.0, std::abs(report.value)));
  return o;
}

Outcome run_levelset(const RunPlan& plan) {
  Outcome o;
  const Spaceform space = make_space(plan);
  const AmbientField f = build_field(plan.field, space);
  BandSpec band;
  band.level_cap = plan.levelset.level_cap;
  band.n_levels = plan.levelset.n_levels;
  band.p = plan.levelset.p;
  if (plan.resolution) band.resolution = *plan.resolution;
  const PipelineResult r = levelset_stability_pipeline(space, f, band);
  o.report = {{"field", f.name()},
              {"space", {{"curvature", space.curvature()}}},
              {"band", {{"level_cap", band.level_cap}, {"n_levels", band.n_levels}, {"p", band.p}}},
              {"resolution", resolution_json(band.resolution)},
              {"dist", r.dist},
              {"center", {r.fit.center.x(), r.fit.center.y(), r.fit.center.z()}},
              {"radius", r.fit.radius},
              {"slice_dist", r.slice_dist},
              {"transfer", r.transfer},
              {"bound_rhs", json_number(r.bound_rhs)},
              {"ratio", json_number(r.ratio)},
              {"area", r.area},
              {"band_integral", r.band_integral},
              {"min_gradient", r.min_gradient},
              {"max_abs_f", r.max_abs_f},
              {"normalizer", r.normalizer},
              {"slice",
               {{"level", r.slice.level},
                {"slice_norm", r.slice.slice_norm},
                {"bound", r.slice.bound},
                {"ratio", json_number(r.slice.ratio)},
                {"holds", r.slice.holds}}}};
  o.checks.flag("pigeonhole_slice", r.slice.holds);
  return o;
}

Outcome run_flow(const RunPlan& plan) {
  Outcome o;
  const Spaceform space = make_space(plan);
  const Hypersurface M = build_surface(plan.surface, space, resolution_for(plan));
  const int k = plan.flow.k;
  FlowOptions options;
  options.cfl = plan.flow.cfl;
  options.t_max = plan.flow.t_max;
  options.umbilic_tol = plan.flow.umbilic_tol;
  const double eps = af_deficit(M, k).value;
  const FlowRun run = flow_run(M, k, options);
  const double c = variation_constant(k, resolution_for(plan));
  const double expected = -eps / c;
  const double balance = std::abs(run.flow_integral - expected) / std::max(std::abs(expected), 1e-300);

  CsvTable table({"t", "W1", "W2", "W3", "A_traceless_max", "dt", "cone_margin"});
  for (const auto& m : run.trajectory) {
    table.add_row({format_number(m.t), format_number(m.W[1]), format_number(m.W[2]), format_number(m.W[3]),
                   format_number(m.a_traceless_max), format_number(m.dt), format_number(m.cone_margin)});
  }
  const FlowMonitor& last = run.trajectory.back();
  o.report = {{"k", k},
              {"surface", surface_json(plan.surface)},
              {"resolution", resolution_json(resolution_for(plan))},
              {"steps", run.steps},
              {"converged", run.converged},
              {"t_final", last.t},
              {"a_traceless_max", last.a_traceless_max},
              {"W_initial", run.trajectory.front().W},
              {"W_final", last.W},
              {"wk_relative_drift", run.max_wk_drift},
              {"wk1_max_step_increase", run.max_wk1_increase},
              {"min_newton_integrand", run.min_newton_integrand},
              {"af_deficit", eps},
              {"variation_constant", c},
              {"flow_integral", run.flow_integral},
              {"expected_flow_integral", expected},
              {"balance_relative_error", json_number(balance)}};
  o.csv = std::move(table);
  o.checks.at_most("wk_relative_drift", run.max_wk_drift, 1e-4);
  o.checks.at_most("wk1_max_step_increase", run.max_wk1_increase, 1e-10);
  o.checks.at_most("final_a_traceless_max", last.a_traceless_max, plan.flow.umbilic_tol);
  if (eps > 1e-10) o.checks.at_most("global_balance", balance, 1e-2);
  return o;
}

Outcome run_sweep(const RunPlan& plan) {
  Outcome o;
  const Spaceform space = make_space(plan);
  const auto results = sweep(space, plan.sweep, plan.deficit, plan.surface.modes);
  CsvTable table({"eps", "deficit", "distance", "slope_partial"});
  for (const auto& row : results.front().rows) {
    table.add_row({format_number(row.eps), format_number(row.deficit), format_number(row.distance),
                   format_number(row.slope_partial)});
  }
  Json list = Json::array();
  for (const auto& r : results) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
      Json jr{{"eps", row.eps},
              {"deficit", json_number(row.deficit)},
              {"distance", json_number(row.distance)},
              {"slope_partial", json_number(row.slope_partial)}};
      if (row.skipped) jr["skipped"] = true;
      if (!row.note.empty()) jr["note"] = row.note;
      rows.push_back(jr);
    }
    list.push_back({{"resolution", resolution_json(r.resolution)},
                    {"fitted_slope", json_number(r.fitted_slope)},
                    {"fitted_C", r.fitted_C},
                    {"fitted_rows", r.fitted_rows},
                    {"rows", rows}});
    const std::string tag = "@" + resolution_label(r.resolution);
    o.checks.at_least("fitted_slope" + tag, r.fitted_slope, r.stability_exponent - 0.05);
    bool bounded = true;
    for (const auto& row : r.rows) {
      if (!row.skipped && row.deficit > 0.0) {
        bounded = bounded && row.distance <= r.fitted_C * std::pow(row.deficit, r.stability_exponent) * (1.0 + 1e-12);
      }
    }
    o.checks.flag("rows_bounded" + tag, bounded);
  }
  const double c0 = results.front().fitted_C;
  double spread = 0.0;
  for (const auto& r : results) spread = std::max(spread, std::abs(r.fitted_C - c0) / c0);
  if (results.size() > 1) o.checks.at_most("fitted_C_spread", spread, 0.2);
  o.report = {{"family", plan.sweep.family},
              {"deficit", plan.sweep.deficit},
              {"stability_exponent", results.front().stability_exponent},
              {"space", {{"curvature", space.curvature()}}},
              {"fitted_C_spread", json_number(spread)},
              {"results", list}};
  o.csv = std::move(table);
  return o;
}

Outcome run_serrin(const RunPlan& plan) {
  Outcome o;
  if (plan.curvature != 0) throw UnsupportedSpaceError("manufactured Serrin pairs are Euclidean");
  const SerrinPair pair = serrin_pair_manufacture(build_profile(plan.field), plan.field.r0);
  BandSpec defaults;
  const Resolution res = plan.resolution.value_or(defaults.resolution);
  const SerrinTerms t = serrin_identity(pair, res);
  const HopfCheck hopf = hopf_gradient_check(pair, res);
  o.report = {{"profile", pair.profile().name},
              {"r0", pair.r0()},
              {"resolution", resolution_json(res)},
              {"lhs", t.lhs},
              {"boundary", t.boundary},
              {"r_term", t.r_term},
              {"phi_term", t.phi_term},
              {"phi0_term", t.phi0_term},
              {"rhs", t.rhs},
              {"residual", t.residual},
              {"R", pair.R()},
              {"phi0", pair.phi0()},
              {"hopf", {{"min_boundary_gradient", hopf.min_boundary_gradient}, {"positive", hopf.positive}}}};
  o.checks.at_most("serrin_residual", t.residual, 1e-6);
  o.checks.flag("hopf_positive", hopf.positive);
  return o;
}

Outcome run_steklov(const RunPlan& plan) {
  Outcome o;
  const Spaceform space = make_space(plan);
  if (space.curvature() != 0) throw UnsupportedSpaceError("the Steklov identity is Euclidean");
  const SurfaceSpec& s = plan.surface;
  Vec3 axes;
  if (s.kind == "sphere") {
    axes.setConstant(s.radius);
  } else if (s.kind == "ellipsoid") {
    axes = Vec3(s.axes[0], s.axes[1], s.axes[2]);
  } else {
    throw ConfigError("steklov needs a sphere or ellipsoid surface (the field is its defining quadric)");
  }
  if (!s.center.isZero(0.0)) throw ConfigError("steklov needs a centered surface");
  const Mat3 A = axes.cwiseInverse().cwiseAbs2().asDiagonal();
  const Hypersurface M = build_surface(s, space, resolution_for(plan));
  const SteklovResult r = steklov_identity_residual(M, quadratic_field(A, -1.0));
  o.report = {{"surface", surface_json(s)},
              {"resolution", resolution_json(resolution_for(plan))},
              {"residual", r.residual},
              {"rayleigh", r.rayleigh},
              {"deficit", r.deficit},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"raw_difference", r.raw_difference},
              {"max_boundary_value", r.max_boundary_value},
              {"min_boundary_gradient", r.min_boundary_gradient}};
  o.checks.at_most("steklov_residual", r.residual, 1e-6);
  return o;
}

}  // namespace

Hypersurface build_surface(const SurfaceSpec& spec, const Spaceform& space, Resolution resolution) {
  if (spec.kind == "sphere") return geodesic_sphere(space, spec.radius, resolution, spec.center);
  if (spec.kind == "ellipsoid") {
    return ellipsoid(space, spec.axes[0], spec.axes[1], spec.axes[2], resolution, spec.center);
  }
  if (spec.kind == "perturbed_sphere") return perturbed_sphere(space, spec.r0, spec.eps, spec.modes, resolution);
  throw ConfigError("unknown surface kind '" + spec.kind + "'");
}

std::vector<IdentityRow> identity_battery(const std::string& which, Resolution resolution, std::uint64_t seed) {
  const auto cases = battery_cases(which, seed);
  if (cases.empty()) throw ConfigError("unknown identity '" + which + "'");
  constexpr int kRadial = 64;
  std::vector<IdentityRow> rows(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    IdentityRow& row = rows[i];
    row.identity = cases[i].name;
    row.limit = cases[i].limit;
    row.resolution = resolution;
    row.residual = cases[i].residual(resolution, kRadial);
    row.coarse_residual = cases[i].residual(half(resolution), kRadial / 2);
    row.order = row.residual > 1e-12 ? std::log2(row.coarse_residual / row.residual) : kNaN;
  });
  return rows;
}

int execute(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  if (plan.threads > 0) set_worker_override(plan.threads);
  try {
    validate(plan);
    Outcome o;
    switch (plan.command) {
      case Command::verify_identities: o = run_identities(plan); break;
      case Command::deficit: o = run_deficit(plan); break;
      case Command::levelset_pipeline: o = run_levelset(plan); break;
      case Command::flow: o = run_flow(plan); break;
      case Command::sweep: o = run_sweep(plan); break;
      case Command::serrin: o = run_serrin(plan); break;
      case Command::steklov: o = run_steklov(plan); break;
    }
    Json report{{"command", command_name(plan.command)}, {"seed", plan.seed}};
    for (const auto& [key, value] : o.report.items()) report[key] = value;
    report["checks"] = o.checks.json();
    report["passed"] = o.checks.passed();
    try {
      if (o.csv && plan.csv_path) emit_csv(*o.csv, plan.csv_path, out);
      emit_json(report, plan.json_path, out);
    } catch (const std::runtime_error& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }
    if (!o.checks.passed()) {
      for (const auto& c : o.checks.json()) {
        if (!c["pass"].get<bool>()) err << "threshold violated: " << c["name"].get<std::string>() << '\n';
      }
      return plan.ci ? kExitThreshold : kExitOk;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace umbilic::harness
