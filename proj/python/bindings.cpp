#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "umbilic/deficits.hpp"
#include "umbilic/elliptic.hpp"
#include "umbilic/flow.hpp"
#include "umbilic/harness/config.hpp"
#include "umbilic/harness/execute.hpp"
#include "umbilic/harness/sweep.hpp"
#include "umbilic/levelset.hpp"
#include "umbilic/sphere_fit.hpp"
#include "umbilic/surfaces.hpp"
#include "umbilic/symmetric.hpp"

namespace py = pybind11;
using namespace umbilic;

namespace {

Resolution to_res(const std::pair<int, int>& r) { return {r.first, r.second}; }

std::vector<SphericalMode> to_modes(const std::vector<std::tuple<int, int, double>>& modes) {
  if (modes.empty()) return default_perturbation_modes();
  std::vector<SphericalMode> out;
  for (const auto& [l, m, c] : modes) out.push_back({l, m, c});
  return out;
}

// Per-node curvature data as flat lists.
py::dict curvature_dict(const Hypersurface& M) {
  const auto& F = M.curvature();
  std::vector<double> k1, k2, h1, h2, a0, u, w;
  for (const auto& n : F.nodes) {
    k1.push_back(n.kappa[0]);
    k2.push_back(n.kappa[1]);
    h1.push_back(n.Hk[1]);
    h2.push_back(n.Hk[2]);
    a0.push_back(n.a_traceless_norm);
    u.push_back(n.u);
    w.push_back(n.weight);
  }
  py::dict d;
  d["kappa1"] = k1;
  d["kappa2"] = k2;
  d["H1"] = h1;
  d["H2"] = h2;
  d["traceless_norm"] = a0;
  d["support"] = u;
  d["weight"] = w;
  return d;
}

py::dict deficit_dict(const DeficitReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["k"] = r.k;
  d["l"] = r.l;
  d["value"] = r.value;
  d["reference_constant"] = r.reference_constant;
  return d;
}

}  // namespace

PYBIND11_MODULE(_umbilic, m) {
  m.doc() = "Starshaped hypersurfaces in space forms: curvature, deficits, level sets, flows";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UnsupportedSpaceError>(m, "UnsupportedSpaceError", domain.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<harness::ConfigError>(m, "ConfigError", PyExc_ValueError);
  (void)numerical;

  py::class_<Spaceform>(m, "Spaceform")
      .def(py::init<int>(), py::arg("curvature"))
      .def(py::init<int, double>(), py::arg("curvature"), py::arg("radius_cap"))
      .def_property_readonly("curvature", &Spaceform::curvature)
      .def_property_readonly("radius_cap", &Spaceform::radius_cap)
      .def("theta", &Spaceform::theta)
      .def("theta_prime", &Spaceform::theta_prime)
      .def("geodesic_distance", &Spaceform::geodesic_distance)
      .def("__repr__", [](const Spaceform& s) { return "Spaceform(" + std::to_string(s.curvature()) + ")"; });

  py::class_<Hypersurface>(m, "Hypersurface")
      .def_property_readonly("resolution",
                             [](const Hypersurface& M) {
                               return std::make_pair(M.resolution().n_theta, M.resolution().n_phi);
                             })
      .def_property_readonly("space", &Hypersurface::space)
      .def_property_readonly("rho", [](const Hypersurface& M) { return std::vector<double>(M.rho().begin(), M.rho().end()); })
      .def("points", &Hypersurface::points)
      .def("area", [](const Hypersurface& M) { return M.curvature().area(); })
      .def("volume", [](const Hypersurface& M) { return enclosed_volume(M); })
      .def("curvature", &curvature_dict)
      .def("__len__", &Hypersurface::size);

  m.def(
      "geodesic_sphere",
      [](const Spaceform& s, double r, std::pair<int, int> res, const Vec3& c) {
        return geodesic_sphere(s, r, to_res(res), c);
      },
      py::arg("space"), py::arg("radius"), py::arg("resolution") = std::make_pair(64, 128),
      py::arg("center") = Vec3::Zero());
  m.def(
      "ellipsoid",
      [](const Spaceform& s, double a, double b, double c, std::pair<int, int> res) {
        return ellipsoid(s, a, b, c, to_res(res));
      },
      py::arg("space"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("resolution") = std::make_pair(64, 128));
  m.def(
      "perturbed_sphere",
      [](const Spaceform& s, double r0, double eps, const std::vector<std::tuple<int, int, double>>& modes,
         std::pair<int, int> res) { return perturbed_sphere(s, r0, eps, to_modes(modes), to_res(res)); },
      py::arg("space"), py::arg("r0"), py::arg("eps"), py::arg("modes") = std::vector<std::tuple<int, int, double>>{},
      py::arg("resolution") = std::make_pair(64, 128));

  m.def("hk_deficit", [](const Hypersurface& M) { return deficit_dict(hk_deficit(M)); });
  m.def(
      "cmc_deficit",
      [](const Hypersurface& M, bool literal) {
        return deficit_dict(cmc_deficit(M, literal ? CmcConstant::literal : CmcConstant::normalized));
      },
      py::arg("surface"), py::arg("literal") = false);
  m.def("cfc_deficit", [](const Hypersurface& M, int k, int l) { return deficit_dict(cfc_deficit(M, k, l)); },
        py::arg("surface"), py::arg("k"), py::arg("l"));
  m.def("af_deficit", [](const Hypersurface& M, int k) { return deficit_dict(af_deficit(M, k)); }, py::arg("surface"),
        py::arg("k"));
  m.def("quermassintegrals", &quermassintegrals);
  m.def(
      "hsiung",
      [](const Hypersurface& M, int k) {
        const auto s = hsiung_sides(M, k);
        return py::make_tuple(s.lhs, s.rhs, s.residual);
      },
      py::arg("surface"), py::arg("k"), "(lhs, rhs, residual) of the Minkowski-Hsiung identity");
  m.def(
      "sphere_distance",
      [](const Hypersurface& M) {
        const auto f = fit_sphere_distance(M);
        return py::make_tuple(f.dist, f.radius, f.center);
      },
      "(dist, radius, center) of the best Chebyshev sphere");

  m.def(
      "newton_gap",
      [](std::vector<double> kappa, int k) {
        std::sort(kappa.begin(), kappa.end());
        const auto g = newton_gap(kappa, k);
        py::dict d;
        d["gap"] = g.gap;
        d["ratio"] = g.ratio;
        d["hk1n1"] = g.hk1n1;
        d["traceless_sq"] = g.traceless_sq;
        return d;
      },
      py::arg("kappa"), py::arg("k"));
  m.def(
      "newton_constant_estimate",
      [](int n, int k, std::size_t samples, std::uint64_t seed) {
        const auto s = newton_constant_estimate(n, k, samples, seed);
        py::dict d;
        d["estimate"] = s.estimate;
        d["accepted"] = s.accepted;
        d["min_gap"] = s.min_gap;
        d["min_hk1n1"] = s.min_hk1n1;
        return d;
      },
      py::arg("n"), py::arg("k"), py::arg("samples") = 100000, py::arg("seed") = 1);

  py::class_<AmbientField>(m, "AmbientField").def("__call__", [](const AmbientField& f, const Vec3& x) {
    return f.jet(x).value;
  });
  m.def("quadratic_field", [](const Vec3& diag, double c) { return quadratic_field(diag.asDiagonal().toDenseMatrix(), c); },
        py::arg("diagonal"), py::arg("c") = -1.0);
  m.def("warp_prime_field", &warp_prime_field);
  m.def("torsion_ball_field", &torsion_ball_field);
  m.def("anisotropic_quartic_field", &anisotropic_quartic_field);
  m.def("random_polynomial_field", &random_polynomial_field, py::arg("seed"), py::arg("stream"),
        py::arg("max_degree") = 4);

  m.def(
      "extract_level",
      [](const Spaceform& s, const AmbientField& f, double level, std::pair<int, int> res) {
        return extract_level(s, f, level, to_res(res));
      },
      py::arg("space"), py::arg("field"), py::arg("level") = 0.0, py::arg("resolution") = std::make_pair(32, 64));
  m.def(
      "hessian_sff_residual",
      [](const Spaceform& s, const AmbientField& f, const Hypersurface& M) {
        const auto r = hessian_vs_sff_residual(s, f, M);
        return py::make_tuple(r.residual, r.pointwise_residual);
      },
      py::arg("space"), py::arg("field"), py::arg("level_set"));
  m.def(
      "levelset_pipeline",
      [](const Spaceform& s, const AmbientField& f, double level_cap, std::pair<int, int> res) {
        BandSpec band;
        band.level_cap = level_cap;
        band.resolution = to_res(res);
        const auto r = levelset_stability_pipeline(s, f, band);
        py::dict d;
        d["dist"] = r.dist;
        d["slice_dist"] = r.slice_dist;
        d["transfer"] = r.transfer;
        d["bound_rhs"] = r.bound_rhs;
        d["ratio"] = r.ratio;
        d["band_integral"] = r.band_integral;
        d["slice_holds"] = r.slice.holds;
        return d;
      },
      py::arg("space"), py::arg("field"), py::arg("level_cap") = 0.1, py::arg("resolution") = std::make_pair(24, 48));

  m.def(
      "torsion_ball",
      [](const Spaceform& s, double r0) {
        const auto t = torsion_solve_ball(s, r0);
        return py::make_tuple(t.boundary_gradient, hopf_gradient_check(t).positive);
      },
      py::arg("space"), py::arg("r0"), "(boundary gradient, Hopf positivity)");
  m.def(
      "reilly",
      [](const Hypersurface& M, const AmbientField& f) {
        const auto s = reilly_sides(M, f);
        return py::make_tuple(s.lhs, s.rhs, s.residual);
      },
      py::arg("surface"), py::arg("field"));
  m.def(
      "serrin",
      [](const std::string& profile, int radial_nodes) {
        const RadialProfile p = profile == "torsion"  ? torsion_profile()
                                : profile == "quartic" ? quartic_profile()
                                : profile == "exponential"
                                    ? exponential_profile()
                                    : throw DomainError("unknown profile: " + profile);
        const auto t = serrin_identity(serrin_pair_manufacture(p, 1.0), {32, 64}, radial_nodes);
        return py::make_tuple(t.lhs, t.residual);
      },
      py::arg("profile"), py::arg("radial_nodes") = 64, "(lhs, residual) for a manufactured pair on the unit ball");
  m.def(
      "steklov",
      [](const Hypersurface& M, const AmbientField& w) {
        const auto r = steklov_identity_residual(M, w);
        return py::make_tuple(r.residual, r.rayleigh, r.deficit);
      },
      py::arg("surface"), py::arg("field"));

  m.def(
      "flow_run",
      [](const Hypersurface& M, int k, double t_max) {
        FlowOptions opt;
        opt.t_max = t_max;
        const auto run = flow_run(M, k, opt);
        std::vector<double> t, w1, w2, a0;
        for (const auto& mon : run.trajectory) {
          t.push_back(mon.t);
          w1.push_back(mon.W[1]);
          w2.push_back(mon.W[2]);
          a0.push_back(mon.a_traceless_max);
        }
        py::dict d;
        d["t"] = t;
        d["W1"] = w1;
        d["W2"] = w2;
        d["traceless_max"] = a0;
        d["converged"] = run.converged;
        d["steps"] = run.steps;
        d["flow_integral"] = run.flow_integral;
        d["max_wk_drift"] = run.max_wk_drift;
        d["final"] = run.final_state.surface;
        return d;
      },
      py::arg("surface"), py::arg("k") = 1, py::arg("t_max") = 10.0);
  m.def("variation_constant", [](int k, std::pair<int, int> res) { return variation_constant(k, to_res(res)); },
        py::arg("k"), py::arg("resolution") = std::make_pair(32, 64));

  m.def(
      "sweep",
      [](const std::string& family, const std::string& deficit, std::vector<double> eps,
         std::vector<std::pair<int, int>> resolutions, int curvature) {
        harness::SweepSpec spec;
        spec.family = family;
        spec.deficit = deficit;
        if (!eps.empty()) spec.eps = std::move(eps);
        if (!resolutions.empty()) {
          spec.resolutions.clear();
          for (auto r : resolutions) spec.resolutions.push_back(to_res(r));
        }
        harness::DeficitSpec d;
        d.kind = deficit;
        py::list out;
        for (const auto& r : harness::sweep(Spaceform(curvature), spec, d)) {
          py::dict row;
          row["resolution"] = std::make_pair(r.resolution.n_theta, r.resolution.n_phi);
          row["slope"] = r.fitted_slope;
          row["C"] = r.fitted_C;
          row["exponent"] = r.stability_exponent;
          std::vector<std::tuple<double, double, double>> rows;
          for (const auto& x : r.rows) rows.emplace_back(x.eps, x.deficit, x.distance);
          row["rows"] = rows;
          out.append(row);
        }
        return out;
      },
      py::arg("family") = "perturbed_sphere", py::arg("deficit") = "hk", py::arg("eps") = std::vector<double>{},
      py::arg("resolutions") = std::vector<std::pair<int, int>>{}, py::arg("curvature") = 0);

  m.def(
      "run_config",
      [](const std::string& text) {
        const auto plan = harness::parse_config_string(text);
        std::ostringstream out, err;
        const int code = harness::execute(plan, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("toml"), "Execute a TOML run plan; returns (exit code, stdout, stderr)");
}
