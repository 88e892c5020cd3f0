#include "umbilic/deficits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "umbilic/errors.hpp"

namespace umbilic {

namespace {

constexpr int n = kSurfaceDimension;
constexpr double kConeThreshold = 1e-12;
const double kUnitBallQuermass = 4.0 * std::numbers::pi / 3.0;

double json_number(double v) { return std::isfinite(v) ? v : 0.0; }

// Nodes where H_j <= threshold for some 1 <= j <= k.
std::vector<std::size_t> cone_violations(const CurvatureField& F, int k) {
  std::vector<std::size_t> bad;
  for (std::size_t q = 0; q < F.size(); ++q) {
    for (int j = 1; j <= k; ++j) {
      if (!(F[q].Hk[j] > kConeThreshold)) {
        bad.push_back(q);
        break;
      }
    }
  }
  return bad;
}

// H_j with H_{-1} = 1/H_1 and H_j = 0 for j > n.
double H(const CurvatureNode& node, int j) {
  if (j == -1) return 1.0 / node.Hk[1];
  if (j > n) return 0.0;
  return node.Hk[j];
}

DeficitReport make_report(const std::string& name, const Hypersurface& M) {
  DeficitReport r;
  r.name = name;
  r.resolution = M.resolution();
  return r;
}

}  // namespace

std::string DeficitReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["k"] = k;
  j["l"] = l;
  j["value"] = value;
  j["reference_constant"] = reference_constant;
  j["resolution"] = {resolution.n_theta, resolution.n_phi};
  if (std::isfinite(refinement_residual)) {
    j["refinement_residual"] = json_number(refinement_residual);
  } else {
    j["refinement_residual"] = nullptr;
  }
  j["seed"] = seed;
  return j.dump();
}

double domain_warp_integral(const Hypersurface& M, int radial_nodes) {
  const Spaceform& space = M.space();
  return integrate_domain(M, [&](double r, const Vec3&) { return space.theta_prime(r); }, radial_nodes);
}

DeficitReport hk_deficit(const Hypersurface& M) {
  const CurvatureField& F = M.curvature();
  if (auto bad = cone_violations(F, 1); !bad.empty()) {
    throw PreconditionError(describe_nodes("HK deficit needs H_1 > 0", bad), std::move(bad));
  }
  DeficitReport r = make_report("HK", M);
  const double total_u = F.integrate_by([](const CurvatureNode& p) { return p.u; });
  r.value = F.integrate_by([](const CurvatureNode& p) { return p.theta_prime / p.Hk[1]; }) - total_u;
  r.reference_constant = total_u;
  return r;
}

DeficitReport cmc_deficit(const Hypersurface& M, CmcConstant convention) {
  const CurvatureField& F = M.curvature();
  const double boundary = F.integrate_by([](const CurvatureNode& p) { return p.theta_prime; });
  double constant = boundary / ((n + 1) * domain_warp_integral(M));
  if (convention == CmcConstant::literal) constant *= n;
  DeficitReport r = make_report("CMC", M);
  r.reference_constant = constant;
  r.value = F.integrate_by([&](const CurvatureNode& p) { return p.theta_prime * std::max(0.0, constant - p.Hk[1]); });
  return r;
}

DeficitReport cfc_deficit(const Hypersurface& M, int k, int l) {
  if (k < 1 || k > n - 1 || l < 0 || l > k) {
    throw DomainError("CFC deficit needs 1 <= k <= n - 1 and 0 <= l <= k");
  }
  const CurvatureField& F = M.curvature();
  const int cone = l <= k - 1 ? k + 1 : k;
  if (auto bad = cone_violations(F, cone); !bad.empty()) {
    throw PreconditionError(describe_nodes("CFC deficit needs kappa in Gamma_" + std::to_string(cone), bad),
                            std::move(bad));
  }
  const double num = F.integrate_by([&](const CurvatureNode& p) { return p.theta_prime * H(p, k); });
  const double den = F.integrate_by([&](const CurvatureNode& p) { return p.theta_prime * H(p, l - 1); });
  const double ratio = num / den;
  DeficitReport r = make_report("CFC", M);
  r.k = k;
  r.l = l;
  r.reference_constant = ratio;
  r.value = F.integrate_by([&](const CurvatureNode& p) {
    return p.theta_prime * H(p, l - 1) * std::max(0.0, ratio - H(p, k + 1) / H(p, l));
  });
  return r;
}

std::array<double, 4> quermassintegrals(const Hypersurface& M) {
  const CurvatureField& F = M.curvature();
  std::array<double, 4> W{};
  W[0] = enclosed_volume(M);
  for (int j = 1; j <= n + 1; ++j) {
    W[j] = F.integrate_by([&](const CurvatureNode& p) { return p.Hk[j - 1]; }) / (n + 1);
  }
  return W;
}

std::array<double, 4> normalized_quermassintegrals(const Hypersurface& M) {
  auto W = quermassintegrals(M);
  for (double& w : W) w /= kUnitBallQuermass;
  return W;
}

DeficitReport af_deficit(const Hypersurface& M, int k) {
  if (M.space().curvature() != 0) throw UnsupportedSpaceError("AF deficit is defined for K = 0 only");
  if (k < 1 || k > n) throw DomainError("AF deficit needs 1 <= k <= n");
  const CurvatureField& F = M.curvature();
  if (auto bad = cone_violations(F, k); !bad.empty()) {
    throw PreconditionError(describe_nodes("AF deficit needs kappa in Gamma_" + std::to_string(k), bad),
                            std::move(bad));
  }
  const auto W = normalized_quermassintegrals(M);
  DeficitReport r = make_report("AF", M);
  r.k = k;
  const double exponent = static_cast<double>(n - k) / (n - k + 1);
  r.reference_constant = std::pow(W[k], exponent);
  r.value = W[k + 1] - r.reference_constant;
  return r;
}

HsiungSides hsiung_sides(const Hypersurface& M, int k) {
  if (k < 0 || k > n - 1) throw DomainError("Hsiung identity needs 0 <= k <= n - 1");
  const CurvatureField& F = M.curvature();
  HsiungSides out;
  out.lhs = F.integrate_by([k](const CurvatureNode& p) { return p.theta_prime * H(p, k); });
  out.rhs = F.integrate_by([k](const CurvatureNode& p) { return p.u * H(p, k + 1); });
  const double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.residual = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
  return out;
}

}  // namespace umbilic
