#include "umbilic/hypersurface.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include "umbilic/errors.hpp"
#include "umbilic/quadrature.hpp"

namespace umbilic {

namespace {

constexpr double kDegenerateMetric = 1e-14;

}  // namespace

struct Hypersurface::Cache {
  std::once_flag once;
  CurvatureField field;
};

double CurvatureField::integrate(std::span<const double> field) const {
  double sum = 0.0;
  for (std::size_t q = 0; q < nodes.size(); ++q) sum += nodes[q].weight * field[q];
  return sum;
}

double CurvatureField::area() const {
  double sum = 0.0;
  for (const auto& node : nodes) sum += node.weight;
  return sum;
}

Hypersurface::Hypersurface(Spaceform space, std::shared_ptr<const SphereGrid> grid, std::vector<double> rho)
    : space_(space), grid_(std::move(grid)), rho_(std::move(rho)), cache_(std::make_shared<Cache>()) {
  if (!grid_) throw std::invalid_argument("Hypersurface: missing grid");
  if (rho_.size() != grid_->size()) throw std::invalid_argument("Hypersurface: radius count does not match grid");
  std::vector<std::size_t> bad;
  for (std::size_t q = 0; q < rho_.size(); ++q) {
    if (!(rho_[q] > 0.0) || !space_.admits_radius(rho_[q])) bad.push_back(q);
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << "radial graph outside (0, " << space_.radius_cap() << ") for K = " << space_.curvature();
    throw DomainError(describe_nodes(os.str(), bad));
  }
}

Hypersurface Hypersurface::build(const Spaceform& space, const std::function<double(const Vec3&)>& radial_fn,
                                 Resolution resolution) {
  auto grid = SphereGrid::shared(resolution);
  std::vector<double> rho(grid->size());
  for (std::size_t q = 0; q < rho.size(); ++q) rho[q] = radial_fn(grid->node(q));
  return Hypersurface(space, std::move(grid), std::move(rho));
}

Vec3 Hypersurface::point(std::size_t q) const { return chart_point(space_, rho_[q], grid_->node(q)); }

std::vector<Vec3> Hypersurface::points() const {
  std::vector<Vec3> out(size());
  for (std::size_t q = 0; q < size(); ++q) out[q] = point(q);
  return out;
}

const CurvatureField& Hypersurface::curvature() const {
  std::call_once(cache_->once, [this] { cache_->field = curvature_field(*this); });
  return cache_->field;
}

Vec3 chart_point(const Spaceform& space, double r, const Vec3& xi) { return space.coordinate_radius(r) * xi; }

CurvatureField curvature_field(const Hypersurface& M) {
  const SphereGrid& grid = M.grid();
  const Spaceform& space = M.space();
  const ConformalChart chart = space.chart();
  const auto rho = M.rho();

  std::vector<double> S(grid.size());
  for (std::size_t q = 0; q < S.size(); ++q) S[q] = space.coordinate_radius(rho[q]);
  const GridDerivatives d = grid.differentiate(S);

  CurvatureField field;
  field.nodes.resize(grid.size());
  std::vector<std::size_t> degenerate;

  for (int i = 0; i < grid.n_theta(); ++i) {
    const double th = grid.theta(i);
    const double st = std::sin(th), ct = std::cos(th);
    for (int j = 0; j < grid.n_phi(); ++j) {
      const std::size_t q = grid.index(i, j);
      const double sp = std::sin(grid.phi(j)), cp = std::cos(grid.phi(j));
      const Vec3& xi = grid.node(q);
      const Vec3 xt(ct * cp, ct * sp, -st);
      const Vec3 xp(-st * sp, st * cp, 0.0);
      const Vec3 xtp(-ct * sp, ct * cp, 0.0);
      const Vec3 xpp(-st * cp, -st * sp, 0.0);

      const double s = S[q];
      const double s_t = d.t[q], s_p = d.p[q];
      CurvatureNode& n = field.nodes[q];
      n.xi = xi;
      n.r = rho[q];
      n.x = s * xi;
      n.tangents = {s_t * xi + s * xt, s_p * xi + s * xp};
      n.second = {d.tt[q] * xi + 2.0 * s_t * xt - s * xi,
                  d.tp[q] * xi + s_t * xp + s_p * xt + s * xtp,
                  d.pp[q] * xi + 2.0 * s_p * xp + s * xpp};

      const auto& [Xt, Xp] = n.tangents;
      Mat2 gh;
      gh << Xt.dot(Xt), Xt.dot(Xp), Xt.dot(Xp), Xp.dot(Xp);
      const double det = gh.determinant();
      if (!(det > kDegenerateMetric)) {
        degenerate.push_back(q);
        continue;
      }
      const Vec3 N = Xt.cross(Xp).normalized();
      Mat2 hh;
      hh << -n.second[0].dot(N), -n.second[1].dot(N), -n.second[1].dot(N), -n.second[2].dot(N);

      n.psi = chart.psi(n.x);
      n.grad_psi = chart.grad_psi(n.x);
      const double e = std::exp(n.psi);
      const double dpsi_n = n.grad_psi.dot(N);
      n.g_euclid = gh;
      n.h_euclid = hh;
      n.g = e * e * gh;
      n.h = e * (hh + dpsi_n * gh);

      // Weingarten map e^{ψ} A = Â + ∂_N ψ id
      const Mat2 A = (gh.inverse() * hh + dpsi_n * Mat2::Identity()) / e;
      const double tr = A.trace();
      const Mat2 A0 = A - 0.5 * tr * Mat2::Identity();
      const double a2 = std::max(0.0, (A0 * A0).trace());
      const double mean = 0.5 * tr;
      const double half_gap = std::sqrt(0.5 * a2);
      n.kappa = {mean - half_gap, mean + half_gap};
      n.Hk = {1.0, mean, n.kappa[0] * n.kappa[1]};
      n.a_traceless_norm = std::sqrt(a2);

      n.nu_euclid = N;
      n.nu = N / e;
      n.theta_prime = space.theta_prime(n.r);
      n.u = space.theta(n.r) * xi.dot(N);
      n.area_element = e * e * std::sqrt(det) / st;
      n.weight = grid.weights()[q] * n.area_element;
    }
  }
  if (!degenerate.empty()) throw NumericalError(describe_nodes("degenerate induced metric", degenerate));
  return field;
}

double integrate_surface(const Hypersurface& M, std::span<const double> field) {
  return M.curvature().integrate(field);
}

double integrate_domain(const Hypersurface& M, const std::function<double(double, const Vec3&)>& integrand,
                        int radial_nodes) {
  const QuadratureRule rule = gauss_legendre(radial_nodes, 0.0, 1.0);
  const Spaceform& space = M.space();
  const SphereGrid& grid = M.grid();
  const auto rho = M.rho();
  double total = 0.0;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const Vec3& xi = grid.node(q);
    const double R = rho[q];
    double ray = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double r = R * rule.nodes[k];
      const double w = space.theta(r);
      ray += rule.weights[k] * integrand(r, xi) * w * w;
    }
    total += grid.weights()[q] * R * ray;
  }
  return total;
}

double enclosed_volume(const Hypersurface& M, int radial_nodes) {
  return integrate_domain(M, [](double, const Vec3&) { return 1.0; }, radial_nodes);
}

TangentialData tangential_calculus(const Hypersurface& M, const CurvatureField& F, const AmbientField& f) {
  const std::size_t n = F.size();
  TangentialData out;
  out.f.resize(n);
  out.dnu.resize(n);
  out.grad_sq.resize(n);
  out.lap.resize(n);
  out.h_grad.resize(n);

  for (std::size_t q = 0; q < n; ++q) {
    const CurvatureNode& node = F[q];
    const FieldJet jet = f.jet(node.x);
    out.f[q] = jet.value;
    out.dnu[q] = jet.grad.dot(node.nu);

    const auto& X = node.tangents;
    const Eigen::Vector2d Fk(jet.grad.dot(X[0]), jet.grad.dot(X[1]));
    // second derivatives of f∘X in (θ, φ)
    const std::array<std::array<int, 2>, 3> pairs{{{0, 0}, {0, 1}, {1, 1}}};
    Mat2 Fij;
    for (int s = 0; s < 3; ++s) {
      const auto [a, b] = pairs[s];
      const double v = X[a].dot(jet.hess * X[b]) + jet.grad.dot(node.second[s]);
      Fij(a, b) = v;
      Fij(b, a) = v;
    }
    const Mat2 gh_inv = node.g_euclid.inverse();
    const Eigen::Vector2d psi_k(node.grad_psi.dot(X[0]), node.grad_psi.dot(X[1]));
    const Mat2 g_inv = node.g.inverse();

    // Γ^k_ij of e^{2ψ} ĝ: Γ̂^k_ij + δ^k_i ψ_j + δ^k_j ψ_i - ĝ_ij ĝ^{kl} ψ_l
    double lap = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Vec3& Xab = node.second[a + b];
        const Eigen::Vector2d proj(Xab.dot(X[0]), Xab.dot(X[1]));
        Eigen::Vector2d gamma = gh_inv * proj;
        gamma[a] += psi_k[b];
        gamma[b] += psi_k[a];
        gamma -= node.g_euclid(a, b) * (gh_inv * psi_k);
        lap += g_inv(a, b) * (Fij(a, b) - gamma.dot(Fk));
      }
    }
    const Eigen::Vector2d up = g_inv * Fk;
    out.lap[q] = lap;
    out.grad_sq[q] = Fk.dot(up);
    out.h_grad[q] = up.dot(node.h * up);
  }
  return out;
}

}  // namespace umbilic
