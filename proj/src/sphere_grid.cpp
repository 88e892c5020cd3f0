#include "umbilic/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "umbilic/quadrature.hpp"

namespace umbilic {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Normalized associated Legendre functions P̄_lm(cos θ), l = m..max_l, with
// ∫_{-1}^{1} P̄_lm² dx = 1, plus first and second θ-derivatives.
struct LegendreColumn {
  std::vector<double> p, dp, d2p;
};

LegendreColumn legendre_column(int m, int max_l, double x, double s) {
  LegendreColumn col;
  const int count = max_l - m + 1;
  if (count <= 0) return col;
  col.p.resize(count);
  col.dp.resize(count);
  col.d2p.resize(count);

  double pmm = std::sqrt(0.5);
  for (int k = 1; k <= m; ++k) pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  col.p[0] = pmm;
  if (count > 1) col.p[1] = std::sqrt(2.0 * m + 3.0) * x * pmm;
  for (int l = m + 2; l <= max_l; ++l) {
    const double ll = static_cast<double>(l) * l;
    const double mm = static_cast<double>(m) * m;
    const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
    const double b = std::sqrt(((l - 1.0) * (l - 1.0) - mm) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
    col.p[l - m] = a * (x * col.p[l - m - 1] - b * col.p[l - m - 2]);
  }
  for (int l = m; l <= max_l; ++l) {
    const double prev = l > m ? col.p[l - m - 1] : 0.0;
    const double c = std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) * (static_cast<double>(l) * l - static_cast<double>(m) * m));
    const double p = col.p[l - m];
    const double dp = (l * x * p - (l > m ? c * prev : 0.0)) / s;
    col.dp[l - m] = dp;
    col.d2p[l - m] = -(x / s) * dp - (l * (l + 1.0) - m * m / (s * s)) * p;
  }
  return col;
}

}  // namespace

SphereGrid::SphereGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 2 || n_phi < 4) throw std::invalid_argument("SphereGrid: resolution too small");
  max_order_ = std::min(n_theta - 1, n_phi / 2 - 1);

  const QuadratureRule gl = gauss_legendre(n_theta);
  // Ring 0 is nearest the north pole: cos θ descending.
  theta_.resize(n_theta);
  gauss_weights_.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    const double x = gl.nodes[n_theta - 1 - i];
    theta_[i] = std::acos(x);
    gauss_weights_[i] = gl.weights[n_theta - 1 - i];
  }
  phi_.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) phi_[j] = 2.0 * std::numbers::pi * j / n_phi;

  nodes_.reserve(size());
  weights_.reserve(size());
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double st = std::sin(theta_[i]);
    const double ct = std::cos(theta_[i]);
    for (int j = 0; j < n_phi; ++j) {
      nodes_.emplace_back(st * std::cos(phi_[j]), st * std::sin(phi_[j]), ct);
      weights_.push_back(gauss_weights_[i] * dphi);
    }
  }

  const int M = max_order_;
  cos_table_.resize(n_phi, M + 1);
  sin_table_.resize(n_phi, M + 1);
  for (int j = 0; j < n_phi; ++j) {
    for (int m = 0; m <= M; ++m) {
      cos_table_(j, m) = std::cos(m * phi_[j]);
      sin_table_(j, m) = std::sin(m * phi_[j]);
    }
  }

  const int L = max_degree();
  blocks_.resize(M + 1);
  for (int m = 0; m <= M; ++m) {
    const int count = L - m + 1;
    Eigen::MatrixXd P(n_theta, count), D1(n_theta, count), D2(n_theta, count);
    for (int i = 0; i < n_theta; ++i) {
      const LegendreColumn col = legendre_column(m, L, std::cos(theta_[i]), std::sin(theta_[i]));
      for (int c = 0; c < count; ++c) {
        P(i, c) = col.p[c];
        D1(i, c) = col.dp[c];
        D2(i, c) = col.d2p[c];
      }
    }
    // Analysis by Gauss quadrature: coefficient_l = Σ_k w_k P̄_lm(x_k) f(x_k).
    Eigen::MatrixXd analysis = P.transpose();
    for (int k = 0; k < n_theta; ++k) analysis.col(k) *= gauss_weights_[k];
    blocks_[m].project = P * analysis;
    blocks_[m].d1 = D1 * analysis;
    blocks_[m].d2 = D2 * analysis;
  }
}

std::shared_ptr<const SphereGrid> SphereGrid::shared(Resolution res) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SphereGrid>> cache;
  const auto key = std::make_pair(res.n_theta, res.n_phi);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto grid = std::make_shared<const SphereGrid>(res.n_theta, res.n_phi);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(grid)).first->second;
}

double SphereGrid::polar_spacing() const {
  double spacing = theta_.front();
  for (int i = 1; i < n_theta_; ++i) spacing = std::min(spacing, theta_[i] - theta_[i - 1]);
  return spacing;
}

double SphereGrid::integrate(std::span<const double> f) const {
  double sum = 0.0;
  for (std::size_t q = 0; q < size(); ++q) sum += weights_[q] * f[q];
  return sum;
}

Eigen::MatrixXd SphereGrid::analyse(std::span<const double> f) const {
  if (f.size() != size()) throw std::invalid_argument("SphereGrid: field size mismatch");
  const Eigen::Map<const RowMatrix> F(f.data(), n_theta_, n_phi_);
  const int M = max_order_;
  Eigen::MatrixXd coeffs(n_theta_, 2 * (M + 1));
  coeffs.leftCols(M + 1) = F * cos_table_;
  coeffs.rightCols(M + 1) = F * sin_table_;
  coeffs.leftCols(M + 1) *= 2.0 / n_phi_;
  coeffs.col(0) *= 0.5;
  coeffs.rightCols(M + 1) *= 2.0 / n_phi_;
  return coeffs;
}

GridDerivatives SphereGrid::differentiate(std::span<const double> f) const {
  const Eigen::MatrixXd coeffs = analyse(f);
  const int M = max_order_;
  const int n = n_theta_;
  Eigen::MatrixXd V(n, 2 * (M + 1)), T(n, 2 * (M + 1)), TT(n, 2 * (M + 1));
  Eigen::MatrixXd P(n, 2 * (M + 1)), PP(n, 2 * (M + 1)), TP(n, 2 * (M + 1));
  Eigen::MatrixXd ab(n, 2);
  for (int m = 0; m <= M; ++m) {
    ab.col(0) = coeffs.col(m);
    ab.col(1) = coeffs.col(M + 1 + m);
    const OrderBlock& blk = blocks_[m];
    const Eigen::MatrixXd pv = blk.project * ab;
    const Eigen::MatrixXd d1 = blk.d1 * ab;
    const Eigen::MatrixXd d2 = blk.d2 * ab;
    V.col(m) = pv.col(0);
    V.col(M + 1 + m) = pv.col(1);
    T.col(m) = d1.col(0);
    T.col(M + 1 + m) = d1.col(1);
    TT.col(m) = d2.col(0);
    TT.col(M + 1 + m) = d2.col(1);
    // d/dφ (a cos mφ + b sin mφ) = m b cos mφ - m a sin mφ
    P.col(m) = m * pv.col(1);
    P.col(M + 1 + m) = -m * pv.col(0);
    PP.col(m) = -double(m * m) * pv.col(0);
    PP.col(M + 1 + m) = -double(m * m) * pv.col(1);
    TP.col(m) = m * d1.col(1);
    TP.col(M + 1 + m) = -m * d1.col(0);
  }

  Eigen::MatrixXd synth(2 * (M + 1), n_phi_);
  synth.topRows(M + 1) = cos_table_.transpose();
  synth.bottomRows(M + 1) = sin_table_.transpose();

  auto to_nodes = [&](const Eigen::MatrixXd& c) {
    std::vector<double> out(size());
    Eigen::Map<RowMatrix>(out.data(), n, n_phi_) = c * synth;
    return out;
  };

  GridDerivatives d;
  d.value = to_nodes(V);
  d.t = to_nodes(T);
  d.tt = to_nodes(TT);
  d.p = to_nodes(P);
  d.pp = to_nodes(PP);
  d.tp = to_nodes(TP);
  return d;
}

std::vector<double> SphereGrid::project(std::span<const double> f) const {
  const Eigen::MatrixXd coeffs = analyse(f);
  const int M = max_order_;
  Eigen::MatrixXd V(n_theta_, 2 * (M + 1));
  for (int m = 0; m <= M; ++m) {
    V.col(m) = blocks_[m].project * coeffs.col(m);
    V.col(M + 1 + m) = blocks_[m].project * coeffs.col(M + 1 + m);
  }
  Eigen::MatrixXd synth(2 * (M + 1), n_phi_);
  synth.topRows(M + 1) = cos_table_.transpose();
  synth.bottomRows(M + 1) = sin_table_.transpose();
  std::vector<double> out(size());
  Eigen::Map<RowMatrix>(out.data(), n_theta_, n_phi_) = V * synth;
  return out;
}

double real_spherical_harmonic(int l, int m, const Vec3& xi) {
  const int am = std::abs(m);
  if (l < 0 || am > l) throw std::invalid_argument("real_spherical_harmonic: need |m| <= l");
  const Vec3 u = xi.normalized();
  const double x = std::clamp(u.z(), -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  const double phi = std::atan2(u.y(), u.x());
  // Only P̄ values are needed; use a safe s for the derivative part.
  const LegendreColumn col = legendre_column(am, l, x, std::max(s, 1e-300));
  const double p = col.p[l - am];
  if (m == 0) return p / std::sqrt(2.0 * std::numbers::pi);
  const double angular = m > 0 ? std::cos(am * phi) : std::sin(am * phi);
  return p * angular / std::sqrt(std::numbers::pi);
}

}  // namespace umbilic
