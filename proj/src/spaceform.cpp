#include "umbilic/spaceform.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "umbilic/errors.hpp"

namespace umbilic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHemisphereMargin = 1e-6;

double default_cap(int curvature) {
  return curvature == 1 ? std::numbers::pi / 2 - kHemisphereMargin : kInf;
}

void check_curvature(int curvature) {
  if (curvature < -1 || curvature > 1) {
    throw DomainError("spaceform curvature must be -1, 0 or 1, got " + std::to_string(curvature));
  }
}

}  // namespace

std::string describe_nodes(const std::string& message, const std::vector<std::size_t>& nodes) {
  std::ostringstream os;
  os << message << " (" << nodes.size() << " nodes";
  const std::size_t shown = std::min<std::size_t>(nodes.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) os << (i == 0 ? ": " : ", ") << nodes[i];
  if (shown < nodes.size()) os << ", ...";
  os << ")";
  return os.str();
}

Spaceform::Spaceform(int curvature) : Spaceform(curvature, default_cap(curvature)) {}

Spaceform::Spaceform(int curvature, double radius_cap) : curvature_(curvature), radius_cap_(radius_cap) {
  check_curvature(curvature);
  if (!(radius_cap > 0.0)) throw DomainError("radius cap must be positive");
  if (curvature == 1 && radius_cap > std::numbers::pi / 2) {
    throw DomainError("K = 1 radius cap must stay inside the open hemisphere (<= pi/2)");
  }
}

double Spaceform::theta(double r) const {
  switch (curvature_) {
    case 0: return r;
    case -1: return std::sinh(r);
    default: return std::sin(r);
  }
}

double Spaceform::theta_prime(double r) const {
  switch (curvature_) {
    case 0: return 1.0;
    case -1: return std::cosh(r);
    default: return std::cos(r);
  }
}

Warp Spaceform::warp(double r) const {
  if (!admits_radius(r)) {
    std::ostringstream os;
    os << "geodesic radius " << r << " outside [0, " << radius_cap_ << ") for K = " << curvature_;
    throw DomainError(os.str());
  }
  Warp w;
  w.theta = theta(r);
  w.theta_prime = theta_prime(r);
  switch (curvature_) {
    case 0: w.Theta = 0.5 * r * r; break;
    // cosh r - 1 and 1 - cos r, written to avoid cancellation at small r
    case -1: w.Theta = 2.0 * std::pow(std::sinh(0.5 * r), 2); break;
    default: w.Theta = 2.0 * std::pow(std::sin(0.5 * r), 2); break;
  }
  return w;
}

double Spaceform::coordinate_radius(double r) const {
  switch (curvature_) {
    case 0: return r;
    case -1: return std::tanh(0.5 * r);
    default: return std::tan(0.5 * r);
  }
}

double Spaceform::geodesic_radius(double s) const {
  switch (curvature_) {
    case 0: return s;
    case -1: return 2.0 * std::atanh(s);
    default: return 2.0 * std::atan(s);
  }
}

double Spaceform::chart_radius_bound() const {
  switch (curvature_) {
    case 0: return kInf;
    case -1: return 1.0;
    default: return std::tan(0.5 * radius_cap_);
  }
}

bool Spaceform::in_chart(const Vec3& x) const {
  return x.allFinite() && x.norm() < chart_radius_bound();
}

double Spaceform::geodesic_distance(const Vec3& a, const Vec3& b) const {
  if (!in_chart(a) || !in_chart(b)) throw DomainError("geodesic_distance: point outside chart");
  const double chord = (a - b).norm();
  switch (curvature_) {
    case 0: return chord;
    case -1: {
      const double denom = std::sqrt((1.0 - a.squaredNorm()) * (1.0 - b.squaredNorm()));
      return 2.0 * std::asinh(chord / denom);
    }
    default: {
      const double denom = std::sqrt((1.0 + a.squaredNorm()) * (1.0 + b.squaredNorm()));
      return 2.0 * std::asin(std::min(1.0, chord / denom));
    }
  }
}

ConformalChart Spaceform::chart() const { return ConformalChart(curvature_); }

Warp warp_eval(const Spaceform& space, double r) { return space.warp(r); }

double geodesic_distance(const Spaceform& space, const Vec3& a, const Vec3& b) {
  return space.geodesic_distance(a, b);
}

// ψ = log 2 - log(1 + K|x|²) for K = ±1.
double ConformalChart::psi(const Vec3& x) const {
  if (curvature_ == 0) return 0.0;
  return std::log(2.0) - std::log1p(curvature_ * x.squaredNorm());
}

double ConformalChart::conformal_factor(const Vec3& x) const {
  if (curvature_ == 0) return 1.0;
  return 2.0 / (1.0 + curvature_ * x.squaredNorm());
}

Vec3 ConformalChart::grad_psi(const Vec3& x) const {
  if (curvature_ == 0) return Vec3::Zero();
  return (-2.0 * curvature_ / (1.0 + curvature_ * x.squaredNorm())) * x;
}

Mat3 ConformalChart::hess_psi(const Vec3& x) const {
  if (curvature_ == 0) return Mat3::Zero();
  const double d = 1.0 + curvature_ * x.squaredNorm();
  return (-2.0 * curvature_ / d) * Mat3::Identity() + (4.0 / (d * d)) * (x * x.transpose());
}

Christoffel ConformalChart::christoffel(const Vec3& x) const {
  const Vec3 dpsi = grad_psi(x);
  Christoffel gamma;
  for (int a = 0; a < 3; ++a) {
    Mat3& G = gamma[a];
    G.setZero();
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        double v = 0.0;
        if (a == b) v += dpsi[c];
        if (a == c) v += dpsi[b];
        if (b == c) v -= dpsi[a];
        G(b, c) = v;
      }
    }
  }
  return gamma;
}

Mat3 ConformalChart::covariant_hessian(const Vec3& x, const Vec3& grad, const Mat3& hess) const {
  if (curvature_ == 0) return hess;
  // Γ^α_{βγ} ∂_α f = ψ_γ f_β + ψ_β f_γ - δ_{βγ} <∇ψ, ∇f>
  const Vec3 dpsi = grad_psi(x);
  Mat3 correction = dpsi * grad.transpose() + grad * dpsi.transpose();
  correction.diagonal().array() -= dpsi.dot(grad);
  return hess - correction;
}

ConformalChart conformal_model(const Spaceform& space) { return space.chart(); }

}  // namespace umbilic
