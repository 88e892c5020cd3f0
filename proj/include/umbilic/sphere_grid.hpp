#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "umbilic/spaceform.hpp"

namespace umbilic {

struct Resolution {
  int n_theta = 64;
  int n_phi = 128;

  Resolution refined() const { return {2 * n_theta, 2 * n_phi}; }
  friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// Node values of a function on S² and its spherical-coordinate derivatives.
/// `value` is the band-limited projection of the input.
struct GridDerivatives {
  std::vector<double> value, t, p, tt, tp, pp;
};

/// Tensor grid on the unit sphere: Gauss–Legendre nodes in cos θ times
/// uniform azimuths. Nodes are stored row-major, θ rings first then φ.
///
/// Derivatives are spectral. Each ring is Fourier analysed in φ; for each
/// azimuthal order m the θ-profiles are expanded in normalized associated
/// Legendre functions up to degree L = n_theta - 1 and differentiated
/// analytically. Band-limited fields (degree <= L) are differentiated
/// exactly; modes with m > min(L, n_phi/2 - 1) are discarded.
class SphereGrid {
 public:
  SphereGrid(int n_theta, int n_phi);

  /// Shared, cached instance for a resolution.
  static std::shared_ptr<const SphereGrid> shared(Resolution res);

  int n_theta() const noexcept { return n_theta_; }
  int n_phi() const noexcept { return n_phi_; }
  Resolution resolution() const noexcept { return {n_theta_, n_phi_}; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_theta_) * n_phi_; }
  int max_degree() const noexcept { return n_theta_ - 1; }
  int max_order() const noexcept { return max_order_; }

  std::size_t index(int ring, int column) const noexcept {
    return static_cast<std::size_t>(ring) * n_phi_ + column;
  }
  double theta(int ring) const { return theta_[ring]; }
  double phi(int column) const { return phi_[column]; }
  const Vec3& node(std::size_t q) const { return nodes_[q]; }
  std::span<const Vec3> nodes() const { return nodes_; }
  /// Surface quadrature weights on the unit sphere (sum 4π).
  std::span<const double> weights() const { return weights_; }
  /// Smallest node spacing on a unit-radius great circle in θ (radians).
  double polar_spacing() const;

  double integrate(std::span<const double> f) const;
  GridDerivatives differentiate(std::span<const double> f) const;
  /// L²-projection onto real spherical harmonics of degree <= max_degree().
  std::vector<double> project(std::span<const double> f) const;

 private:
  struct OrderBlock {
    Eigen::MatrixXd project, d1, d2;  // n_theta x n_theta operators on ring profiles
  };

  Eigen::MatrixXd analyse(std::span<const double> f) const;  // n_theta x (2 * (M + 1)): [a_m | b_m]

  int n_theta_;
  int n_phi_;
  int max_order_;
  std::vector<double> theta_, phi_, weights_;
  std::vector<double> gauss_weights_;  // on [-1, 1] in cos θ
  std::vector<Vec3> nodes_;
  Eigen::MatrixXd cos_table_, sin_table_;  // n_phi x (M + 1)
  std::vector<OrderBlock> blocks_;
};

/// Real orthonormal spherical harmonic Y_lm at a unit vector; m < 0 selects
/// the sin(|m| φ) member.
double real_spherical_harmonic(int l, int m, const Vec3& xi);

}  // namespace umbilic
