#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "umbilic/ambient_field.hpp"
#include "umbilic/spaceform.hpp"
#include "umbilic/sphere_grid.hpp"

namespace umbilic {

/// Geometry of a radial graph at one grid node. Vectors are chart
/// coordinate components; g and h are taken with respect to the ambient
/// metric ḡ = e^{2ψ}<·,·> in the (θ, φ) parametrisation.
struct CurvatureNode {
  Vec3 x;                       // chart point
  Vec3 xi;                      // direction on S²
  double r = 0.0;               // geodesic radius from the chart origin
  std::array<Vec3, 2> tangents; // X_θ, X_φ
  std::array<Vec3, 3> second;   // X_θθ, X_θφ, X_φφ
  Mat2 g_euclid, h_euclid;      // flat-chart metric and second fundamental form
  Mat2 g, h;
  std::array<double, 2> kappa{};  // ascending
  std::array<double, 3> Hk{};     // H_0, H_1, H_2
  double a_traceless_norm = 0.0;  // |Å|
  double u = 0.0;                 // support function ϑ(r) ḡ(∂_r, ν)
  Vec3 nu;                        // ḡ-unit outward normal
  Vec3 nu_euclid;                 // Euclidean unit outward normal of the chart image
  double psi = 0.0;
  Vec3 grad_psi;
  double theta_prime = 1.0;       // ϑ'(r)
  double area_element = 0.0;      // dA relative to the unit-sphere measure
  double weight = 0.0;            // quadrature weight for ∫_M
};

struct CurvatureField {
  std::vector<CurvatureNode> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
  const CurvatureNode& operator[](std::size_t q) const { return nodes[q]; }

  /// Applies fn to every node and collects the results.
  template <class Fn>
  std::vector<double> map(Fn&& fn) const {
    std::vector<double> out;
    out.reserve(nodes.size());
    for (const auto& node : nodes) out.push_back(fn(node));
    return out;
  }

  double integrate(std::span<const double> field) const;
  template <class Fn>
  double integrate_by(Fn&& fn) const {
    double sum = 0.0;
    for (const auto& node : nodes) sum += node.weight * fn(node);
    return sum;
  }
  double area() const;
};

/// Closed starshaped surface {exp_o(ρ(ξ) ξ)} given by geodesic radii ρ at
/// the nodes of a SphereGrid, about the chart origin o.
class Hypersurface {
 public:
  Hypersurface(Spaceform space, std::shared_ptr<const SphereGrid> grid, std::vector<double> rho);

  static Hypersurface build(const Spaceform& space, const std::function<double(const Vec3&)>& radial_fn,
                            Resolution resolution = {});

  const Spaceform& space() const noexcept { return space_; }
  const SphereGrid& grid() const noexcept { return *grid_; }
  const std::shared_ptr<const SphereGrid>& grid_ptr() const noexcept { return grid_; }
  Resolution resolution() const noexcept { return grid_->resolution(); }
  std::span<const double> rho() const noexcept { return rho_; }
  std::size_t size() const noexcept { return rho_.size(); }

  Vec3 point(std::size_t q) const;
  std::vector<Vec3> points() const;

  /// Lazily computed, shared between copies.
  const CurvatureField& curvature() const;

  Hypersurface with_rho(std::vector<double> rho) const { return Hypersurface(space_, grid_, std::move(rho)); }

 private:
  struct Cache;

  Spaceform space_;
  std::shared_ptr<const SphereGrid> grid_;
  std::vector<double> rho_;
  std::shared_ptr<Cache> cache_;
};

/// Chart point at geodesic radius r in direction ξ.
Vec3 chart_point(const Spaceform& space, double r, const Vec3& xi);

CurvatureField curvature_field(const Hypersurface& M);

double integrate_surface(const Hypersurface& M, std::span<const double> field);

/// ∫_Ω F dV = ∫_{S²} ∫_0^{ρ(ξ)} F(r, ξ) ϑ(r)² dr dσ(ξ), Gauss–Legendre in r.
double integrate_domain(const Hypersurface& M, const std::function<double(double r, const Vec3& xi)>& integrand,
                        int radial_nodes = 64);

double enclosed_volume(const Hypersurface& M, int radial_nodes = 64);

/// Boundary data of an ambient field along M.
struct TangentialData {
  std::vector<double> f;        // f|_M
  std::vector<double> dnu;      // ∂_ν f
  std::vector<double> grad_sq;  // |∇_M f|²
  std::vector<double> lap;      // Δ_M f
  std::vector<double> h_grad;   // h(∇_M f, ∇_M f)
};

TangentialData tangential_calculus(const Hypersurface& M, const CurvatureField& F, const AmbientField& f);

}  // namespace umbilic
