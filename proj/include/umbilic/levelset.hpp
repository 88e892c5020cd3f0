#pragma once

#include <vector>

#include "umbilic/ambient_field.hpp"
#include "umbilic/hypersurface.hpp"
#include "umbilic/sphere_fit.hpp"

namespace umbilic {

struct CovariantHessian {
  Mat3 hess;               // ∇̄²f in chart coordinates
  double laplacian = 0.0;  // Δ̄f
  double cs_deficit = 0.0; // |∇̄²f|² - (Δ̄f)²/3 = |∇̊²f|²
  double grad_norm = 0.0;  // |∇̄f|
};

CovariantHessian covariant_hessian(const Spaceform& space, const AmbientField& f, const Vec3& x);

struct LevelOptions {
  double search_radius = 4.0;  // chart radius scanned for K = 0
  int scan_steps = 256;
};

/// Per-ray root of f(s ξ) = level: first sign change from the chart origin,
/// polished by TOMS 748. Throws LevelSetError when a ray has no bracket.
Hypersurface extract_level(const Spaceform& space, const AmbientField& f, double level, Resolution resolution = {},
                           LevelOptions options = {});

struct HessianSffResidual {
  double residual = 0.0;             // max_q ‖∇̄²f(X_i, X_j) + |∇̄f| h_ij‖_g
  double pointwise_residual = 0.0;   // max_q of the |Å|² relation, absolute
  bool orientation_flipped = false;  // ν_f = -∇̄f/|∇̄f| points into the enclosed region
};

HessianSffResidual hessian_vs_sff_residual(const Spaceform& space, const AmbientField& f, const Hypersurface& level);

/// Band U = {0 < σ f < level_cap} next to M = {f = 0}, where σ = sign f(origin).
struct BandSpec {
  double level_cap = 0.1;
  int n_levels = 12;
  double p = kSurfaceDimension + 1;
  Resolution resolution{32, 64};
  LevelOptions level_options;
};

struct BandIntegral {
  double integral = 0.0;              // ∫_U |∇̊²f|^p
  double norm = 0.0;                  // integral^{1/p}
  std::vector<double> levels;         // |f| values (Gauss–Legendre in [0, t0])
  std::vector<double> level_weights;
  std::vector<double> slice_integrals;  // ∫_{M_s} |∇̊²f|^p / |∇̄f|
  std::vector<double> slice_umbilicity; // ∫_{M_s} |Å|^p
  double min_gradient = 0.0;          // over the sampled level nodes
  double max_abs_f = 0.0;             // level cap
  double sign = 1.0;                  // σ
};

BandIntegral band_norm(const Spaceform& space, const AmbientField& f, const BandSpec& band);

struct Foliation {
  std::vector<double> arc_lengths;
  std::vector<Vec3> endpoints;
  double max_level_error = 0.0;
  double min_gradient = 0.0;
};

/// Flows seeds on {f = from} along ∇̄f/|∇̄f|² to {f = to} (adaptive
/// Dormand–Prince, tolerance 1e-10) and returns ḡ-arc lengths.
Foliation foliate(const Spaceform& space, const AmbientField& f, double from_level, double to_level,
                  const std::vector<Vec3>& seeds, double gradient_floor = 1e-8);

struct SliceChoice {
  double level = 0.0;       // |f| on the chosen slice
  std::size_t index = 0;
  double slice_norm = 0.0;  // ‖Å‖_{p, M_s}
  double bound = 0.0;       // 2 ∫_U |∇̊²f|^p / (t0 min|∇̄f|^{p-1}), compared with ‖Å‖^p
  double ratio = 0.0;       // ‖Å‖^p / bound
  bool holds = false;
};

SliceChoice best_slice(const BandIntegral& band, const BandSpec& spec);
SliceChoice best_slice(const Spaceform& space, const AmbientField& f, const BandSpec& band);

struct PipelineResult {
  double dist = 0.0;              // Chebyshev fit of the zero level
  SphereFit fit;
  double slice_dist = 0.0;        // fit of the best slice
  double transfer = 0.0;          // max foliation arc length from the slice to M
  double bound_rhs = 0.0;
  double ratio = 0.0;             // dist / bound_rhs (0 when both vanish)
  double area = 0.0;              // |M|
  double band_integral = 0.0;
  double min_gradient = 0.0;
  double max_abs_f = 0.0;
  double normalizer = 0.0;        // min(max|f|, |M|^{1/n} min|∇̄f|)
  SliceChoice slice;
};

PipelineResult levelset_stability_pipeline(const Spaceform& space, const AmbientField& f, const BandSpec& band);

}  // namespace umbilic
