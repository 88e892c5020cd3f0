#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace umbilic {

/// σ_0..σ_n of κ by the usual one-pass recursion.
std::vector<double> elementary_symmetric(std::span<const double> kappa);

double binomial(int n, int k);

/// Normalised mean curvatures H_0..H_n, H_k = σ_k / C(n, k).
std::vector<double> normalized_curvatures(std::span<const double> kappa);

/// κ ∈ Γ_k: H_1, ..., H_k > threshold.
bool in_garding_cone(std::span<const double> kappa, int k, double threshold = 1e-12);

/// Σ κ_i² - (Σ κ_i)² / n.
double traceless_norm_sq(std::span<const double> kappa);

struct NewtonGap {
  double gap = 0.0;             // H_k² - H_{k+1} H_{k-1}
  double ratio = 0.0;           // gap / (|Å|² H_{k+1,n1}²), +inf at umbilic points
  double hk1n1 = 0.0;           // ∂²H_{k+1} / ∂κ_n ∂κ_1
  double traceless_sq = 0.0;    // |Å|²
};

/// Requires κ sorted ascending, 1 <= k <= n - 1 and κ ∈ Γ_k.
NewtonGap newton_gap(std::span<const double> kappa, int k);

struct NewtonSampling {
  double estimate = 0.0;        // infimum of the ratio over accepted samples
  std::size_t drawn = 0;
  std::size_t accepted = 0;
  double min_gap = 0.0;
  double min_hk1n1 = 0.0;
  std::uint64_t seed = 0;
};

/// Rejection sampling of κ with components uniform in [-2, 4], sorted,
/// filtered to Γ_k. Deterministic for a given seed, independent of threads.
NewtonSampling newton_constant_estimate(int n, int k, std::size_t samples, std::uint64_t seed = 1);

}  // namespace umbilic
