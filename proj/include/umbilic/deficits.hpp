#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>

#include "umbilic/hypersurface.hpp"

namespace umbilic {

struct DeficitReport {
  std::string name;  // HK, CMC, CFC, AF, NEWTON, STEKLOV
  int k = -1;
  int l = -1;
  double value = 0.0;
  double reference_constant = 0.0;
  Resolution resolution;
  double refinement_residual = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;

  std::string to_json() const;
};

/// Normalisation of the CMC reference constant. `normalized` divides the
/// displayed constant by n so that it matches the normalised H_1 on spheres.
enum class CmcConstant { normalized, literal };

/// ∫_M ϑ'/H_1 - ∫_M u. Throws PreconditionError unless H_1 > 0 everywhere.
DeficitReport hk_deficit(const Hypersurface& M);

/// ∫_M ϑ' (ℋ - H_1)_+ with ℋ = ∫_M ϑ' / ((n+1) ∫_Ω ϑ'), times n for `literal`.
DeficitReport cmc_deficit(const Hypersurface& M, CmcConstant convention = CmcConstant::normalized);

/// ∫_M ϑ' H_{l-1} (ℐ - H_{k+1}/H_l)_+ with ℐ = ∫ϑ'H_k / ∫ϑ'H_{l-1} and H_{-1} = 1/H_1.
DeficitReport cfc_deficit(const Hypersurface& M, int k, int l);

/// W_0..W_3: W_0 = |Ω|, W_j = (1/3) ∫_M H_{j-1}.
std::array<double, 4> quermassintegrals(const Hypersurface& M);
/// W_j divided by its value 4π/3 on the unit ball.
std::array<double, 4> normalized_quermassintegrals(const Hypersurface& M);

/// W̃_{k+1} - W̃_k^{(n-k)/(n-k+1)}, K = 0 only, 1 <= k <= n.
DeficitReport af_deficit(const Hypersurface& M, int k);

struct HsiungSides {
  double lhs = 0.0;       // ∫_M ϑ' H_k
  double rhs = 0.0;       // ∫_M u H_{k+1}
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|)
};

/// Minkowski–Hsiung identity for 0 <= k <= n - 1.
HsiungSides hsiung_sides(const Hypersurface& M, int k);

/// ∫_Ω ϑ'.
double domain_warp_integral(const Hypersurface& M, int radial_nodes = 64);

}  // namespace umbilic
