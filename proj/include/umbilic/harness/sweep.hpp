#pragma once

#include <string>
#include <vector>

#include "umbilic/harness/config.hpp"
#include "umbilic/hypersurface.hpp"

namespace umbilic::harness {

struct SweepRow {
  double eps = 0.0;
  double deficit = 0.0;
  double distance = 0.0;
  double slope_partial = 0.0;  // against the previous fitted row; NaN on the first
  bool skipped = false;
  std::string note;
};

struct SweepResult {
  std::string family;
  std::string deficit;
  Resolution resolution;
  std::vector<SweepRow> rows;     // sorted by eps
  double fitted_slope = 0.0;      // least squares of log distance against log deficit
  double fitted_C = 0.0;          // max distance / deficit^q over fitted rows
  double stability_exponent = 0.0;  // q
  std::size_t fitted_rows = 0;
};

/// 1/(n+2) for hk and cmc, 1/(n+1) for cfc, 1/(2(n+1)) for af.
double stability_exponent(const std::string& deficit);

/// perturbed_sphere: ρ = 1 + ε Σ c Y; ellipsoid: semi-axes (1 + ε, 1, 1).
Hypersurface family_member(const Spaceform& space, const std::string& family, double eps, Resolution resolution,
                           const std::vector<SphericalMode>& modes = default_perturbation_modes());

double evaluate_deficit(const Hypersurface& M, const DeficitSpec& spec);

/// One result per resolution; members are evaluated in parallel.
std::vector<SweepResult> sweep(const Spaceform& space, const SweepSpec& spec, const DeficitSpec& deficit,
                               const std::vector<SphericalMode>& modes = default_perturbation_modes());

/// Fills slope_partial, fitted_slope and fitted_C from the rows.
void fit_power_law(SweepResult& result);

}  // namespace umbilic::harness
