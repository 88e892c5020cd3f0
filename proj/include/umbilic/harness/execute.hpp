#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "umbilic/harness/config.hpp"
#include "umbilic/harness/report.hpp"

namespace umbilic::harness {

enum ExitCode : int { kExitOk = 0, kExitThreshold = 1, kExitConfig = 2, kExitNumerical = 3 };

/// One case of the identity battery.
struct IdentityRow {
  std::string identity;  // e.g. "hsiung:k=1:ellipsoid(1.2,1,0.9):K=0"
  double residual = 0.0;
  double coarse_residual = 0.0;  // same case at half resolution
  Resolution resolution;
  double order = 0.0;            // log2(coarse / fine); NaN when the fine residual is at round-off
  double limit = 1e-6;
};

/// Hsiung, Reilly, Serrin and Steklov cases; `which` is one of
/// hsiung | reilly | serrin | steklov | all. Cases run in parallel.
std::vector<IdentityRow> identity_battery(const std::string& which, Resolution resolution, std::uint64_t seed);

Hypersurface build_surface(const SurfaceSpec& spec, const Spaceform& space, Resolution resolution);

/// Runs the plan, writes reports, returns an ExitCode. Threshold violations
/// give kExitThreshold only when plan.ci is set.
int execute(const RunPlan& plan, std::ostream& out, std::ostream& err);

}  // namespace umbilic::harness
