#include "umbilic/harness/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "umbilic/deficits.hpp"
#include "umbilic/errors.hpp"
#include "umbilic/parallel.hpp"
#include "umbilic/sphere_fit.hpp"

namespace umbilic::harness {

namespace {

constexpr double kFitFloor = 1e-14;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool fitted(const SweepRow& row) { return !row.skipped && row.deficit > kFitFloor && row.distance > kFitFloor; }

}  // namespace

double stability_exponent(const std::string& deficit) {
  constexpr double n = kSurfaceDimension;
  if (deficit == "hk" || deficit == "cmc") return 1.0 / (n + 2.0);
  if (deficit == "cfc") return 1.0 / (n + 1.0);
  if (deficit == "af") return 1.0 / (2.0 * (n + 1.0));
  throw ConfigError("unknown deficit '" + deficit + "'");
}

Hypersurface family_member(const Spaceform& space, const std::string& family, double eps, Resolution resolution,
                           const std::vector<SphericalMode>& modes) {
  if (family == "perturbed_sphere") return perturbed_sphere(space, 1.0, eps, modes, resolution);
  if (family == "ellipsoid") return ellipsoid(space, 1.0 + eps, 1.0, 1.0, resolution);
  throw ConfigError("unknown sweep family '" + family + "'");
}

double evaluate_deficit(const Hypersurface& M, const DeficitSpec& spec) {
  if (spec.kind == "hk") return hk_deficit(M).value;
  if (spec.kind == "cmc") return cmc_deficit(M, spec.literal_cmc ? CmcConstant::literal : CmcConstant::normalized).value;
  if (spec.kind == "cfc") return cfc_deficit(M, spec.k, spec.l).value;
  if (spec.kind == "af") return af_deficit(M, spec.k).value;
  throw ConfigError("unknown deficit '" + spec.kind + "'");
}

void fit_power_law(SweepResult& result) {
  const double q = result.stability_exponent;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  result.fitted_C = 0.0;
  const SweepRow* previous = nullptr;
  for (auto& row : result.rows) {
    row.slope_partial = kNaN;
    if (!fitted(row)) continue;
    const double x = std::log(row.deficit), y = std::log(row.distance);
    if (previous) {
      const double dx = x - std::log(previous->deficit);
      if (dx != 0.0) row.slope_partial = (y - std::log(previous->distance)) / dx;
    }
    previous = &row;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
    result.fitted_C = std::max(result.fitted_C, row.distance / std::pow(row.deficit, q));
  }
  result.fitted_rows = count;
  const double denom = count * sxx - sx * sx;
  result.fitted_slope = count >= 2 && denom > 0.0 ? (count * sxy - sx * sy) / denom : kNaN;
}

std::vector<SweepResult> sweep(const Spaceform& space, const SweepSpec& spec, const DeficitSpec& deficit,
                               const std::vector<SphericalMode>& modes) {
  std::vector<double> eps = spec.eps;
  std::sort(eps.begin(), eps.end());
  const std::size_t per = eps.size();
  std::vector<SweepRow> rows(per * spec.resolutions.size());

  DeficitSpec kind = deficit;
  kind.kind = spec.deficit;
  parallel_for(rows.size(), [&](std::size_t job) {
    SweepRow& row = rows[job];
    row.eps = eps[job % per];
    try {
      const Hypersurface M = family_member(space, spec.family, row.eps, spec.resolutions[job / per], modes);
      row.deficit = evaluate_deficit(M, kind);
      row.distance = fit_sphere_distance(M).dist;
    } catch (const FitError& e) {
      row.distance = e.best().dist;
      row.note = e.what();
    } catch (const Error& e) {
      row.skipped = true;
      row.deficit = kNaN;
      row.distance = kNaN;
      row.note = e.what();
    }
  });

  std::vector<SweepResult> out;
  for (std::size_t r = 0; r < spec.resolutions.size(); ++r) {
    SweepResult res;
    res.family = spec.family;
    res.deficit = spec.deficit;
    res.resolution = spec.resolutions[r];
    res.stability_exponent = stability_exponent(spec.deficit);
    res.rows.assign(rows.begin() + r * per, rows.begin() + (r + 1) * per);
    fit_power_law(res);
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace umbilic::harness
