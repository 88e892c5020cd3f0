#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "umbilic/spaceform.hpp"
#include "umbilic/sphere_grid.hpp"
#include "umbilic/surfaces.hpp"

namespace umbilic::harness {

/// Invalid configuration or command line; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { verify_identities, deficit, levelset_pipeline, flow, sweep, serrin, steklov };

Command parse_command(const std::string& name);
std::string command_name(Command c);

struct SurfaceSpec {
  std::string kind = "sphere";  // sphere | ellipsoid | perturbed_sphere
  double radius = 1.0;
  std::array<double, 3> axes{1.2, 1.0, 1.0};
  double r0 = 1.0;
  double eps = 0.1;
  std::vector<SphericalMode> modes = default_perturbation_modes();
  Vec3 center = Vec3::Zero();
};

/// "sphere:2", "ellipsoid:1.2,1,1", "perturbed_sphere:1,0.1".
SurfaceSpec parse_surface(const std::string& text);

struct FieldSpec {
  std::string kind = "quadratic";  // quadratic | anisotropic | torsion | tabulated | quartic | exponential
  std::array<double, 3> A{1.0, 1.0, 1.0};  // diagonal of the quadratic form
  double c = -1.0;
  double r0 = 1.0;
  std::string table;
};

struct DeficitSpec {
  std::string kind = "hk";  // hk | cmc | cfc | af
  int k = 1;
  int l = 0;
  bool literal_cmc = false;
};

struct FlowSpec {
  int k = 1;
  double umbilic_tol = 1e-3;
  double t_max = 10.0;
  double cfl = 0.2;
};

struct SweepSpec {
  std::string family = "perturbed_sphere";  // perturbed_sphere | ellipsoid
  std::string deficit = "hk";
  std::vector<double> eps{0.02, 0.04, 0.08, 0.12, 0.16, 0.2};
  std::vector<Resolution> resolutions{{32, 64}, {48, 96}};
};

struct LevelsetSpec {
  double level_cap = 0.1;
  int n_levels = 12;
  double p = 3.0;
};

struct RunPlan {
  Command command = Command::verify_identities;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: environment or hardware
  bool ci = false;
  int curvature = 0;
  std::optional<double> radius_cap;
  SurfaceSpec surface;
  FieldSpec field;
  std::optional<Resolution> resolution;  // default depends on the command
  DeficitSpec deficit;
  FlowSpec flow;
  SweepSpec sweep;
  LevelsetSpec levelset;
  std::string identities = "all";  // hsiung | reilly | serrin | steklov | all
  std::optional<std::string> json_path;
  std::optional<std::string> csv_path;
};

/// Parses TOML text; unknown keys and invalid values raise ConfigError
/// with the offending line.
RunPlan parse_config_string(const std::string& text, const std::string& source = "config");
RunPlan parse_config(const std::string& path);

Spaceform make_space(const RunPlan& plan);

/// Explicit resolution, else 32x64 for flow and 64x128 otherwise.
Resolution resolution_for(const RunPlan& plan);

/// Checks cross-field constraints (radius caps, resolutions, k ranges).
void validate(const RunPlan& plan);

}  // namespace umbilic::harness
