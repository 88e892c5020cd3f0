#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "umbilic/harness/execute.hpp"

using namespace umbilic::harness;

namespace {

umbilic::Resolution parse_resolution(const std::string& text) {
  const auto x = text.find('x');
  try {
    std::size_t used = 0;
    umbilic::Resolution r;
    r.n_theta = std::stoi(text.substr(0, x), &used);
    if (used != (x == std::string::npos ? text.size() : x)) throw std::invalid_argument(text);
    r.n_phi = 2 * r.n_theta;
    if (x != std::string::npos) {
      r.n_phi = std::stoi(text.substr(x + 1), &used);
      if (used != text.size() - x - 1) throw std::invalid_argument(text);
    }
    return r;
  } catch (const std::exception&) {
    throw ConfigError("resolution must look like 64 or 64x128, got '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("'" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative umbilicity and stability experiments for hypersurfaces in spaceforms", "umbilic-lab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config, surface, resolution, eps, family, deficit_kind, field, json, csv, which;
  int space = 0, k = 1, l = 0, threads = 0;
  long long seed = 1;
  double t_max = 0.0;
  bool all = false, ci = false, literal_cmc = false;

  auto* o_config = app.add_option("--config", config, "TOML run configuration")->check(CLI::ExistingFile);
  auto* o_surface = app.add_option("--surface", surface, "sphere:R | ellipsoid:a,b,c | perturbed_sphere:r0,eps");
  auto* o_space = app.add_option("--space", space, "sectional curvature K")->check(CLI::IsMember({-1, 0, 1}));
  auto* o_res = app.add_option("--resolution", resolution, "n_theta or n_theta x n_phi");
  auto* o_k = app.add_option("--k", k, "curvature order k");
  auto* o_l = app.add_option("--l", l, "lower order l (cfc)");
  auto* o_eps = app.add_option("--eps", eps, "comma separated sweep parameters");
  auto* o_seed = app.add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
  auto* o_json = app.add_option("--json", json, "JSON report path (default stdout)");
  auto* o_csv = app.add_option("--csv", csv, "CSV table path");
  auto* o_family = app.add_option("--family", family, "sweep family: perturbed_sphere | ellipsoid");
  auto* o_deficit = app.add_option("--deficit", deficit_kind, "sweep deficit: hk | cmc | cfc | af");
  auto* o_field = app.add_option("--field", field, "field kind");
  auto* o_threads = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  auto* o_tmax = app.add_option("--t-max", t_max, "flow end time")->check(CLI::PositiveNumber);
  auto* o_which = app.add_option("--which", which, "identity family: hsiung | reilly | serrin | steklov");
  app.add_flag("--all", all, "run every identity battery");
  auto* o_ci = app.add_flag("--ci", ci, "exit 1 on threshold violations");
  auto* o_literal = app.add_flag("--literal-cmc", literal_cmc, "use the literal CMC constant");

  std::string deficit_sub;
  app.add_subcommand("verify-identities", "Hsiung, Reilly, Serrin and Steklov identity batteries");
  auto* sub_deficit = app.add_subcommand("deficit", "stability deficit of one surface");
  sub_deficit->add_option("kind", deficit_sub, "hk | cmc | cfc | af")->required()->check(
      CLI::IsMember({"hk", "cmc", "cfc", "af"}));
  app.add_subcommand("levelset-pipeline", "level-set stability pipeline for an ambient field");
  app.add_subcommand("flow", "normalised inverse curvature flow");
  app.add_subcommand("sweep", "deficit against sphere distance over a perturbation family");
  app.add_subcommand("serrin", "Serrin identity for a manufactured radial pair");
  app.add_subcommand("steklov", "Steklov identity for a quadric field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunPlan plan;
    if (*o_config) plan = parse_config(config);
    plan.command = parse_command(app.get_subcommands().front()->get_name());
    if (plan.command == Command::deficit) plan.deficit.kind = deficit_sub;
    if (*o_space) plan.curvature = space;
    if (*o_surface) plan.surface = parse_surface(surface);
    if (*o_res) plan.resolution = parse_resolution(resolution);
    if (*o_k) plan.deficit.k = plan.flow.k = k;
    if (*o_l) plan.deficit.l = l;
    if (*o_eps) plan.sweep.eps = parse_list(eps);
    if (*o_seed) plan.seed = static_cast<std::uint64_t>(seed);
    if (*o_json) plan.json_path = json;
    if (*o_csv) plan.csv_path = csv;
    if (*o_family) plan.sweep.family = family;
    if (*o_deficit) plan.sweep.deficit = deficit_kind;
    if (*o_field) plan.field.kind = field;
    if (*o_threads) plan.threads = threads;
    if (*o_tmax) plan.flow.t_max = t_max;
    if (*o_which) plan.identities = which;
    if (all) plan.identities = "all";
    if (*o_ci) plan.ci = ci;
    if (*o_literal) plan.deficit.literal_cmc = literal_cmc;
    if (plan.command == Command::sweep && *o_res) plan.sweep.resolutions = {*plan.resolution, plan.resolution->refined()};
    return execute(plan, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
