#include <doctest.h>

#include <cmath>
#include <sstream>

#include "umbilic/harness/config.hpp"
#include "umbilic/harness/execute.hpp"
#include "umbilic/harness/report.hpp"
#include "umbilic/harness/sweep.hpp"
#include "umbilic/parallel.hpp"

using namespace umbilic;
using namespace umbilic::harness;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config_string(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

int run(const RunPlan& plan, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = execute(plan, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const auto plan = parse_config_string("command = \"deficit\"\n[surface]\nkind = \"sphere\"\nradius = 1.0\n");
  CHECK(plan.command == Command::deficit);
  CHECK(plan.deficit.kind == "hk");
  CHECK(plan.curvature == 0);
  CHECK(plan.seed == 1);
  CHECK(resolution_for(plan) == Resolution{64, 128});
  CHECK_FALSE(plan.json_path);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(config_error("command = \"flow\"\n\n[flow]\nk = 1\nspeed = 2\n").find("cfg:5:") == 0);
  CHECK(config_error("command = \"flow\"\n[flow]\nk = 1\nspeed = 2\n").find("flow.speed") != std::string::npos);
  CHECK(config_error("command = \"nope\"\n").find("cfg:1:") == 0);
  CHECK(config_error("[space]\ncurvature = 2\n").find("cfg:2:") == 0);
  CHECK(config_error("seed = [1\n").find("cfg:") == 0);
  CHECK(config_error("[sweep]\neps = [\"a\"]\n").find("cfg:2:") == 0);
}

TEST_CASE("K = 1 radius beyond the hemisphere is a validation error") {
  const auto msg = config_error("[space]\ncurvature = 1\n[surface]\nkind = \"sphere\"\nradius = 1.7\n");
  CHECK(msg.find("admissible radius") != std::string::npos);
}

TEST_CASE("sweep config with six eps values") {
  const auto plan = parse_config_string(
      "command = \"sweep\"\n[sweep]\nfamily = \"ellipsoid\"\ndeficit = \"af\"\n"
      "eps = [0.02, 0.04, 0.08, 0.12, 0.16, 0.2]\nresolutions = [[16, 32], [24, 48]]\n");
  CHECK(plan.sweep.eps.size() == 6);
  CHECK(plan.sweep.resolutions.size() == 2);
  CHECK(plan.sweep.resolutions[1] == Resolution{24, 48});
}

TEST_CASE("surface shorthand") {
  CHECK(parse_surface("sphere:2").radius == 2.0);
  CHECK(parse_surface("ellipsoid:1.2,1,1").axes[0] == 1.2);
  const auto p = parse_surface("perturbed_sphere:1,0.1");
  CHECK(p.eps == 0.1);
  CHECK_THROWS_AS(parse_surface("ellipsoid:1,2"), ConfigError);
  CHECK_THROWS_AS(parse_surface("cube:1"), ConfigError);
  CHECK_THROWS_AS(parse_surface("sphere:1x"), ConfigError);
}

TEST_CASE("CSV quoting follows RFC 4180") {
  CsvTable t({"a", "b"});
  t.add_row({"plain", "with,comma"});
  t.add_row({"say \"hi\"", ""});
  std::ostringstream os;
  t.write(os);
  CHECK(os.str() == "a,b\r\nplain,\"with,comma\"\r\n\"say \"\"hi\"\"\",\r\n");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::nan("")) == "");
  CHECK_THROWS(t.add_row({"x"}));
}

TEST_CASE("power-law fit") {
  SweepResult r;
  r.stability_exponent = 0.25;
  for (double e : {0.0, 0.1, 0.2, 0.4}) r.rows.push_back({e, e * e, 3 * e, 0.0, false, ""});
  fit_power_law(r);
  CHECK(r.fitted_slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.fitted_rows == 3);
  CHECK(std::isnan(r.rows[1].slope_partial));
  CHECK(r.rows[2].slope_partial == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.fitted_C == doctest::Approx(3 * 0.4 / std::pow(0.16, 0.25)).epsilon(1e-12));
  CHECK(stability_exponent("cfc") == doctest::Approx(1.0 / 3));
  CHECK(stability_exponent("af") == doctest::Approx(1.0 / 6));
}

TEST_CASE("sweep rigidity row and ordering") {
  SweepSpec spec;
  spec.eps = {0.1, 0.0, 0.05};
  spec.resolutions = {{16, 32}};
  const auto results = sweep(Spaceform(0), spec, DeficitSpec{});
  REQUIRE(results.size() == 1);
  const auto& rows = results[0].rows;
  CHECK(rows[0].eps == 0.0);
  CHECK(std::abs(rows[0].deficit) < 1e-12);
  CHECK(rows[0].distance < 1e-12);
  CHECK(rows[1].eps == 0.05);
  CHECK(rows[2].deficit > rows[1].deficit);
}

TEST_CASE("exit codes") {
  RunPlan plan;
  plan.command = Command::deficit;
  plan.surface = parse_surface("ellipsoid:1.2,1,1");
  plan.resolution = Resolution{16, 32};
  std::string text;
  CHECK(run(plan, &text) == kExitOk);
  CHECK(text.find("\"name\": \"HK\"") != std::string::npos);

  RunPlan bad = plan;
  bad.curvature = 1;
  bad.surface = parse_surface("sphere:1.7");
  CHECK(run(bad) == kExitConfig);

  RunPlan dented = plan;
  dented.surface.kind = "perturbed_sphere";
  dented.surface.eps = 0.35;
  dented.surface.modes = {{4, 0, 1.0}, {6, 3, 0.5}};
  CHECK(run(dented) == kExitNumerical);

  RunPlan flow;
  flow.command = Command::flow;
  flow.surface = parse_surface("ellipsoid:1.2,1,0.9");
  flow.resolution = Resolution{16, 32};
  flow.flow.t_max = 0.01;
  CHECK(run(flow) == kExitOk);
  flow.ci = true;
  CHECK(run(flow) == kExitThreshold);
}

TEST_CASE("reports are byte-stable across worker counts") {
  RunPlan plan;
  plan.command = Command::sweep;
  plan.sweep.eps = {0.05, 0.1, 0.15};
  plan.sweep.resolutions = {{16, 32}, {24, 48}};
  std::string one, many;
  plan.threads = 1;
  run(plan, &one);
  plan.threads = 4;
  run(plan, &many);
  set_worker_override(0);
  CHECK(one == many);
  CHECK(!one.empty());
}

TEST_CASE("identity battery") {
  const auto rows = identity_battery("serrin", {16, 32}, 1);
  CHECK(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.residual <= r.limit);
  CHECK_THROWS_AS(identity_battery("nothing", {16, 32}, 1), ConfigError);
}
