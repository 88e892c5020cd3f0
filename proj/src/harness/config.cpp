#include "umbilic/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace umbilic::harness {

namespace {

struct Entry {
  std::string name;
  Command command;
};

const std::vector<Entry>& command_table() {
  static const std::vector<Entry> table{{"verify-identities", Command::verify_identities},
                                        {"deficit", Command::deficit},
                                        {"levelset-pipeline", Command::levelset_pipeline},
                                        {"flow", Command::flow},
                                        {"sweep", Command::sweep},
                                        {"serrin", Command::serrin},
                                        {"steklov", Command::steklov}};
  return table;
}

[[noreturn]] void fail(const std::string& source, const toml::node& node, const std::string& message) {
  std::ostringstream os;
  os << source << ":" << node.source().begin.line << ": " << message;
  throw ConfigError(os.str());
}

class Reader {
 public:
  Reader(const toml::table& table, std::string section, std::string source, std::set<std::string> allowed)
      : table_(table), section_(std::move(section)), source_(std::move(source)) {
    for (const auto& [key, node] : table_) {
      if (!allowed.contains(std::string(key.str()))) {
        fail(source_, node, "unknown key '" + qualified(std::string(key.str())) + "'");
      }
    }
  }

  const toml::node* find(const std::string& key) const { return table_.get(key); }

  void number(const std::string& key, double& out) const {
    if (const auto* node = find(key)) out = as_number(*node, key);
  }

  void integer(const std::string& key, int& out) const {
    if (const auto* node = find(key)) {
      const auto v = node->value<int64_t>();
      if (!node->is_integer() || !v) fail(source_, *node, "'" + qualified(key) + "' must be an integer");
      out = static_cast<int>(*v);
    }
  }

  void boolean(const std::string& key, bool& out) const {
    if (const auto* node = find(key)) {
      if (!node->is_boolean()) fail(source_, *node, "'" + qualified(key) + "' must be a boolean");
      out = *node->value<bool>();
    }
  }

  void string(const std::string& key, std::string& out) const {
    if (const auto* node = find(key)) {
      if (!node->is_string()) fail(source_, *node, "'" + qualified(key) + "' must be a string");
      out = *node->value<std::string>();
    }
  }

  std::vector<double> numbers(const std::string& key) const {
    const auto* node = find(key);
    const auto* arr = node->as_array();
    if (!arr) fail(source_, *node, "'" + qualified(key) + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& item : *arr) out.push_back(as_number(item, key));
    return out;
  }

  template <std::size_t N>
  void triple(const std::string& key, std::array<double, N>& out) const {
    if (!find(key)) return;
    const auto v = numbers(key);
    if (v.size() != N) fail(source_, *find(key), "'" + qualified(key) + "' must have " + std::to_string(N) + " entries");
    std::copy(v.begin(), v.end(), out.begin());
  }

  const toml::array* array(const std::string& key) const {
    const auto* node = find(key);
    if (!node) return nullptr;
    const auto* arr = node->as_array();
    if (!arr) fail(source_, *node, "'" + qualified(key) + "' must be an array");
    return arr;
  }

  [[noreturn]] void error(const std::string& key, const std::string& message) const {
    const auto* node = find(key);
    if (node) fail(source_, *node, "'" + qualified(key) + "' " + message);
    throw ConfigError(source_ + ": [" + section_ + "] " + message);
  }

  const std::string& source() const { return source_; }

 private:
  std::string qualified(const std::string& key) const { return section_.empty() ? key : section_ + "." + key; }

  double as_number(const toml::node& node, const std::string& key) const {
    if (node.is_integer()) return static_cast<double>(*node.value<int64_t>());
    if (node.is_floating_point()) return *node.value<double>();
    fail(source_, node, "'" + qualified(key) + "' must be a number");
  }

  const toml::table& table_;
  std::string section_;
  std::string source_;
};

const toml::table* section(const toml::table& root, const std::string& name, const std::string& source) {
  const auto* node = root.get(name);
  if (!node) return nullptr;
  const auto* t = node->as_table();
  if (!t) fail(source, *node, "'" + name + "' must be a table");
  return t;
}

void check_choice(const Reader& r, const std::string& key, const std::string& value,
                  std::initializer_list<const char*> options) {
  std::string list;
  for (const char* o : options) {
    if (value == o) return;
    list += std::string(list.empty() ? "" : ", ") + o;
  }
  r.error(key, "must be one of: " + list);
}

}  // namespace

Command parse_command(const std::string& name) {
  for (const auto& e : command_table()) {
    if (e.name == name) return e.command;
  }
  throw ConfigError("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  for (const auto& e : command_table()) {
    if (e.command == c) return e.name;
  }
  return "?";
}

SurfaceSpec parse_surface(const std::string& text) {
  SurfaceSpec spec;
  const auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        args.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("surface '" + text + "': '" + item + "' is not a number");
      }
    }
  }
  if (spec.kind == "sphere") {
    if (args.size() > 1) throw ConfigError("sphere takes one radius");
    if (!args.empty()) spec.radius = args[0];
  } else if (spec.kind == "ellipsoid") {
    if (args.size() != 3) throw ConfigError("ellipsoid needs three semi-axes");
    std::copy(args.begin(), args.end(), spec.axes.begin());
  } else if (spec.kind == "perturbed_sphere") {
    if (args.size() > 2) throw ConfigError("perturbed_sphere takes r0 and eps");
    if (args.size() > 0) spec.r0 = args[0];
    if (args.size() > 1) spec.eps = args[1];
  } else {
    throw ConfigError("unknown surface kind '" + spec.kind + "'");
  }
  return spec;
}

RunPlan parse_config_string(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ": " << e.description();
    throw ConfigError(os.str());
  }

  RunPlan plan;
  const Reader top(root, "", source,
                   {"command", "seed", "threads", "ci", "space", "surface", "field", "resolution", "deficit", "flow",
                    "sweep", "levelset", "identities", "output"});
  std::string command = command_name(plan.command);
  top.string("command", command);
  try {
    plan.command = parse_command(command);
  } catch (const ConfigError& e) {
    top.error("command", e.what());
  }
  int seed = static_cast<int>(plan.seed);
  top.integer("seed", seed);
  if (seed < 0) top.error("seed", "must be nonnegative");
  plan.seed = static_cast<std::uint64_t>(seed);
  top.integer("threads", plan.threads);
  top.boolean("ci", plan.ci);

  if (const auto* t = section(root, "space", source)) {
    const Reader r(*t, "space", source, {"curvature", "radius_cap"});
    r.integer("curvature", plan.curvature);
    if (plan.curvature < -1 || plan.curvature > 1) r.error("curvature", "must be -1, 0 or 1");
    if (r.find("radius_cap")) {
      double cap = 0.0;
      r.number("radius_cap", cap);
      plan.radius_cap = cap;
    }
  }

  if (const auto* t = section(root, "surface", source)) {
    const Reader r(*t, "surface", source, {"kind", "radius", "axes", "r0", "eps", "modes", "center"});
    SurfaceSpec& s = plan.surface;
    r.string("kind", s.kind);
    check_choice(r, "kind", s.kind, {"sphere", "ellipsoid", "perturbed_sphere"});
    r.number("radius", s.radius);
    r.triple("axes", s.axes);
    r.number("r0", s.r0);
    r.number("eps", s.eps);
    if (r.find("center")) {
      std::array<double, 3> c{};
      r.triple("center", c);
      s.center = Vec3(c[0], c[1], c[2]);
    }
    if (const auto* modes = r.array("modes")) {
      s.modes.clear();
      for (const auto& item : *modes) {
        const auto* m = item.as_array();
        if (!m || m->size() != 3 || !(*m)[0].is_integer() || !(*m)[1].is_integer() || !(*m)[2].is_number()) {
          fail(source, item, "'surface.modes' entries must be [l, m, coefficient]");
        }
        SphericalMode mode;
        mode.l = static_cast<int>(*(*m)[0].value<int64_t>());
        mode.m = static_cast<int>(*(*m)[1].value<int64_t>());
        mode.coefficient = *(*m)[2].value<double>();
        if (mode.l < 0 || std::abs(mode.m) > mode.l) fail(source, item, "'surface.modes' needs |m| <= l");
        s.modes.push_back(mode);
      }
    }
  }

  if (const auto* t = section(root, "field", source)) {
    const Reader r(*t, "field", source, {"kind", "A", "c", "r0", "table"});
    r.string("kind", plan.field.kind);
    check_choice(r, "kind", plan.field.kind,
                 {"quadratic", "anisotropic", "torsion", "tabulated", "quartic", "exponential"});
    r.triple("A", plan.field.A);
    r.number("c", plan.field.c);
    r.number("r0", plan.field.r0);
    r.string("table", plan.field.table);
  }

  if (const auto* t = section(root, "resolution", source)) {
    const Reader r(*t, "resolution", source, {"n_theta", "n_phi"});
    Resolution res;
    r.integer("n_theta", res.n_theta);
    res.n_phi = 2 * res.n_theta;
    r.integer("n_phi", res.n_phi);
    plan.resolution = res;
  }

  if (const auto* t = section(root, "deficit", source)) {
    const Reader r(*t, "deficit", source, {"kind", "k", "l", "cmc_convention"});
    r.string("kind", plan.deficit.kind);
    check_choice(r, "kind", plan.deficit.kind, {"hk", "cmc", "cfc", "af"});
    r.integer("k", plan.deficit.k);
    r.integer("l", plan.deficit.l);
    std::string convention = "normalized";
    r.string("cmc_convention", convention);
    check_choice(r, "cmc_convention", convention, {"normalized", "literal"});
    plan.deficit.literal_cmc = convention == "literal";
  }

  if (const auto* t = section(root, "flow", source)) {
    const Reader r(*t, "flow", source, {"k", "umbilic_tol", "t_max", "cfl"});
    r.integer("k", plan.flow.k);
    r.number("umbilic_tol", plan.flow.umbilic_tol);
    r.number("t_max", plan.flow.t_max);
    r.number("cfl", plan.flow.cfl);
    if (!(plan.flow.cfl > 0.0 && plan.flow.cfl <= 1.0)) r.error("cfl", "must lie in (0, 1]");
    if (!(plan.flow.t_max > 0.0)) r.error("t_max", "must be positive");
  }

  if (const auto* t = section(root, "sweep", source)) {
    const Reader r(*t, "sweep", source, {"family", "deficit", "eps", "resolutions"});
    r.string("family", plan.sweep.family);
    check_choice(r, "family", plan.sweep.family, {"perturbed_sphere", "ellipsoid"});
    r.string("deficit", plan.sweep.deficit);
    check_choice(r, "deficit", plan.sweep.deficit, {"hk", "cmc", "cfc", "af"});
    if (r.find("eps")) {
      plan.sweep.eps = r.numbers("eps");
      for (double e : plan.sweep.eps) {
        if (!(e >= 0.0)) r.error("eps", "entries must be nonnegative");
      }
    }
    if (const auto* res = r.array("resolutions")) {
      plan.sweep.resolutions.clear();
      for (const auto& item : *res) {
        const auto* pair = item.as_array();
        if (!pair || pair->size() != 2 || !(*pair)[0].is_integer() || !(*pair)[1].is_integer()) {
          fail(source, item, "'sweep.resolutions' entries must be [n_theta, n_phi]");
        }
        plan.sweep.resolutions.push_back(
            {static_cast<int>(*(*pair)[0].value<int64_t>()), static_cast<int>(*(*pair)[1].value<int64_t>())});
      }
    }
  }

  if (const auto* t = section(root, "levelset", source)) {
    const Reader r(*t, "levelset", source, {"level_cap", "n_levels", "p"});
    r.number("level_cap", plan.levelset.level_cap);
    r.integer("n_levels", plan.levelset.n_levels);
    r.number("p", plan.levelset.p);
    if (!(plan.levelset.level_cap > 0.0)) r.error("level_cap", "must be positive");
    if (plan.levelset.n_levels < 2) r.error("n_levels", "must be at least 2");
    if (!(plan.levelset.p >= 1.0)) r.error("p", "must be at least 1");
  }

  if (const auto* t = section(root, "identities", source)) {
    const Reader r(*t, "identities", source, {"which"});
    r.string("which", plan.identities);
    check_choice(r, "which", plan.identities, {"hsiung", "reilly", "serrin", "steklov", "all"});
  }

  if (const auto* t = section(root, "output", source)) {
    const Reader r(*t, "output", source, {"json", "csv"});
    std::string path;
    if (r.find("json")) {
      r.string("json", path);
      plan.json_path = path;
    }
    if (r.find("csv")) {
      r.string("csv", path);
      plan.csv_path = path;
    }
  }

  try {
    validate(plan);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return plan;
}

RunPlan parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_string(buffer.str(), path);
}

Spaceform make_space(const RunPlan& plan) {
  try {
    return plan.radius_cap ? Spaceform(plan.curvature, *plan.radius_cap) : Spaceform(plan.curvature);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("space: ") + e.what());
  }
}

Resolution resolution_for(const RunPlan& plan) {
  if (plan.resolution) return *plan.resolution;
  return plan.command == Command::flow ? Resolution{32, 64} : Resolution{64, 128};
}

void validate(const RunPlan& plan) {
  const Spaceform space = make_space(plan);
  auto positive_res = [](const Resolution& r, const std::string& what) {
    if (r.n_theta < 4 || r.n_phi < 8 || r.n_phi % 2 != 0) {
      throw ConfigError(what + " needs n_theta >= 4 and an even n_phi >= 8");
    }
  };
  if (plan.resolution) positive_res(*plan.resolution, "resolution");
  for (const auto& r : plan.sweep.resolutions) positive_res(r, "sweep resolution");
  if (plan.sweep.resolutions.empty()) throw ConfigError("sweep needs at least one resolution");
  if (plan.threads < 0) throw ConfigError("threads must be nonnegative");

  const SurfaceSpec& s = plan.surface;
  auto check_radius = [&](double r, const std::string& what) {
    if (!(r > 0.0)) throw ConfigError(what + " must be positive");
    if (!space.admits_radius(r)) {
      std::ostringstream os;
      os << what << " " << r << " exceeds the admissible radius " << space.radius_cap() << " for K = "
         << space.curvature();
      throw ConfigError(os.str());
    }
  };
  if (s.kind == "sphere") check_radius(s.radius, "surface radius");
  if (s.kind == "perturbed_sphere") check_radius(s.r0, "surface r0");
  if (s.kind == "ellipsoid") {
    for (double a : s.axes) check_radius(a, "ellipsoid semi-axis");
  }
  if (plan.deficit.kind == "cfc" && !(plan.deficit.k >= 1 && plan.deficit.k <= kSurfaceDimension - 1 &&
                                       plan.deficit.l >= 0 && plan.deficit.l <= plan.deficit.k)) {
    throw ConfigError("cfc deficit needs 1 <= k <= n - 1 and 0 <= l <= k");
  }
  if (plan.deficit.kind == "af" && !(plan.deficit.k >= 1 && plan.deficit.k <= kSurfaceDimension)) {
    throw ConfigError("af deficit needs 1 <= k <= n");
  }
  if (plan.flow.k < 1 || plan.flow.k > kSurfaceDimension) throw ConfigError("flow k must satisfy 1 <= k <= n");
}

}  // namespace umbilic::harness
