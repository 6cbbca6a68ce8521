#include "dunkl/run_config.hpp"

#include "dunkl/error.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace dunkl {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& pointer, const std::string& what) {
  throw Error(ErrorKind::schema_error, (pointer.empty() ? "/" : pointer) + ": " + what);
}

void only_keys(const json& obj, const std::string& pointer, const std::set<std::string>& allowed) {
  if (!obj.is_object()) schema(pointer, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) schema(pointer + "/" + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& pointer, const char* key) {
  if (!obj.contains(key)) schema(pointer + "/" + key, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& pointer) {
  if (!v.is_number()) schema(pointer, "expected a number");
  return v.get<double>();
}

std::uint64_t unsigned_int(const json& v, const std::string& pointer) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    schema(pointer, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> numbers(const json& v, const std::string& pointer) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) schema(pointer, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], pointer + "/" + std::to_string(i)));
  return out;
}

}  // namespace

std::shared_ptr<const RootSystem> build_system(const SystemChoice& c) {
  if (c.type == "A") return std::make_shared<const RootSystem>(build_type_a(c.n));
  if (c.type == "B") return std::make_shared<const RootSystem>(build_type_b(c.n));
  if (c.type == "custom") return std::make_shared<const RootSystem>(RootSystem::from_roots(c.roots));
  throw Error(ErrorKind::invalid_argument, "unknown system type '" + c.type + "'");
}

std::vector<double> orbit_values(const RootSystem& system, const std::vector<double>& values,
                                 const std::string& pointer) {
  const std::size_t m = system.orbits().size();
  if (values.size() == 1) return std::vector<double>(m, values.front());
  if (values.size() != m)
    schema(pointer, "expected " + std::to_string(m) + " per-orbit values, got " + std::to_string(values.size()));
  return values;
}

RunConfig parse_run_config(const json& doc) {
  only_keys(doc, "", {"system", "k", "k_prime", "enumeration", "x0", "sim", "output", "suite"});
  RunConfig c;

  const json& sys = require(doc, "", "system");
  only_keys(sys, "/system", {"type", "n", "roots"});
  const json& type = require(sys, "/system", "type");
  if (!type.is_string() || (type != "A" && type != "B" && type != "custom"))
    schema("/system/type", "expected \"A\", \"B\" or \"custom\"");
  c.system.type = type.get<std::string>();
  if (c.system.type == "custom") {
    const json& roots = require(sys, "/system", "roots");
    if (!roots.is_array() || roots.empty()) schema("/system/roots", "expected a nonempty array of vectors");
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const auto v = numbers(roots[i], "/system/roots/" + std::to_string(i));
      c.system.roots.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    if (sys.contains("n")) c.system.n = static_cast<int>(unsigned_int(sys["n"], "/system/n"));
  } else {
    c.system.n = static_cast<int>(unsigned_int(require(sys, "/system", "n"), "/system/n"));
    if (sys.contains("roots")) schema("/system/roots", "only allowed for custom systems");
  }

  c.k = numbers(require(doc, "", "k"), "/k");
  for (std::size_t i = 0; i < c.k.size(); ++i)
    if (!(c.k[i] >= 0.0)) schema("/k/" + std::to_string(i), "multiplicities must be >= 0");
  if (doc.contains("k_prime")) {
    c.k_prime = numbers(doc["k_prime"], "/k_prime");
    for (std::size_t i = 0; i < c.k_prime->size(); ++i)
      if (!((*c.k_prime)[i] >= 0.0)) schema("/k_prime/" + std::to_string(i), "multiplicities must be >= 0");
  }
  if (doc.contains("enumeration")) {
    const json& e = doc["enumeration"];
    if (!e.is_array()) schema("/enumeration", "expected an array of root indices");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < e.size(); ++i)
      idx.push_back(unsigned_int(e[i], "/enumeration/" + std::to_string(i)));
    c.enumeration = idx;
  }
  const auto x0 = numbers(require(doc, "", "x0"), "/x0");
  c.x0 = Eigen::Map<const Vector>(x0.data(), static_cast<Eigen::Index>(x0.size()));

  const json& sim = require(doc, "", "sim");
  only_keys(sim, "/sim", {"T", "dt", "paths", "seed", "wall_policy", "record_stride", "max_halvings", "wall_epsilon"});
  c.sim.horizon = number(require(sim, "/sim", "T"), "/sim/T");
  c.sim.dt = number(require(sim, "/sim", "dt"), "/sim/dt");
  c.sim.paths = unsigned_int(require(sim, "/sim", "paths"), "/sim/paths");
  c.sim.seed = unsigned_int(require(sim, "/sim", "seed"), "/sim/seed");
  if (sim.contains("wall_policy")) {
    if (!sim["wall_policy"].is_string()) schema("/sim/wall_policy", "expected a string");
    try {
      c.sim.wall_policy = wall_policy_from_string(sim["wall_policy"].get<std::string>());
    } catch (const Error&) {
      schema("/sim/wall_policy", "expected auto, reject-and-halve or stop-at-T0");
    }
  }
  if (sim.contains("record_stride")) c.sim.record_stride = unsigned_int(sim["record_stride"], "/sim/record_stride");
  if (sim.contains("max_halvings"))
    c.sim.max_halvings = static_cast<int>(unsigned_int(sim["max_halvings"], "/sim/max_halvings"));
  if (sim.contains("wall_epsilon")) c.sim.wall_epsilon = number(sim["wall_epsilon"], "/sim/wall_epsilon");
  try {
    c.sim.validate();
  } catch (const Error& e) {
    schema("/sim", e.what());
  }

  if (doc.contains("output")) {
    const json& out = doc["output"];
    only_keys(out, "/output", {"path", "format"});
    if (out.contains("path")) {
      if (!out["path"].is_string()) schema("/output/path", "expected a string");
      c.output_path = out["path"].get<std::string>();
    }
    if (out.contains("format")) {
      if (!out["format"].is_string() || (out["format"] != "csv" && out["format"] != "json"))
        schema("/output/format", "expected \"csv\" or \"json\"");
      c.output_format = out["format"].get<std::string>();
    }
  }
  if (doc.contains("suite")) {
    only_keys(doc["suite"], "/suite",
              {"harmonic_points", "moment_paths", "ks_paths", "martingale_paths", "fold_paths", "audit_paths",
               "rotation_trials", "wall_paths", "wall_dt", "only"});
    c.suite = doc["suite"];
  }

  // Cross-field checks that need the root system.
  std::shared_ptr<const RootSystem> rs;
  try {
    rs = build_system(c.system);
  } catch (const Error& e) {
    schema("/system", e.what());
  }
  if (static_cast<std::size_t>(c.x0.size()) != rs->dimension())
    schema("/x0", "expected " + std::to_string(rs->dimension()) + " coordinates");
  c.k = orbit_values(*rs, c.k, "/k");
  if (c.k_prime) c.k_prime = orbit_values(*rs, *c.k_prime, "/k_prime");
  if (c.enumeration) {
    try {
      (void)rs->with_enumeration(*c.enumeration);
    } catch (const Error& e) {
      schema("/enumeration", e.what());
    }
  }
  return c;
}

json apply_overrides(json doc, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::invalid_argument, "override '" + a + "' is not key=value");
    std::string pointer = "/" + a.substr(0, eq);
    for (auto& ch : pointer)
      if (ch == '.') ch = '/';
    const std::string text = a.substr(eq + 1);
    json value;
    try {
      value = json::parse(text);
    } catch (const json::exception&) {
      value = text;
    }
    doc[json::json_pointer(pointer)] = value;
  }
  return doc;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& assignments) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::schema_error, std::string("/: malformed JSON (") + e.what() + ")");
  }
  if (const char* env = std::getenv("DUNKL_LAB_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing");
      if (doc.is_object() && doc.contains("sim") && doc["sim"].is_object()) doc["sim"]["seed"] = v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_argument, "DUNKL_LAB_SEED must be an unsigned integer");
    }
  }
  return parse_run_config(apply_overrides(std::move(doc), assignments));
}

BatteryConfig battery_config(const RunConfig& c, unsigned threads) {
  BatteryConfig b;
  b.system = build_system(c.system);
  b.k = c.k;
  b.k_prime = c.k_prime;
  b.enumeration = c.enumeration;
  b.x0 = c.x0;
  b.sim = c.sim;
  b.sim.threads = threads;
  const json& s = c.suite;
  auto get = [&](const char* key, std::size_t& target) {
    if (s.contains(key)) target = unsigned_int(s[key], std::string("/suite/") + key);
  };
  get("harmonic_points", b.harmonic_points);
  get("moment_paths", b.moment_paths);
  get("ks_paths", b.ks_paths);
  get("martingale_paths", b.martingale_paths);
  get("fold_paths", b.fold_paths);
  get("audit_paths", b.audit_paths);
  get("rotation_trials", b.rotation_trials);
  get("wall_paths", b.wall_paths);
  if (s.contains("wall_dt")) b.wall_dt = number(s["wall_dt"], "/suite/wall_dt");
  if (s.contains("only")) {
    if (!s["only"].is_array()) schema("/suite/only", "expected an array of group names");
    static const std::set<std::string> groups = {"harmonic", "moment", "bessel", "modes", "projection",
                                                 "jumps", "folding", "walls", "rotation", "martingale"};
    for (std::size_t i = 0; i < s["only"].size(); ++i) {
      const json& g = s["only"][i];
      if (!g.is_string() || !groups.count(g.get<std::string>()))
        schema("/suite/only/" + std::to_string(i), "unknown check group");
      b.only.insert(g.get<std::string>());
    }
  }
  return b;
}

}  // namespace dunkl
