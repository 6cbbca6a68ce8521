#pragma once

#include "dunkl/battery.hpp"
#include "dunkl/radial_sde.hpp"
#include "dunkl/root_system.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dunkl {

struct SystemChoice {
  std::string type = "B";  // "A" | "B" | "custom"
  int n = 2;
  std::vector<Vector> roots;  // custom only
};

struct RunConfig {
  SystemChoice system;
  std::vector<double> k;  // per orbit
  std::optional<std::vector<double>> k_prime;
  std::optional<std::vector<std::size_t>> enumeration;
  Vector x0;
  SimulationConfig sim;
  std::string output_path;  // empty = standard output
  std::string output_format = "csv";
  nlohmann::json suite = nlohmann::json::object();
};

std::shared_ptr<const RootSystem> build_system(const SystemChoice& choice);

/// Validates the document; errors are schema-error with a JSON-pointer path.
RunConfig parse_run_config(const nlohmann::json& doc);

/// Applies `key.path=value` overrides; values parse as JSON, else as strings.
nlohmann::json apply_overrides(nlohmann::json doc, const std::vector<std::string>& assignments);

/// Reads FILE, applies DUNKL_LAB_SEED and then the overrides.
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& assignments);

/// Per-orbit values broadcast from a scalar or checked against the orbit count.
std::vector<double> orbit_values(const RootSystem& system, const std::vector<double>& values,
                                 const std::string& pointer);

/// Battery settings from the config and its optional "suite" section.
BatteryConfig battery_config(const RunConfig& config, unsigned threads);

}  // namespace dunkl
