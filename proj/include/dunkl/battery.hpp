#pragma once

#include "dunkl/stat_verify.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dunkl {

struct BatteryConfig {
  std::shared_ptr<const RootSystem> system;
  std::vector<double> k;                       // per orbit
  std::optional<std::vector<double>> k_prime;  // per orbit; defaults to 2k for the (k,k′) run
  std::optional<std::vector<std::size_t>> enumeration;
  Vector x0;
  SimulationConfig sim;

  std::size_t harmonic_points = 100;
  std::size_t moment_paths = 20000;
  std::size_t ks_paths = 5000;
  std::size_t martingale_paths = 2000;
  std::size_t fold_paths = 10000;
  std::size_t audit_paths = 200;
  std::size_t rotation_trials = 50;
  /// Rank-one sweep sample size; 0 disables the sweep.
  std::size_t wall_paths = 4000;
  double wall_dt = 1e-4;

  /// Restrict to these check groups (empty = all): harmonic, moment, bessel,
  /// modes, projection, jumps, folding, walls, rotation, martingale.
  std::set<std::string> only;
};

/// Test functions of the martingale battery and their names.
std::vector<TestFunction> battery_test_functions(std::size_t n);
std::vector<std::string> battery_test_names();

/// Every check with its negative control; `satisfied()` on each report tells
/// whether the suite is happy with it.
Suite run_standard_battery(const BatteryConfig& config);

/// Harmonicity reports at random interior points of C.
std::vector<Report> harmonicity_checks(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                                       std::size_t points, std::uint64_t seed);

/// Random interior points of C at distance ≥ `margin`·(1+‖x‖) from every wall.
std::vector<Vector> sample_chamber_points(const RootSystem& system, std::size_t count, std::uint64_t seed,
                                          double margin = 0.05);

/// Prints the human-readable table.
std::string format_table(const std::vector<Report>& reports);

}  // namespace dunkl
