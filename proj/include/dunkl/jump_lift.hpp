#pragma once

#include "dunkl/multiplicity.hpp"
#include "dunkl/radial_sde.hpp"
#include "dunkl/root_system.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dunkl {

enum class LiftMode { shortcut, general };
/// Mode selection for whole plans; `automatic` uses shortcut wherever the
/// invariance condition holds.
enum class ModeRequest { automatic, shortcut, general };

std::string to_string(LiftMode mode);
LiftMode lift_mode_from_string(const std::string& name);
ModeRequest mode_request_from_string(const std::string& name);

/// RNG substream for the clock or arrival stream of a 1-based lift level.
std::uint32_t level_substream(Substream kind, std::size_t level);

struct LiftLevel {
  std::size_t root = 0;  // index into RootSystem::roots(), a positive root
  double rate = 0.0;     // jump coefficient c_i
  LiftMode mode = LiftMode::general;
};

/// Ordered list of lift levels α_1..α_L (a prefix of an enumeration of R_+).
class LiftPlan {
 public:
  LiftPlan(std::shared_ptr<const RootSystem> system, std::vector<LiftLevel> levels);

  /// One level per positive root in the system's enumeration, rates from `jump`.
  static LiftPlan for_system(std::shared_ptr<const RootSystem> system, const Multiplicity& jump,
                             ModeRequest request = ModeRequest::automatic);

  const RootSystem& system() const { return *system_; }
  const std::shared_ptr<const RootSystem>& system_ptr() const { return system_; }
  const std::vector<LiftLevel>& levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }

  /// This plan with one more level appended.
  LiftPlan lifted(std::size_t root, double rate, LiftMode mode) const;
  LiftPlan prefix(std::size_t count) const;

  /// σ_{root}({±α_1..±α_p}) = {±α_1..±α_p} for the first p = `position` levels.
  bool invariance_holds(std::size_t position, std::size_t root) const;

 private:
  std::shared_ptr<const RootSystem> system_;
  std::vector<LiftLevel> levels_;
};

/// Trapezoid ∫ ds/d(s)² over one step along the linear interpolation of
/// d between d0 and d1, subdivided when the plain estimate exceeds `cap`.
double clock_increment(double d0, double d1, double dt, double cap);

/// Ã_t = ∫_0^t ds/(Y_s·α)² on the trajectory grid (trapezoid rule).
std::vector<double> cumulative_time_change(const Trajectory& trajectory, const Vector& alpha);
/// τ̃(a) = inf{t : Ã_t ≥ a}, by linear interpolation on the grid.
double inverse_time_change(const std::vector<double>& times, const std::vector<double>& clock,
                           double a);

struct LiftOptions {
  /// Per-step cap on Λ increments before the step is subdivided.
  double lambda_max = 50.0;
  /// Count grid states of the output outside C_L (see fold_check_regions).
  bool check_confinement = false;
};

struct LiftDiagnostics {
  std::size_t confinement_violations = 0;
  std::size_t checked_states = 0;
};

/// Y^L of a lift plan started at x0 ∈ E: the extended radial part in the
/// chamber of x0, with jump levels added by integrated-intensity clocks
/// (general) or independent Poisson flips (shortcut).
class DunklSimulator final : public PathSimulator {
 public:
  DunklSimulator(LiftPlan plan, Multiplicity k, Vector x0, SimulationConfig config,
                 LiftOptions options = {});

  std::size_t dimension() const override { return x0_.size(); }
  const SimulationConfig& config() const override { return config_; }
  PathSummary run(std::uint64_t path_index, PathObserver* observer) const override;
  PathSummary run_checked(std::uint64_t path_index, PathObserver* observer,
                          LiftDiagnostics* diagnostics) const;

  /// Simulator of Y^{L+1}.
  DunklSimulator lift_one_root(std::size_t root, double rate, LiftMode mode) const;

  const LiftPlan& plan() const { return plan_; }
  const Multiplicity& k() const { return k_; }
  const Vector& x0() const { return x0_; }
  const LiftOptions& options() const { return options_; }

 private:
  LiftPlan plan_;
  Multiplicity k_;
  Vector x0_;
  SimulationConfig config_;
  LiftOptions options_;
  ChamberDiffusion diffusion_;
  std::vector<std::size_t> output_region_;  // C_L, filled when confinement is checked
};

/// Full process from x0 ∈ E. `jump` defaults to k (Dunkl); pass k′ for the
/// two-parameter family. `enumeration` reorders R_+ (root indices).
DunklSimulator make_dunkl_simulator(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                                    const std::optional<Multiplicity>& jump,
                                    const std::optional<std::vector<std::size_t>>& enumeration,
                                    const Vector& x0, const SimulationConfig& config,
                                    ModeRequest request = ModeRequest::automatic,
                                    LiftOptions options = {});

Trajectory simulate_dunkl(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                          const std::optional<Multiplicity>& jump,
                          const std::optional<std::vector<std::size_t>>& enumeration,
                          const Vector& x0, const SimulationConfig& config,
                          ModeRequest request = ModeRequest::automatic, std::uint64_t path_index = 0);

/// Y_t^i = σ_α^{N(c·Ã_t)} Y_t^{i−1} applied to a recorded trajectory, with
/// unit-rate Poisson arrivals drawn from `arrivals`.
Trajectory shortcut_lift(const Trajectory& lower, const RootSystem& system, std::size_t root,
                         double rate, PhiloxStream& arrivals, std::size_t level = 1,
                         double lambda_max = 50.0);

struct FoldRegions {
  /// C_0..C_L, each as the Weyl elements w with w(C) ⊆ C_i.
  std::vector<std::vector<std::size_t>> regions;
  /// Entry j−1: whether C_{j−1} ∩ σ_{α_j}(C_{j−1}) = ∅.
  std::vector<bool> disjoint;
  bool covers_space = false;
};

FoldRegions fold_check_regions(const LiftPlan& plan);

/// Membership of y in a union of closed chambers w(C̄).
bool region_contains(const RootSystem& system, const std::vector<std::size_t>& region,
                     const Vector& y);

/// Index of a Weyl group element given as a matrix.
std::size_t weyl_index(const RootSystem& system, const Matrix& w);

}  // namespace dunkl
