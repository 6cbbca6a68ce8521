#pragma once

#include "dunkl/multiplicity.hpp"
#include "dunkl/rng.hpp"
#include "dunkl/root_system.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace dunkl {

enum class WallPolicy {
  automatic,         // reject-and-halve when min k >= 1/2, stop-at-T0 otherwise
  reject_and_halve,  // refine exiting steps on a Brownian bridge
  stop_at_t0,        // terminate at the first wall contact
};

std::string to_string(WallPolicy policy);
WallPolicy wall_policy_from_string(const std::string& name);

struct SimulationConfig {
  double horizon = 1.0;
  double dt = 1e-3;
  std::size_t paths = 1;
  std::uint64_t seed = 0;
  WallPolicy wall_policy = WallPolicy::automatic;
  int max_halvings = 20;
  /// Wall-hit threshold ε_wall = wall_epsilon·(1 + ‖x‖).
  double wall_epsilon = 1e-8;
  /// Record every k-th grid state in trajectories; 0 keeps endpoints only.
  std::size_t record_stride = 1;
  /// Worker threads for ensembles; 0 picks hardware concurrency.
  unsigned threads = 1;

  void validate() const;
  std::size_t steps() const;
  double step_length(std::size_t step) const;
};

enum class Termination { horizon, wall_hit, step_failure };
std::string to_string(Termination t);

struct JumpEvent {
  double time = 0.0;
  std::size_t level = 0;  // 1-based lift level that fired
  std::size_t root = 0;   // index into RootSystem::roots() of the reflecting root
  Vector pre;
  Vector post;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<JumpEvent> jumps;
  Termination termination = Termination::horizon;
  double end_time = 0.0;
  std::size_t refinements = 0;
  int max_depth = 0;
  /// Early termination although min k >= 1/2 (pure discretization effect).
  bool artifact = false;
};

struct PathSummary {
  Vector final_state;
  Termination termination = Termination::horizon;
  double end_time = 0.0;
  std::size_t jumps = 0;
  std::size_t refinements = 0;
  int max_depth = 0;
  bool artifact = false;
};

/// Receives every grid state (including t = 0) and every jump of one path.
class PathObserver {
 public:
  virtual ~PathObserver() = default;
  virtual void on_state(double /*t*/, const Vector& /*x*/) {}
  virtual void on_jump(const JumpEvent& /*event*/) {}
};

/// Anything that produces independent, seed-deterministic paths.
class PathSimulator {
 public:
  virtual ~PathSimulator() = default;
  virtual std::size_t dimension() const = 0;
  virtual const SimulationConfig& config() const = 0;
  virtual PathSummary run(std::uint64_t path_index, PathObserver* observer) const = 0;

  /// Runs one path and records it according to config().record_stride.
  Trajectory trajectory(std::uint64_t path_index) const;
};

/// Runs paths [0, n) on `threads` workers; output is ordered by path index
/// and independent of the worker count.
std::vector<PathSummary> run_ensemble(const PathSimulator& sim, std::size_t n, unsigned threads);

/// Static-chunked parallel loop over [0, n).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// Source of standard normal vectors for the diffusion.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual void draw(Vector& out) = 0;
};

class PhiloxNoise final : public NoiseSource {
 public:
  explicit PhiloxNoise(PhiloxStream stream) : stream_(stream) {}
  void draw(Vector& out) override;

 private:
  PhiloxStream stream_;
};

struct StepOutcome {
  enum class Status { accepted, wall_hit, exhausted } status = Status::accepted;
  int depth = 0;
  std::size_t refinements = 0;
  /// For wall_hit: fraction of the step at which the wall was reached.
  double hit_fraction = 1.0;
};

/// Euler–Maruyama for dX = dβ + ∇log ϖ_k(X) dt that keeps X inside the chamber
/// it started in (the extended radial part). Exiting steps are either refined
/// on a Brownian bridge (reject-and-halve) or reported as wall hits.
class ChamberDiffusion {
 public:
  ChamberDiffusion(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                   WallPolicy policy, int max_halvings, double wall_epsilon);

  const RootSystem& system() const { return *system_; }
  /// Policy after resolving `automatic`.
  WallPolicy policy() const { return policy_; }
  double min_k() const { return min_k_; }

  void drift_into(const Vector& x, Vector& out) const;
  /// x + drift(x)·dt + dW with no wall handling.
  Vector euler_candidate(const Vector& x, double dt, const Vector& dW) const;
  /// min over positive roots of s_α·(α·x) where s_α is the sign pattern of `reference`.
  double signed_wall_distance(const Vector& x, const Vector& reference) const;
  bool inside(const Vector& candidate, const Vector& reference) const;

  /// Advances x by dt with increment dW; on refinement, bridge noise comes from `noise`.
  StepOutcome step(Vector& x, double dt, const Vector& dW, NoiseSource& noise) const;

 private:
  StepOutcome refine(Vector& x, double dt, const Vector& dW, NoiseSource& noise, int depth) const;

  std::shared_ptr<const RootSystem> system_;
  Matrix positive_;
  Vector k_positive_;
  WallPolicy policy_;
  int max_halvings_;
  double wall_epsilon_;
  double min_k_;
};

/// The radial Dunkl process X^W started inside C (or, via `allow_any_chamber`,
/// its image in the chamber containing x0).
class RadialSimulator final : public PathSimulator {
 public:
  RadialSimulator(std::shared_ptr<const RootSystem> system, Multiplicity k, Vector x0,
                  SimulationConfig config, bool allow_any_chamber = false);

  std::size_t dimension() const override { return x0_.size(); }
  const SimulationConfig& config() const override { return config_; }
  PathSummary run(std::uint64_t path_index, PathObserver* observer) const override;
  /// Same path driven by an explicit noise source.
  PathSummary run_with_noise(NoiseSource& noise, PathObserver* observer) const;

  const ChamberDiffusion& diffusion() const { return diffusion_; }
  const Multiplicity& k() const { return k_; }
  const Vector& x0() const { return x0_; }

 private:
  std::shared_ptr<const RootSystem> system_;
  Multiplicity k_;
  Vector x0_;
  SimulationConfig config_;
  ChamberDiffusion diffusion_;
};

/// One Euler–Maruyama step with reject-and-halve (or stop) wall handling.
StepOutcome em_step(const ChamberDiffusion& diffusion, Vector& x, double dt, const Vector& dW,
                    NoiseSource& noise);

/// Path `path_index` of the radial process from x0 ∈ C.
Trajectory simulate_radial(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                           const Vector& x0, const SimulationConfig& config,
                           std::uint64_t path_index = 0);

std::vector<double> squared_norm_series(const Trajectory& trajectory);

}  // namespace dunkl
