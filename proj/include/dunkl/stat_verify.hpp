#pragma once

#include "dunkl/calculus.hpp"
#include "dunkl/jump_lift.hpp"
#include "dunkl/ks_test.hpp"
#include "dunkl/radial_sde.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace dunkl {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One check. For tolerance checks pass ⇔ |estimate − target| ≤ tolerance; for
/// p-value checks pass ⇔ p_value ≥ significance.
struct Report {
  std::string name;
  std::string criterion = "tolerance";  // "tolerance" | "p-value"
  double estimate = kNaN;
  double target = 0.0;
  double standard_error = kNaN;
  double tolerance = kNaN;
  double p_value = kNaN;
  double significance = kNaN;
  std::size_t sample_size = 0;
  bool passed = false;
  bool skipped = false;
  /// A deliberately mismatched run that must fail.
  bool negative_control = false;
  double runtime_seconds = 0.0;
  std::string detail;

  /// True when the report is what the suite wants: a pass, or a failing negative control.
  bool satisfied() const { return skipped || (negative_control ? !passed : passed); }
};

/// Driftless Brownian motion in ℝⁿ (the k ≡ 0 calibration process).
class BrownianSimulator final : public PathSimulator {
 public:
  BrownianSimulator(Vector x0, SimulationConfig config);
  std::size_t dimension() const override { return x0_.size(); }
  const SimulationConfig& config() const override { return config_; }
  PathSummary run(std::uint64_t path_index, PathObserver* observer) const override;

 private:
  Vector x0_;
  SimulationConfig config_;
};

struct MartingaleOptions {
  std::size_t paths = 5000;
  /// b(dt) = bias_constant·dt is added to the 3-SE band.
  double bias_constant = 0.0;
  unsigned threads = 1;
};

/// Monte-Carlo mean of u(X_T) − u(X_0) − Σ 𝒜u(X_{t_j})·Δt_j for each u, over
/// the same paths. One report per test function.
std::vector<Report> martingale_residuals(const PathSimulator& sim, const GeneratorSpec& spec,
                                         const std::vector<TestFunction>& functions,
                                         const std::vector<std::string>& names,
                                         const MartingaleOptions& options);

Report martingale_residual(const PathSimulator& sim, const GeneratorSpec& spec, const TestFunction& u,
                           const MartingaleOptions& options, const std::string& name = "martingale");

/// Bias constant c = max_u (|mean residual| − 3 SE)₊/dt measured on Brownian motion.
double calibrate_bias_constant(const Vector& x0, const SimulationConfig& config,
                               const std::vector<TestFunction>& functions, std::size_t paths,
                               unsigned threads);

/// Fine-grid Euler samples of a Bessel process of dimension d at time T.
std::vector<double> bessel_oracle_samples(double dimension, double r0, double horizon, double dt,
                                          std::size_t count, std::uint64_t seed, unsigned threads = 1);

/// Two-sample KS of ‖X_T‖ against the Bessel(d) oracle.
Report norm_is_bessel(const PathSimulator& sim, double dimension, std::size_t paths,
                      std::uint64_t oracle_seed, unsigned threads = 1);

/// Mean of ‖X_T‖² against ‖x0‖² + d·T, within 3 SE.
Report squared_norm_moment(const PathSimulator& sim, const Vector& x0, double dimension,
                           std::size_t paths, unsigned threads = 1);

/// Coordinatewise KS of two samples of points, Bonferroni over coordinates.
Report coordinate_ks(const std::string& name, const std::vector<Vector>& a, const std::vector<Vector>& b,
                     double significance = 0.01);

/// π(Y_T) for the full process against X^W_T for the radial process.
Report projection_agreement(const PathSimulator& full, const PathSimulator& radial,
                            const RootSystem& system, std::size_t paths, unsigned threads = 1);

/// KS of Y_T·v (one per v) between two simulators.
Report projection_ks(const std::string& name, const PathSimulator& a, const PathSimulator& b,
                     const std::vector<Vector>& directions, std::size_t paths, unsigned threads = 1);

struct Box {
  Vector lower;
  Vector upper;
  bool contains(const Vector& y) const;
};

/// Boxes lying inside one chamber of C_{j−1}, centred at pilot samples.
std::vector<Box> folding_boxes(const LiftPlan& plan, std::size_t j, const std::vector<Vector>& pilot,
                               double half_width, std::size_t count);

struct FoldingSetup {
  Multiplicity k;
  Vector x0;
  SimulationConfig config;
  std::size_t paths = 10000;
  std::size_t boxes = 10;
  unsigned threads = 1;
};

/// P^{j−1}(A) against P^j(A) + P^j(σ_{α_j}A) on test boxes, within 3 pooled SE.
/// Skipped when C_{j−1} and its reflection overlap.
Report folding_identity(const LiftPlan& plan, std::size_t j, const FoldingSetup& setup);

struct WallProfile {
  std::vector<double> k_values;
  std::vector<double> hit_fractions;
};

/// Rank-one sweep of T_0 frequencies.
Report wall_hitting_profile(const std::vector<double>& k_values, double x0, double horizon, double dt,
                            std::size_t paths, std::uint64_t seed, unsigned threads = 1,
                            WallProfile* profile = nullptr);

/// Max over random (θ, u, x) of |L^{θR}_{k_θ} u(θx) − L^R_k(u∘θ)(x)| / scale.
/// With `untransported`, the rotated spec keeps k attached to coordinates
/// (the deliberately wrong k_θ).
Report rotation_identity(const GeneratorSpec& spec, std::size_t trials, std::uint64_t seed,
                         const Matrix* fixed_theta = nullptr, bool untransported = false);

/// θ·Y_T under (k, R, x0) against Y_T under (k_θ, θR, θx0).
Report rotation_statistical(const Matrix& theta, const PathSimulator& original,
                            const PathSimulator& rotated, std::size_t paths, unsigned threads = 1);

/// Random orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Matrix random_orthogonal(std::size_t n, PhiloxStream& stream);

/// Spec over θR whose multiplicity is looked up by vector position in R
/// (k_wrong(β) = k(β) when β ∈ R), instead of k_θ(β) = k(θᵀβ).
GeneratorSpec untransported_spec(const GeneratorSpec& spec, const Matrix& theta);

struct JumpAudit {
  std::size_t paths = 0;
  std::size_t jumps = 0;
  std::size_t inexact = 0;          // post ≠ σ_α(pre)
  std::size_t projection_moves = 0; // π(pre) ≠ π(post)
  std::size_t confinement_violations = 0;
  std::size_t checked_states = 0;
};

/// Replays paths and audits every jump and confinement to C_L.
JumpAudit audit_jumps(const DunklSimulator& sim, std::size_t paths, double tolerance = 1e-12);

/// Checks run in a suite, with the rule that every statistical check has a
/// failing negative control.
struct Suite {
  std::vector<Report> reports;
  bool all_satisfied() const;
};

}  // namespace dunkl
