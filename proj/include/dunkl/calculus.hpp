#pragma once

#include "dunkl/multiplicity.hpp"
#include "dunkl/root_system.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>

namespace dunkl {

/// ω_k(y) = ∏_{α∈R_+} |α·y|^{2k(α)}.
double weight_omega(const RootSystem& system, const Multiplicity& k, const Vector& y);
/// ϖ_k(x) = ∏_{α∈R_+} (α·x)^{k(α)}; non-integer powers need α·x > 0.
double weight_varpi(const RootSystem& system, const Multiplicity& k, const Vector& x);
/// ∇ log ϖ_k(x) = Σ_{α∈R_+} k(α) α / (x·α).
Vector drift(const RootSystem& system, const Multiplicity& k, const Vector& x);
/// δ(x) = ∏_{α∈R_+} (α·x)^{1−2k(α)}, x ∈ C.
double delta(const RootSystem& system, const Multiplicity& k, const Vector& x);
/// δ̄(x): product over k(α) ≠ 1/2 of (α·x)^{1−2k(α)} times the log of the
/// product over k(α) = 1/2 of α·x.
double delta_bar(const RootSystem& system, const Multiplicity& k, const Vector& x);
/// π(x) = ∏_{α∈R_+} α·x.
double pi_product(const RootSystem& system, const Vector& x);

/// Power with an integer fast path; fractional exponents require base > 0.
double checked_power(double base, double exponent);

struct TestFunction {
  std::function<double(const Vector&)> fn;
  /// Finite differences are trusted for ‖p‖ ≤ radius.
  double radius = std::numeric_limits<double>::infinity();
  /// Optional extra restriction of the trusted region.
  std::function<bool(const Vector&)> domain;

  double operator()(const Vector& x) const { return fn(x); }
  bool trusted_at(const Vector& x) const {
    return x.norm() <= radius && (!domain || domain(x));
  }
};

/// Extra single-direction jump term λ(u(σ_α x) − u(x)).
struct PointJump {
  double rate = 0.0;
  Vector alpha;
};

/// Which generator to evaluate: drift multiplicity k, per-positive-root jump
/// coefficients (0 disables a root) and an optional point-jump term.
///
/// - no jumps: the radial generator L_k^W
/// - coefficients k on all of R_+: L_k
/// - coefficients k on α_1..α_i: the partial generator 𝒢^i
/// - coefficients k′ or l: the two-parameter family
class GeneratorSpec {
 public:
  static GeneratorSpec radial(std::shared_ptr<const RootSystem> system, Multiplicity k);
  static GeneratorSpec dunkl(std::shared_ptr<const RootSystem> system, Multiplicity k);
  static GeneratorSpec two_parameter(std::shared_ptr<const RootSystem> system, Multiplicity k,
                                     const Multiplicity& jump);
  static GeneratorSpec partial(std::shared_ptr<const RootSystem> system, Multiplicity k,
                               std::size_t active_prefix);

  GeneratorSpec with_point_jump(double rate, Vector alpha) const;
  GeneratorSpec with_jump_coefficients(Vector coefficients) const;

  const RootSystem& system() const { return *system_; }
  const std::shared_ptr<const RootSystem>& system_ptr() const { return system_; }
  const Multiplicity& k() const { return k_; }
  const Vector& jump_coefficients() const { return jump_; }
  const std::optional<PointJump>& point_jump() const { return point_; }

 private:
  GeneratorSpec(std::shared_ptr<const RootSystem> system, Multiplicity k, Vector jump);

  std::shared_ptr<const RootSystem> system_;
  Multiplicity k_;
  Vector jump_;
  std::optional<PointJump> point_;
};

struct FiniteDifferenceOptions {
  double relative_step = 1e-3;  // h = relative_step·(1 + ‖x‖)
  bool richardson = true;       // one extrapolation level (h, h/2)
};

struct GeneratorValue {
  double value = 0.0;
  double diffusion_term = 0.0;  // ½Δu
  double drift_term = 0.0;      // ∇log ϖ_k · ∇u
  double jump_term = 0.0;
  double point_term = 0.0;
  double scale = 0.0;  // sum of absolute values of the individual terms
};

struct Derivatives {
  double value = 0.0;
  Vector gradient;
  Vector second;  // diagonal second derivatives
  double laplacian() const { return second.sum(); }
};

/// Central differences with optional Richardson extrapolation; every stencil
/// point is checked against u.trusted_at.
Derivatives finite_differences(const TestFunction& u, const Vector& x,
                               const FiniteDifferenceOptions& opts = {});

GeneratorValue apply_generator(const GeneratorSpec& spec, const TestFunction& u, const Vector& x,
                               const FiniteDifferenceOptions& opts = {});

enum class HarmonicTarget { delta, delta_bar, pi, pi_power_identity };

struct Residual {
  double residual = 0.0;
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

/// Residual of L_k^W δ, L_k^W δ̄, Δπ, or Δπ^{1−2k} + 2∇π^{1−2k}·∇log π^k (uniform k)
/// at an interior point of C at distance ≥ 10h from the walls.
Residual harmonicity_residual(HarmonicTarget which, std::shared_ptr<const RootSystem> system,
                              const Multiplicity& k, const Vector& x,
                              const FiniteDifferenceOptions& opts = {});

/// Transports a spec along an orthogonal θ: roots θα, multiplicity
/// k_θ(θα) = k(α), point-jump direction θα.
GeneratorSpec rotate_spec(const GeneratorSpec& spec, const Matrix& theta);

}  // namespace dunkl
