#pragma once

#include "dunkl/root_system.hpp"

#include <vector>

namespace dunkl {

/// W-invariant nonnegative multiplicity, stored per orbit of the root system
/// it was built for and expanded per root index.
class Multiplicity {
 public:
  Multiplicity(const RootSystem& system, std::vector<double> per_orbit);
  static Multiplicity constant(const RootSystem& system, double value);

  double operator()(std::size_t root_index) const { return per_root_.at(root_index); }
  const std::vector<double>& per_orbit() const { return per_orbit_; }
  const std::vector<double>& per_root() const { return per_root_; }

  /// Values k(α_1), …, k(α_m) in the positive enumeration of `system`.
  Vector positive_values(const RootSystem& system) const;

  /// γ = Σ_{α ∈ R_+} k(α).
  double gamma() const { return gamma_; }
  double min_value() const;
  bool is_uniform() const;

 private:
  std::vector<double> per_orbit_;
  std::vector<double> per_root_;
  double gamma_ = 0.0;
};

}  // namespace dunkl
