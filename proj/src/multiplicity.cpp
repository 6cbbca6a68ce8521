#include "dunkl/multiplicity.hpp"

#include "dunkl/error.hpp"

#include <algorithm>
#include <cmath>

namespace dunkl {

Multiplicity::Multiplicity(const RootSystem& system, std::vector<double> per_orbit)
    : per_orbit_(std::move(per_orbit)) {
  if (per_orbit_.size() != system.orbits().size()) {
    throw Error(ErrorKind::invalid_argument,
                "multiplicity needs one value per orbit (" +
                    std::to_string(system.orbits().size()) + " orbits)");
  }
  for (double v : per_orbit_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::invalid_argument, "multiplicity values must be finite and >= 0");
    }
  }
  per_root_.resize(system.size());
  for (std::size_t r = 0; r < system.size(); ++r) per_root_[r] = per_orbit_[system.orbit_of(r)];
  for (auto p : system.positive()) gamma_ += per_root_[p];
}

Multiplicity Multiplicity::constant(const RootSystem& system, double value) {
  return Multiplicity(system, std::vector<double>(system.orbits().size(), value));
}

Vector Multiplicity::positive_values(const RootSystem& system) const {
  if (system.size() != per_root_.size()) {
    throw Error(ErrorKind::dimension_mismatch, "multiplicity belongs to a different root system");
  }
  Vector out(static_cast<Eigen::Index>(system.positive_count()));
  for (std::size_t i = 0; i < system.positive_count(); ++i) {
    out[static_cast<Eigen::Index>(i)] = per_root_[system.positive()[i]];
  }
  return out;
}

double Multiplicity::min_value() const {
  return per_orbit_.empty() ? 0.0 : *std::min_element(per_orbit_.begin(), per_orbit_.end());
}

bool Multiplicity::is_uniform() const {
  return std::all_of(per_orbit_.begin(), per_orbit_.end(),
                     [&](double v) { return v == per_orbit_.front(); });
}

}  // namespace dunkl
