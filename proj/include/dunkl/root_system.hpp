#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace dunkl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kRootTolerance = 1e-9;
inline constexpr double kChamberTolerance = 1e-12;
inline constexpr std::size_t kDefaultWeylCap = 1'000'000;

/// Reflection through the hyperplane orthogonal to a root with α·α = 2:
/// σ_α(x) = x − (α·x)α.
Vector reflect(const Vector& alpha, const Vector& x);
Matrix reflection_matrix(const Vector& alpha);

/// Rescales every vector to squared norm 2. Vectors already within a few ulp
/// of that norm are returned bit-for-bit.
std::vector<Vector> normalize_roots(const std::vector<Vector>& raw);

/// Indices of the roots with α·β > 0, in stored order. Throws
/// degenerate_direction when β is (numerically) orthogonal to a root.
std::vector<std::size_t> positive_subsystem(const std::vector<Vector>& roots,
                                            const Vector& beta);

/// Breadth-first closure of the reflections of `roots`. Element 0 is the
/// identity; the order of discovery is the canonical order used for
/// tie-breaking elsewhere.
std::vector<Matrix> generate_weyl_group(const std::vector<Vector>& roots,
                                        std::size_t cap = kDefaultWeylCap);

/// Partition of root indices into W-orbits, ordered by smallest member.
std::vector<std::vector<std::size_t>> orbit_decomposition(const std::vector<Vector>& roots);

enum class ChamberMembership { interior, boundary, exterior };

/// A finite reduced root system with a chosen, ordered positive subsystem.
/// Immutable after construction.
class RootSystem {
 public:
  /// Normalizes and validates `raw`. When `positive` is absent the positive
  /// subsystem is selected with the canonical direction (n, n−1, …, 1),
  /// perturbed if that direction is degenerate.
  static RootSystem from_roots(const std::vector<Vector>& raw,
                               std::optional<std::vector<std::size_t>> positive = std::nullopt,
                               std::size_t weyl_cap = kDefaultWeylCap);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return roots_.size(); }
  const std::vector<Vector>& roots() const { return roots_; }
  const Vector& root(std::size_t i) const { return roots_.at(i); }

  /// Ordered enumeration α_1..α_m of R_+, as indices into roots().
  const std::vector<std::size_t>& positive() const { return positive_; }
  std::size_t positive_count() const { return positive_.size(); }
  const Vector& positive_root(std::size_t i) const { return roots_.at(positive_.at(i)); }

  /// Columns are the positive roots, in enumeration order.
  const Matrix& positive_matrix() const { return positive_matrix_; }

  const std::vector<Matrix>& weyl_group() const { return weyl_; }
  const std::vector<std::vector<std::size_t>>& orbits() const { return orbits_; }
  std::size_t orbit_of(std::size_t root_index) const { return orbit_of_.at(root_index); }

  std::optional<std::size_t> find_root(const Vector& v, double tol = kRootTolerance) const;
  /// Index of −α for root index i.
  std::size_t negative_of(std::size_t i) const { return negative_.at(i); }
  /// Index into positive() of ±v, if v is a root.
  std::optional<std::size_t> positive_position(const Vector& v, double tol = kRootTolerance) const;

  /// Same roots with a reordering of the positive subsystem. `enumeration`
  /// must be a permutation of positive().
  RootSystem with_enumeration(const std::vector<std::size_t>& enumeration) const;

  /// The system θR with index-wise transported roots and positive subsystem.
  RootSystem transformed(const Matrix& theta) const;

  bool operator==(const RootSystem&) const = delete;

 private:
  RootSystem() = default;
  void finish(std::size_t weyl_cap);

  std::size_t dimension_ = 0;
  std::vector<Vector> roots_;
  std::vector<std::size_t> positive_;
  std::vector<std::size_t> negative_;
  Matrix positive_matrix_;
  std::vector<Matrix> weyl_;
  std::vector<std::vector<std::size_t>> orbits_;
  std::vector<std::size_t> orbit_of_;
};

/// A_{n−1} in ℝⁿ: ±(e_i − e_j).
RootSystem build_type_a(int n);
/// B_n in ℝⁿ with short roots rescaled to √2·e_i.
RootSystem build_type_b(int n);
/// The rank-one system {±√2·e_1} in ℝ¹.
RootSystem build_rank_one();

/// Throws invalid_argument describing the first violated axiom.
void validate_root_system(const RootSystem& system);

ChamberMembership chamber_contains(const RootSystem& system, const Vector& x,
                                   double tol = kChamberTolerance);

struct ChamberProjection {
  Vector point;
  std::size_t element = 0;  // index into weyl_group()
};

/// Chamber representative w·x ∈ C̄ of the orbit of x, taking the first
/// admissible w in canonical order.
ChamberProjection project_to_chamber(const RootSystem& system, const Vector& x,
                                     double tol = kChamberTolerance);

/// Whether σ_{α_i}(R^{i−1}) = R^{i−1} with R^{i−1} = {±α_1, …, ±α_{i−1}};
/// `i` is 1-based in the positive enumeration.
bool check_invariance_condition(const RootSystem& system, std::size_t i);

}  // namespace dunkl
