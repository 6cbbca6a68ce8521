#include "dunkl/root_system.hpp"

#include "dunkl/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace dunkl {

namespace {

using Permutation = std::vector<std::uint32_t>;

std::optional<std::size_t> find_vector(const std::vector<Vector>& set, const Vector& v,
                                       double tol) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i].size() == v.size() && (set[i] - v).cwiseAbs().maxCoeff() <= tol) return i;
  }
  return std::nullopt;
}

// Action of σ_α on root indices, or nullopt when σ_α does not permute the set.
std::optional<Permutation> reflection_permutation(const std::vector<Vector>& roots,
                                                  const Vector& alpha) {
  Permutation perm(roots.size());
  for (std::size_t j = 0; j < roots.size(); ++j) {
    auto idx = find_vector(roots, reflect(alpha, roots[j]), kRootTolerance);
    if (!idx) return std::nullopt;
    perm[j] = static_cast<std::uint32_t>(*idx);
  }
  return perm;
}

// Matrix key for inputs whose reflections do not permute the set; entries of
// distinct elements of a finite orthogonal group differ far above this grid.
std::vector<std::int64_t> matrix_key(const Matrix& m) {
  std::vector<std::int64_t> key(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    key[static_cast<std::size_t>(i)] = std::llround(m.data()[i] * 1e7);
  }
  return key;
}

// Reflections σ_α for one representative of each ±α pair, in root order.
std::vector<std::size_t> generator_roots(const std::vector<Vector>& roots) {
  std::vector<std::size_t> out;
  std::vector<Vector> seen;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (find_vector(seen, roots[i], kRootTolerance) || find_vector(seen, -roots[i], kRootTolerance)) {
      continue;
    }
    seen.push_back(roots[i]);
    out.push_back(i);
  }
  return out;
}

Vector canonical_direction(std::size_t n, int attempt) {
  Vector beta(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    beta[static_cast<Eigen::Index>(j)] =
        static_cast<double>(n - j) + (attempt == 0 ? 0.0 : 0.1 * attempt * std::sqrt(2.0 + j * 1.37));
  }
  return beta;
}

std::size_t checked_dimension(const std::vector<Vector>& raw) {
  if (raw.empty()) throw Error(ErrorKind::invalid_argument, "root system must be non-empty");
  const auto n = static_cast<std::size_t>(raw.front().size());
  if (n == 0) throw Error(ErrorKind::invalid_argument, "roots must have positive dimension");
  for (const auto& r : raw) {
    if (static_cast<std::size_t>(r.size()) != n) {
      throw Error(ErrorKind::invalid_argument, "roots have inconsistent dimensions");
    }
  }
  return n;
}

}  // namespace

Vector reflect(const Vector& alpha, const Vector& x) { return x - alpha.dot(x) * alpha; }

Matrix reflection_matrix(const Vector& alpha) {
  const auto n = alpha.size();
  return Matrix::Identity(n, n) - alpha * alpha.transpose();
}

std::vector<Vector> normalize_roots(const std::vector<Vector>& raw) {
  std::vector<Vector> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    const double sq = r.squaredNorm();
    if (!(sq > 0.0) || !std::isfinite(sq)) {
      throw Error(ErrorKind::invalid_argument, "cannot normalize a zero or non-finite vector");
    }
    if (std::abs(sq - 2.0) <= 8.0 * std::numeric_limits<double>::epsilon()) {
      out.push_back(r);
    } else {
      out.push_back(r * std::sqrt(2.0 / sq));
    }
  }
  return out;
}

std::vector<std::size_t> positive_subsystem(const std::vector<Vector>& roots, const Vector& beta) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double d = roots[i].dot(beta);
    if (std::abs(d) <= 1e-12 * (1.0 + beta.norm())) {
      std::ostringstream os;
      os << "direction is orthogonal to root " << i;
      throw Error(ErrorKind::degenerate_direction, os.str());
    }
    if (d > 0.0) out.push_back(i);
  }
  return out;
}

std::vector<Matrix> generate_weyl_group(const std::vector<Vector>& roots, std::size_t cap) {
  const std::size_t n = checked_dimension(roots);
  const auto gens = generator_roots(roots);

  std::vector<Matrix> gen_mats;
  std::vector<Permutation> gen_perms;
  bool permuting = true;
  for (auto g : gens) {
    gen_mats.push_back(reflection_matrix(roots[g]));
    auto p = reflection_permutation(roots, roots[g]);
    if (!p) {
      permuting = false;
    } else {
      gen_perms.push_back(std::move(*p));
    }
  }

  std::vector<Matrix> elements;
  elements.push_back(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));

  if (permuting) {
    Permutation id(roots.size());
    std::iota(id.begin(), id.end(), 0u);
    std::vector<Permutation> perms{id};
    std::map<Permutation, std::size_t> index{{id, 0}};
    for (std::size_t head = 0; head < elements.size(); ++head) {
      for (std::size_t g = 0; g < gens.size(); ++g) {
        Permutation composed(roots.size());
        for (std::size_t j = 0; j < roots.size(); ++j) composed[j] = gen_perms[g][perms[head][j]];
        if (index.count(composed)) continue;
        if (elements.size() >= cap) {
          throw Error(ErrorKind::cap_exceeded, "Weyl group closure exceeds cap");
        }
        index.emplace(composed, elements.size());
        Matrix m = gen_mats[g] * elements[head];
        perms.push_back(std::move(composed));
        elements.push_back(std::move(m));
      }
    }
    return elements;
  }

  std::map<std::vector<std::int64_t>, std::size_t> index{{matrix_key(elements[0]), 0}};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : gen_mats) {
      Matrix m = g * elements[head];
      auto key = matrix_key(m);
      if (index.count(key)) continue;
      if (elements.size() >= cap) {
        throw Error(ErrorKind::cap_exceeded, "Weyl group closure exceeds cap");
      }
      index.emplace(std::move(key), elements.size());
      elements.push_back(std::move(m));
    }
  }
  return elements;
}

std::vector<std::vector<std::size_t>> orbit_decomposition(const std::vector<Vector>& roots) {
  std::vector<std::size_t> parent(roots.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& alpha : roots) {
    auto perm = reflection_permutation(roots, alpha);
    if (!perm) throw Error(ErrorKind::invalid_argument, "roots are not closed under reflections");
    for (std::size_t j = 0; j < roots.size(); ++j) {
      auto a = find(j), b = find((*perm)[j]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t j = 0; j < roots.size(); ++j) groups[find(j)].push_back(j);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [rep, members] : groups) out.push_back(std::move(members));
  return out;
}

// ---------------------------------------------------------------------------

RootSystem RootSystem::from_roots(const std::vector<Vector>& raw,
                                  std::optional<std::vector<std::size_t>> positive,
                                  std::size_t weyl_cap) {
  RootSystem rs;
  rs.dimension_ = checked_dimension(raw);
  rs.roots_ = normalize_roots(raw);

  rs.negative_.resize(rs.roots_.size());
  for (std::size_t i = 0; i < rs.roots_.size(); ++i) {
    auto neg = find_vector(rs.roots_, -rs.roots_[i], kRootTolerance);
    if (!neg) {
      throw Error(ErrorKind::invalid_argument, "root set is not symmetric under α ↦ −α");
    }
    rs.negative_[i] = *neg;
  }

  if (positive) {
    rs.positive_ = std::move(*positive);
  } else {
    for (int attempt = 0;; ++attempt) {
      try {
        rs.positive_ = positive_subsystem(rs.roots_, canonical_direction(rs.dimension_, attempt));
        break;
      } catch (const Error&) {
        if (attempt >= 8) throw;
      }
    }
  }
  rs.finish(weyl_cap);
  return rs;
}

void RootSystem::finish(std::size_t weyl_cap) {
  positive_matrix_.resize(static_cast<Eigen::Index>(dimension_),
                          static_cast<Eigen::Index>(positive_.size()));
  for (std::size_t i = 0; i < positive_.size(); ++i) {
    if (positive_[i] >= roots_.size()) {
      throw Error(ErrorKind::invalid_argument, "positive root index out of range");
    }
    positive_matrix_.col(static_cast<Eigen::Index>(i)) = roots_[positive_[i]];
  }
  weyl_ = generate_weyl_group(roots_, weyl_cap);
  orbits_ = orbit_decomposition(roots_);
  orbit_of_.assign(roots_.size(), 0);
  for (std::size_t o = 0; o < orbits_.size(); ++o) {
    for (auto r : orbits_[o]) orbit_of_[r] = o;
  }
  validate_root_system(*this);
}

std::optional<std::size_t> RootSystem::find_root(const Vector& v, double tol) const {
  return find_vector(roots_, v, tol);
}

std::optional<std::size_t> RootSystem::positive_position(const Vector& v, double tol) const {
  for (std::size_t i = 0; i < positive_.size(); ++i) {
    const auto& a = roots_[positive_[i]];
    if ((a - v).cwiseAbs().maxCoeff() <= tol || (a + v).cwiseAbs().maxCoeff() <= tol) return i;
  }
  return std::nullopt;
}

RootSystem RootSystem::with_enumeration(const std::vector<std::size_t>& enumeration) const {
  auto sorted_new = enumeration;
  auto sorted_old = positive_;
  std::sort(sorted_new.begin(), sorted_new.end());
  std::sort(sorted_old.begin(), sorted_old.end());
  if (sorted_new != sorted_old) {
    throw Error(ErrorKind::invalid_argument,
                "enumeration must be a permutation of the positive subsystem");
  }
  RootSystem out = *this;
  out.positive_ = enumeration;
  for (std::size_t i = 0; i < enumeration.size(); ++i) {
    out.positive_matrix_.col(static_cast<Eigen::Index>(i)) = roots_[enumeration[i]];
  }
  return out;
}

RootSystem RootSystem::transformed(const Matrix& theta) const {
  const auto n = static_cast<Eigen::Index>(dimension_);
  if (theta.rows() != n || theta.cols() != n) {
    throw Error(ErrorKind::dimension_mismatch, "transform has the wrong shape");
  }
  if (((theta.transpose() * theta) - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::invalid_argument, "transform is not orthogonal");
  }
  RootSystem out = *this;
  for (auto& r : out.roots_) r = theta * r;
  out.positive_matrix_ = theta * positive_matrix_;
  for (auto& w : out.weyl_) w = theta * w * theta.transpose();
  return out;
}

// ---------------------------------------------------------------------------

RootSystem build_type_a(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "type A requires n >= 2");
  std::vector<Vector> pos;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vector v = Vector::Zero(n);
      v[i] = 1.0;
      v[j] = -1.0;
      pos.push_back(v);
    }
  }
  std::vector<Vector> all = pos;
  for (const auto& v : pos) all.push_back(-v);
  return RootSystem::from_roots(all);
}

RootSystem build_type_b(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "type B requires n >= 2");
  std::vector<Vector> pos;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vector v = Vector::Zero(n);
      v[i] = 1.0;
      v[j] = -1.0;
      pos.push_back(v);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vector v = Vector::Zero(n);
      v[i] = 1.0;
      v[j] = 1.0;
      pos.push_back(v);
    }
  }
  for (int i = 0; i < n; ++i) {
    Vector v = Vector::Zero(n);
    v[i] = std::sqrt(2.0);
    pos.push_back(v);
  }
  std::vector<Vector> all = pos;
  for (const auto& v : pos) all.push_back(-v);
  return RootSystem::from_roots(all);
}

RootSystem build_rank_one() {
  Vector a(1);
  a[0] = std::sqrt(2.0);
  return RootSystem::from_roots({a, Vector(-a)});
}

void validate_root_system(const RootSystem& system) {
  const auto& roots = system.roots();
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_argument, msg); };

  for (const auto& a : roots) {
    if (std::abs(a.squaredNorm() - 2.0) > 1e-12) fail("root is not normalized to α·α = 2");
  }
  // R ∩ ℝα = {±α}
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (i == j) continue;
      const double d = roots[i].dot(roots[j]);
      if (std::abs(std::abs(d) - 2.0) <= 1e-9) {
        if ((roots[i] + roots[j]).cwiseAbs().maxCoeff() > kRootTolerance) {
          fail("root system contains duplicate or non-reduced roots");
        }
      }
    }
  }
  // σ_α(R) = R
  for (const auto& a : roots) {
    for (const auto& b : roots) {
      if (!system.find_root(reflect(a, b))) fail("root set is not closed under reflections");
    }
  }
  // exactly one of ±α in R_+, and R_+ cut out by a direction
  std::vector<int> count(roots.size(), 0);
  for (auto p : system.positive()) {
    count[p]++;
    count[system.negative_of(p)]++;
  }
  for (auto c : count) {
    if (c != 1) fail("positive subsystem must contain exactly one of ±α for every root");
  }
  Vector rho = Vector::Zero(static_cast<Eigen::Index>(system.dimension()));
  for (auto p : system.positive()) rho += roots[p];
  for (auto p : system.positive()) {
    if (!(roots[p].dot(rho) > 1e-12)) fail("positive subsystem is not cut out by any direction");
  }
  // W: orthogonal, permutes R
  const auto n = static_cast<Eigen::Index>(system.dimension());
  for (const auto& w : system.weyl_group()) {
    if (((w.transpose() * w) - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) {
      fail("Weyl group element is not orthogonal");
    }
    for (const auto& a : roots) {
      if (!system.find_root(w * a)) fail("Weyl group element does not preserve R");
    }
  }
}

ChamberMembership chamber_contains(const RootSystem& system, const Vector& x, double tol) {
  if (static_cast<std::size_t>(x.size()) != system.dimension()) {
    throw Error(ErrorKind::dimension_mismatch, "point has the wrong dimension");
  }
  const Vector dots = system.positive_matrix().transpose() * x;
  if (dots.size() == 0) return ChamberMembership::interior;
  const double lo = dots.minCoeff();
  if (lo < -tol) return ChamberMembership::exterior;
  if (lo <= tol) return ChamberMembership::boundary;
  return ChamberMembership::interior;
}

ChamberProjection project_to_chamber(const RootSystem& system, const Vector& x, double tol) {
  const auto& w = system.weyl_group();
  std::size_t best = 0;
  double best_min = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    Vector y = w[i] * x;
    const Vector dots = system.positive_matrix().transpose() * y;
    const double lo = dots.size() ? dots.minCoeff() : 0.0;
    if (lo >= -tol) return {std::move(y), i};
    if (lo > best_min) {
      best_min = lo;
      best = i;
    }
  }
  return {w[best] * x, best};
}

bool check_invariance_condition(const RootSystem& system, std::size_t i) {
  const std::size_t m = system.positive_count();
  if (i < 1 || i > m) {
    throw Error(ErrorKind::index_out_of_range, "invariance index must lie in 1..m");
  }
  std::vector<Vector> lower;
  for (std::size_t j = 0; j + 1 < i; ++j) {
    lower.push_back(system.positive_root(j));
    lower.push_back(-system.positive_root(j));
  }
  const Vector& a = system.positive_root(i - 1);
  for (const auto& b : lower) {
    if (!find_vector(lower, reflect(a, b), kRootTolerance)) return false;
  }
  return true;
}

}  // namespace dunkl
