#include "dunkl/error.hpp"
#include "dunkl/multiplicity.hpp"
#include "dunkl/root_system.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace dunkl;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

// Group closure over point images of a generic vector: w is determined by w·g
// for a generic g, so the orbit size of g equals |W|.
std::size_t orbit_size_of_generic(const RootSystem& s) {
  Vector g(static_cast<Eigen::Index>(s.dimension()));
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = 1.0 + 0.37 * static_cast<double>(i * i) + 0.011 * i;
  std::vector<Vector> seen{g};
  for (std::size_t head = 0; head < seen.size(); ++head) {
    for (std::size_t r = 0; r < s.size(); ++r) {
      const Vector a = s.root(r);
      const Vector y = seen[head] - (2.0 * a.dot(seen[head]) / a.squaredNorm()) * a;
      bool known = false;
      for (const auto& z : seen) known = known || (z - y).norm() < 1e-9;
      if (!known) seen.push_back(y);
    }
  }
  return seen.size();
}

bool contains(const std::vector<Vector>& set, const Vector& v) {
  for (const auto& x : set)
    if ((x - v).norm() < 1e-9) return true;
  return false;
}

// Invariance condition straight from its definition.
bool invariance_oracle(const RootSystem& s, std::size_t i) {
  std::vector<Vector> prev;
  for (std::size_t j = 0; j + 1 < i; ++j) {
    prev.push_back(s.positive_root(j));
    prev.push_back(-s.positive_root(j));
  }
  const Vector a = s.positive_root(i - 1);
  for (const auto& b : prev)
    if (!contains(prev, b - a.dot(b) * a)) return false;
  return true;
}

}  // namespace

TEST_CASE("classical systems have the expected sizes and group orders") {
  struct Case {
    RootSystem s;
    std::size_t roots, order, orbits;
  };
  const std::vector<Case> cases = {
      {build_rank_one(), 2, 2, 1},    {build_type_a(2), 2, 2, 1},     {build_type_a(3), 6, 6, 1},
      {build_type_a(4), 12, 24, 1},   {build_type_a(5), 20, 120, 1},  {build_type_b(2), 8, 8, 2},
      {build_type_b(3), 18, 48, 2},   {build_type_b(4), 32, 384, 2},
  };
  for (const auto& c : cases) {
    CHECK(c.s.size() == c.roots);
    CHECK(c.s.positive_count() * 2 == c.roots);
    CHECK(c.s.weyl_group().size() == c.order);
    CHECK(orbit_size_of_generic(c.s) == c.order);
    CHECK(c.s.orbits().size() == c.orbits);
    CHECK_NOTHROW(validate_root_system(c.s));
  }
}

TEST_CASE("roots are normalized to squared length 2") {
  for (const auto& s : {build_type_a(4), build_type_b(3), build_rank_one()})
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.root(i).squaredNorm() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("B_2 positive enumeration and orbits") {
  const RootSystem b2 = build_type_b(2);
  const double r2 = std::sqrt(2.0);
  CHECK((b2.positive_root(0) - v2(1, -1)).norm() < 1e-15);
  CHECK((b2.positive_root(1) - v2(1, 1)).norm() < 1e-15);
  CHECK((b2.positive_root(2) - v2(r2, 0)).norm() < 1e-15);
  CHECK((b2.positive_root(3) - v2(0, r2)).norm() < 1e-15);
  CHECK(b2.orbit_of(b2.positive()[0]) == b2.orbit_of(b2.positive()[1]));
  CHECK(b2.orbit_of(b2.positive()[2]) == b2.orbit_of(b2.positive()[3]));
  CHECK(b2.orbit_of(b2.positive()[0]) != b2.orbit_of(b2.positive()[2]));
}

TEST_CASE("property: reflections are isometric involutions permuting R") {
  std::mt19937_64 g(1);
  for (const auto& s : {build_type_a(3), build_type_a(4), build_type_b(2), build_type_b(3)}) {
    for (std::size_t a = 0; a < s.size(); ++a) {
      const Vector& alpha = s.root(a);
      const Matrix m = reflection_matrix(alpha);
      CHECK(m.determinant() == doctest::Approx(-1.0));
      CHECK((m - m.transpose()).norm() < 1e-15);
      CHECK((reflect(alpha, alpha) + alpha).norm() < 1e-15);
      for (int t = 0; t < 25; ++t) {
        const Vector x = gen::gaussian(g, s.dimension(), 3.0);
        const Vector y = reflect(alpha, x);
        CHECK((reflect(alpha, y) - x).norm() <= 1e-13 * (1 + x.norm()));
        CHECK(std::abs(y.norm() - x.norm()) <= 1e-13 * (1 + x.norm()));
        CHECK((m * x - y).norm() <= 1e-13 * (1 + x.norm()));
      }
      std::set<std::size_t> image;
      for (std::size_t b = 0; b < s.size(); ++b) {
        const auto idx = s.find_root(reflect(alpha, s.root(b)), kRootTolerance);
        REQUIRE(idx.has_value());
        image.insert(*idx);
      }
      CHECK(image.size() == s.size());
    }
  }
}

TEST_CASE("Weyl group: identity first, closed under products, elements orthogonal") {
  const RootSystem s = build_type_b(3);
  const auto& w = s.weyl_group();
  const auto n = static_cast<Eigen::Index>(s.dimension());
  CHECK((w.front() - Matrix::Identity(n, n)).norm() < 1e-15);
  std::mt19937_64 g(2);
  std::uniform_int_distribution<std::size_t> pick(0, w.size() - 1);
  for (int t = 0; t < 200; ++t) {
    const Matrix p = w[pick(g)] * w[pick(g)];
    bool found = false;
    for (const auto& m : w) found = found || (m - p).norm() < 1e-9;
    CHECK(found);
  }
  for (const auto& m : w) CHECK((m * m.transpose() - Matrix::Identity(n, n)).norm() < 1e-12);
}

TEST_CASE("chamber membership and projection") {
  const RootSystem b2 = build_type_b(2);
  CHECK(chamber_contains(b2, v2(2, 1)) == ChamberMembership::interior);
  CHECK(chamber_contains(b2, v2(1, 1)) == ChamberMembership::boundary);
  CHECK(chamber_contains(b2, v2(-2, 1)) == ChamberMembership::exterior);
  std::mt19937_64 g(3);
  for (const auto& s : {build_type_a(3), build_type_a(4), build_type_b(2), build_type_b(3)}) {
    for (int t = 0; t < 100; ++t) {
      const Vector x = gen::gaussian(g, s.dimension(), 2.0);
      const auto p = project_to_chamber(s, x);
      CHECK(chamber_contains(s, p.point) != ChamberMembership::exterior);
      CHECK((s.weyl_group()[p.element] * x - p.point).norm() <= 1e-12 * (1 + x.norm()));
      // invariant under W: projecting any w·x gives the same point
      const Matrix& w = s.weyl_group()[static_cast<std::size_t>(t) % s.weyl_group().size()];
      CHECK((project_to_chamber(s, w * x).point - p.point).norm() <= 1e-12 * (1 + x.norm()));
    }
  }
  // interior points project to themselves via the identity
  const auto p = project_to_chamber(b2, v2(2, 1));
  CHECK(p.element == 0);
}

TEST_CASE("invariance condition matches its definition for every enumeration") {
  for (const auto& base : {build_type_b(2), build_type_a(3)}) {
    std::vector<std::size_t> e = base.positive();
    std::sort(e.begin(), e.end());
    do {
      const RootSystem s = base.with_enumeration(e);
      for (std::size_t i = 1; i <= s.positive_count(); ++i)
        CHECK(check_invariance_condition(s, i) == invariance_oracle(s, i));
      CHECK(check_invariance_condition(s, 1));
    } while (std::next_permutation(e.begin(), e.end()));
  }
  std::mt19937_64 g(4);
  const RootSystem a3 = build_type_a(4);
  for (int t = 0; t < 20; ++t) {
    const RootSystem s = a3.with_enumeration(gen::shuffled(g, a3.positive()));
    for (std::size_t i = 1; i <= s.positive_count(); ++i)
      CHECK(check_invariance_condition(s, i) == invariance_oracle(s, i));
    CHECK(check_invariance_condition(s, s.positive_count()));
  }
}

TEST_CASE("default enumerations: B_2 all true, A_2 has a false entry") {
  const RootSystem b2 = build_type_b(2), a2 = build_type_a(3);
  for (std::size_t i = 1; i <= 4; ++i) CHECK(check_invariance_condition(b2, i));
  bool any_false = false;
  for (std::size_t i = 2; i < a2.positive_count(); ++i) any_false = any_false || !check_invariance_condition(a2, i);
  CHECK(any_false);
}

TEST_CASE("custom systems are validated") {
  const double r2 = std::sqrt(2.0);
  // B_2 without e1 - e2 is not closed
  const std::vector<Vector> broken = {v2(1, 1), v2(-1, -1), v2(r2, 0), v2(-r2, 0), v2(0, r2), v2(0, -r2)};
  CHECK_THROWS_AS(RootSystem::from_roots(broken), Error);
  // ±α, ±2α is not reduced
  CHECK_THROWS_AS(RootSystem::from_roots({v2(1, 0), v2(-1, 0), v2(2, 0), v2(-2, 0)}), Error);
  CHECK_THROWS_AS(RootSystem::from_roots({v2(0, 0), v2(1, 0)}), Error);
  // I_2(6) = G_2 directions, rescaled
  std::vector<Vector> g2;
  for (int j = 0; j < 12; ++j) g2.push_back(v2(std::cos(j * M_PI / 6), std::sin(j * M_PI / 6)));
  const RootSystem s = RootSystem::from_roots(g2);
  CHECK(s.weyl_group().size() == 12);
  CHECK(orbit_size_of_generic(s) == 12);
  CHECK(s.orbits().size() == 2);
}

TEST_CASE("Weyl cap is enforced") {
  try {
    (void)generate_weyl_group(build_type_b(3).roots(), 10);
    FAIL("expected cap-exceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cap_exceeded);
  }
}

TEST_CASE("invalid enumerations and indices") {
  const RootSystem b2 = build_type_b(2);
  CHECK_THROWS_AS(b2.with_enumeration({0, 1, 2}), Error);
  CHECK_THROWS_AS(b2.with_enumeration({0, 1, 2, 2}), Error);
  CHECK_THROWS_AS(b2.with_enumeration({0, 1, 2, b2.negative_of(b2.positive()[3])}), Error);
  CHECK_THROWS_AS(check_invariance_condition(b2, 0), Error);
  CHECK_THROWS_AS(check_invariance_condition(b2, 5), Error);
  CHECK_THROWS_AS(build_type_a(1), Error);
  CHECK_THROWS_AS(build_type_b(0), Error);
}

TEST_CASE("transformed systems keep their structure") {
  std::mt19937_64 g(5);
  const RootSystem b2 = build_type_b(2);
  const Matrix q = gen::orthogonal(g, 2);
  const RootSystem r = b2.transformed(q);
  CHECK(r.weyl_group().size() == 8);
  for (std::size_t i = 0; i < b2.size(); ++i) CHECK((r.root(i) - q * b2.root(i)).norm() < 1e-12);
  CHECK(r.positive() == b2.positive());
}

TEST_CASE("multiplicity functions") {
  const RootSystem b2 = build_type_b(2);
  const Multiplicity k(b2, {0.75, 1.25});
  CHECK(k.gamma() == doctest::Approx(4.0));
  CHECK(k.min_value() == doctest::Approx(0.75));
  CHECK_FALSE(k.is_uniform());
  for (std::size_t i = 0; i < b2.size(); ++i) CHECK(k(i) == k(b2.negative_of(i)));
  CHECK(Multiplicity::constant(b2, 1.0).gamma() == doctest::Approx(4.0));
  CHECK_THROWS_AS(Multiplicity(b2, {1.0}), Error);
  CHECK_THROWS_AS(Multiplicity(b2, {1.0, -0.1}), Error);
}
