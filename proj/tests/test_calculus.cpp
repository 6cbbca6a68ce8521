#include "dunkl/calculus.hpp"
#include "dunkl/error.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace dunkl;

namespace {

std::shared_ptr<const RootSystem> shared(RootSystem s) { return std::make_shared<const RootSystem>(std::move(s)); }

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

// Central-difference gradient of log ϖ, written out here rather than borrowed.
Vector log_weight_gradient(const RootSystem& s, const Multiplicity& k, const Vector& x) {
  const double h = 1e-6;
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector p = x, m = x;
    p[i] += h;
    m[i] -= h;
    g[i] = (std::log(weight_varpi(s, k, p)) - std::log(weight_varpi(s, k, m))) / (2 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("drift is the gradient of log varpi") {
  std::mt19937_64 g(11);
  for (auto sys : {shared(build_type_a(3)), shared(build_type_b(2)), shared(build_type_b(3))}) {
    const Multiplicity k = sys->orbits().size() == 2 ? Multiplicity(*sys, {0.75, 1.25}) : Multiplicity::constant(*sys, 0.8);
    for (int t = 0; t < 20; ++t) {
      const Vector x = gen::chamber_point(g, *sys);
      CHECK((drift(*sys, k, x) - log_weight_gradient(*sys, k, x)).norm() <= 1e-6 * (1 + drift(*sys, k, x).norm()));
    }
  }
}

TEST_CASE("weights are W-invariant where they should be") {
  std::mt19937_64 g(12);
  const auto b2 = shared(build_type_b(2));
  const Multiplicity k(*b2, {0.75, 1.25});
  for (int t = 0; t < 30; ++t) {
    const Vector y = gen::gaussian(g, 2, 2.0);
    for (const auto& w : b2->weyl_group())
      CHECK(weight_omega(*b2, k, w * y) == doctest::Approx(weight_omega(*b2, k, y)).epsilon(1e-12));
  }
  // π is W-anti-invariant: π(σ_α x) = −π(x)
  const Vector x = v2(2.0, 0.7);
  for (std::size_t r = 0; r < b2->size(); ++r)
    CHECK(pi_product(*b2, reflect(b2->root(r), x)) == doctest::Approx(-pi_product(*b2, x)));
}

TEST_CASE("closed-form generator values") {
  std::mt19937_64 g(13);
  for (auto sys : {shared(build_type_a(3)), shared(build_type_b(2)), shared(build_type_b(3))}) {
    const Multiplicity k = sys->orbits().size() == 2 ? Multiplicity(*sys, {0.75, 1.25}) : Multiplicity::constant(*sys, 1.5);
    const double n = static_cast<double>(sys->dimension());
    const TestFunction norm2{[](const Vector& x) { return x.squaredNorm(); }};
    const TestFunction constant{[](const Vector&) { return 3.0; }};
    for (int t = 0; t < 10; ++t) {
      const Vector x = gen::chamber_point(g, *sys);
      const Vector v = gen::gaussian(g, sys->dimension());
      const TestFunction linear{[v](const Vector& y) { return y.dot(v); }};
      // L ‖x‖² = n + 2γ for the radial and the full generator
      CHECK(apply_generator(GeneratorSpec::radial(sys, k), norm2, x).value ==
            doctest::Approx(n + 2 * k.gamma()).epsilon(1e-8));
      CHECK(apply_generator(GeneratorSpec::dunkl(sys, k), norm2, x).value ==
            doctest::Approx(n + 2 * k.gamma()).epsilon(1e-8));
      CHECK(apply_generator(GeneratorSpec::dunkl(sys, k), constant, x).value == 0.0);
      // linear functions are annihilated by L_k: drift and jump terms cancel exactly
      const auto lin = apply_generator(GeneratorSpec::dunkl(sys, k), linear, x);
      CHECK(std::abs(lin.value) <= 1e-8 * (1 + lin.scale));
      CHECK(lin.jump_term == doctest::Approx(-lin.drift_term).epsilon(1e-8));
      // radial generator on a linear function is the drift · v
      CHECK(apply_generator(GeneratorSpec::radial(sys, k), linear, x).value ==
            doctest::Approx(drift(*sys, k, x).dot(v)).epsilon(1e-8));
    }
  }
}

TEST_CASE("jump term by hand for B_2") {
  const auto b2 = shared(build_type_b(2));
  const Multiplicity k(*b2, {0.75, 1.25});
  const Vector x = v2(2.0, 0.5);
  const TestFunction u{[](const Vector& y) { return std::sin(y[0]) + y[1] * y[1] * y[1]; }};
  double jump = 0.0;
  for (auto p : b2->positive()) {
    const Vector& a = b2->root(p);
    jump += k(p) * (u(reflect(a, x)) - u(x)) / std::pow(a.dot(x), 2);
  }
  const auto gv = apply_generator(GeneratorSpec::dunkl(b2, k), u, x);
  CHECK(gv.jump_term == doctest::Approx(jump).epsilon(1e-12));
  CHECK(gv.diffusion_term == doctest::Approx(0.5 * (-std::sin(2.0) + 6 * 0.5)).epsilon(1e-7));
  // partial generator with one active root and the two-parameter family
  const auto part = apply_generator(GeneratorSpec::partial(b2, k, 1), u, x);
  const Vector& a1 = b2->positive_root(0);
  CHECK(part.jump_term == doctest::Approx(0.75 * (u(reflect(a1, x)) - u(x)) / std::pow(a1.dot(x), 2)).epsilon(1e-12));
  const auto two = apply_generator(GeneratorSpec::two_parameter(b2, k, Multiplicity(*b2, {0.0, 0.0})), u, x);
  CHECK(two.jump_term == 0.0);
  CHECK(two.drift_term == doctest::Approx(gv.drift_term).epsilon(1e-12));
}

TEST_CASE("finite differences recover analytic derivatives") {
  const TestFunction u{[](const Vector& y) { return std::exp(0.3 * y[0]) * std::cos(y[1]) + y[0] * y[1] * y[1]; }};
  const Vector x = v2(0.4, -1.1);
  const auto d = finite_differences(u, x);
  CHECK(d.gradient[0] == doctest::Approx(0.3 * std::exp(0.12) * std::cos(-1.1) + 1.21).epsilon(1e-9));
  CHECK(d.gradient[1] == doctest::Approx(-std::exp(0.12) * std::sin(-1.1) + 2 * 0.4 * -1.1).epsilon(1e-9));
  CHECK(d.second[0] == doctest::Approx(0.09 * std::exp(0.12) * std::cos(-1.1)).epsilon(1e-7));
  CHECK(d.second[1] == doctest::Approx(-std::exp(0.12) * std::cos(-1.1) + 0.8).epsilon(1e-7));
}

TEST_CASE("harmonicity at random chamber points") {
  std::mt19937_64 g(14);
  const auto a2 = shared(build_type_a(3));
  const auto b2 = shared(build_type_b(2));
  for (int t = 0; t < 20; ++t) {
    const Vector xa = gen::chamber_point(g, *a2), xb = gen::chamber_point(g, *b2);
    CHECK(harmonicity_residual(HarmonicTarget::delta, a2, Multiplicity::constant(*a2, 0.8), xa).relative() <= 1e-5);
    CHECK(harmonicity_residual(HarmonicTarget::delta, b2, Multiplicity(*b2, {0.75, 1.25}), xb).relative() <= 1e-5);
    CHECK(harmonicity_residual(HarmonicTarget::delta_bar, b2, Multiplicity(*b2, {1.0, 0.5}), xb).relative() <= 1e-5);
    CHECK(harmonicity_residual(HarmonicTarget::pi, b2, Multiplicity::constant(*b2, 1.0), xb).relative() <= 1e-6);
    CHECK(harmonicity_residual(HarmonicTarget::pi_power_identity, a2, Multiplicity::constant(*a2, 1.5), xa)
              .relative() <= 1e-6);
  }
  // δ is not L_k^W-harmonic for the wrong multiplicity: apply the generator of k to δ of k'.
  const Vector x = v2(2.0, 0.7);
  const Multiplicity k(*b2, {0.75, 1.25}), wrong(*b2, {1.0, 1.0});
  const TestFunction d{[&](const Vector& y) { return delta(*b2, wrong, y); }};
  const auto gv = apply_generator(GeneratorSpec::radial(b2, k), d, x);
  CHECK(std::abs(gv.value) > 1e-3 * gv.scale);
}

TEST_CASE("domain and wall errors") {
  const auto b2 = shared(build_type_b(2));
  const Multiplicity k = Multiplicity::constant(*b2, 1.0);
  const TestFunction u{[](const Vector& y) { return y.squaredNorm(); }};
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io_error;
  };
  CHECK(kind_of([&] { apply_generator(GeneratorSpec::dunkl(b2, k), u, v2(1.0, 1.0)); }) == ErrorKind::wall_contact);
  CHECK(kind_of([&] { drift(*b2, k, v2(1.0, 0.0)); }) == ErrorKind::singular_drift);
  CHECK(kind_of([&] { delta(*b2, Multiplicity::constant(*b2, 0.75), v2(-1.0, 0.5)); }) == ErrorKind::domain_error);
  CHECK(kind_of([&] { delta_bar(*b2, k, v2(2.0, 0.5)); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([&] { checked_power(-1.0, 0.5); }) == ErrorKind::domain_error);
  CHECK(kind_of([&] { drift(*b2, k, Vector::Ones(3)); }) == ErrorKind::dimension_mismatch);
  CHECK(checked_power(-2.0, 3.0) == -8.0);
  CHECK(checked_power(2.0, -2.0) == 0.25);
}

TEST_CASE("property: generator identity under rotations") {
  std::mt19937_64 g(15);
  const auto b2 = shared(build_type_b(2));
  const GeneratorSpec spec = GeneratorSpec::dunkl(b2, Multiplicity(*b2, {0.75, 1.25}));
  for (int t = 0; t < 20; ++t) {
    const Matrix q = gen::orthogonal(g, 2);
    const GeneratorSpec rot = rotate_spec(spec, q);
    const Vector x = gen::chamber_point(g, *b2, 0.1);
    const Vector c = gen::gaussian(g, 2);
    const TestFunction u{[c](const Vector& y) { return std::exp(-0.25 * (y - c).squaredNorm()) + y[0] * y[1]; }};
    const TestFunction uq{[c, q](const Vector& y) {
      const Vector z = q * y;
      return std::exp(-0.25 * (z - c).squaredNorm()) + z[0] * z[1];
    }};
    const auto lhs = apply_generator(rot, u, q * x);
    const auto rhs = apply_generator(spec, uq, x);
    CHECK(std::abs(lhs.value - rhs.value) <= 1e-6 * (1 + rhs.scale));
  }
}
