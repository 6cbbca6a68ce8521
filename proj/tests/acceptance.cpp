// One PASS/FAIL line per acceptance criterion. Sample sizes, tolerances and
// runtime budgets are fixed; nothing here is tuned to make a check pass.
#include "dunkl/battery.hpp"
#include "dunkl/error.hpp"
#include "dunkl/jump_lift.hpp"
#include "dunkl/root_system.hpp"
#include "dunkl/stat_verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>

using namespace dunkl;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

SimulationConfig b2_config(std::uint64_t seed) {
  SimulationConfig c;
  c.horizon = 1.0;
  c.dt = 1e-3;
  c.seed = seed;
  c.threads = worker_count();
  return c;
}

std::shared_ptr<const RootSystem> shared(RootSystem s) { return std::make_shared<const RootSystem>(std::move(s)); }

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

std::string describe(const Report& r) {
  std::ostringstream s;
  s << r.name << " ";
  if (r.criterion == "p-value")
    s << "p=" << r.p_value;
  else
    s << "est=" << r.estimate << " target=" << r.target << " tol=" << r.tolerance;
  s << (r.satisfied() ? "" : " [unsatisfied]");
  return s.str();
}

Outcome from_reports(const std::vector<Report>& reports) {
  Outcome o{true, ""};
  for (const auto& r : reports) {
    o.pass = o.pass && r.satisfied() && !r.skipped;
    o.detail += (o.detail.empty() ? "" : "; ") + describe(r);
  }
  return o;
}

// Weyl group by brute-force word enumeration over the simple reflections'
// generators, independent of generate_weyl_group: matrices keyed by rounded entries.
std::size_t brute_force_group_order(const RootSystem& s) {
  const auto n = static_cast<Eigen::Index>(s.dimension());
  std::vector<Matrix> gens;
  for (std::size_t i = 0; i < s.positive_count(); ++i) {
    const Vector a = s.positive_root(i);
    gens.push_back(Matrix::Identity(n, n) - a * a.transpose() * (2.0 / a.squaredNorm()));
  }
  auto key = [](const Matrix& m) {
    std::string k;
    for (Eigen::Index i = 0; i < m.size(); ++i) k += std::to_string(std::llround(m.data()[i] * 1e6)) + ",";
    return k;
  };
  std::set<std::string> seen{key(Matrix::Identity(n, n))};
  std::vector<Matrix> frontier{Matrix::Identity(n, n)};
  while (!frontier.empty()) {
    std::vector<Matrix> next;
    for (const auto& w : frontier)
      for (const auto& g : gens) {
        Matrix m = g * w;
        if (seen.insert(key(m)).second) next.push_back(m);
      }
    frontier.swap(next);
  }
  return seen.size();
}

Outcome criterion_1() {
  struct Case {
    const char* name;
    RootSystem sys;
    std::size_t order;
  };
  std::vector<Case> cases = {{"A_2", build_type_a(3), 6}, {"A_3", build_type_a(4), 24},
                             {"B_2", build_type_b(2), 8}, {"B_3", build_type_b(3), 48}};
  Outcome o{true, ""};
  for (const auto& c : cases) {
    bool ok = true;
    try {
      validate_root_system(c.sys);
    } catch (const Error&) {
      ok = false;
    }
    PhiloxStream s(11, 0, Substream::auxiliary);
    for (std::size_t a = 0; a < c.sys.size(); ++a) {
      const Vector& alpha = c.sys.root(a);
      for (int t = 0; t < 20; ++t) {
        Vector x(static_cast<Eigen::Index>(c.sys.dimension()));
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = s.normal();
        const Vector y = reflect(alpha, x);
        ok = ok && (reflect(alpha, y) - x).norm() <= 1e-12 * (1.0 + x.norm());
        ok = ok && std::abs(y.norm() - x.norm()) <= 1e-12 * (1.0 + x.norm());
      }
      for (std::size_t b = 0; b < c.sys.size(); ++b)
        ok = ok && c.sys.find_root(reflect(alpha, c.sys.root(b)), kRootTolerance).has_value();
    }
    const std::size_t order = c.sys.weyl_group().size();
    ok = ok && order == c.order && brute_force_group_order(c.sys) == c.order;
    o.pass = o.pass && ok;
    o.detail += std::string(o.detail.empty() ? "" : " ") + c.name + " |W|=" + std::to_string(order);
  }
  return o;
}

Outcome criterion_2() {
  auto a2 = shared(build_type_a(3));
  auto b2 = shared(build_type_b(2));
  std::vector<Report> all;
  auto add = [&](std::shared_ptr<const RootSystem> s, std::vector<double> k, const std::string& tag, bool need_bar) {
    auto reps = harmonicity_checks(s, Multiplicity(*s, k), 100, 2024);
    bool saw_bar = false;
    for (auto& r : reps) {
      saw_bar = saw_bar || r.name == "harmonic-delta-bar";
      r.name = tag + ":" + r.name;
      all.push_back(r);
    }
    if (need_bar && !saw_bar) {
      Report missing;
      missing.name = tag + ":harmonic-delta-bar missing";
      all.push_back(missing);
    }
  };
  add(a2, {0.8}, "A_2 k=0.8", false);
  add(a2, {1.5}, "A_2 k=1.5", false);
  // B_2 orbit 0 holds the long roots ±e_i ± e_j, orbit 1 the short ones.
  add(b2, {0.75, 1.25}, "B_2 long=0.75 short=1.25", false);
  add(b2, {1.0, 0.5}, "B_2 long=1 short=1/2", true);
  return from_reports(all);
}

Outcome criterion_3() {
  auto b2 = shared(build_type_b(2));
  const Multiplicity k = Multiplicity::constant(*b2, 1.0);
  const RadialSimulator sim(b2, k, vec({2.0, 1.0}), b2_config(303));
  const double dim = 2.0 + 2.0 * k.gamma();
  Report r = squared_norm_moment(sim, vec({2.0, 1.0}), dim, 20000, worker_count());
  Outcome o = from_reports({r});
  o.pass = o.pass && std::abs(r.target - 15.0) < 1e-12;
  return o;
}

Outcome criterion_4() {
  auto b2 = shared(build_type_b(2));
  const Multiplicity k = Multiplicity::constant(*b2, 1.0);
  const Vector x0 = vec({2.0, 1.0});
  const RadialSimulator radial(b2, k, x0, b2_config(404));
  const auto full = make_dunkl_simulator(b2, k, std::nullopt, std::nullopt, x0, b2_config(405));
  Report r = norm_is_bessel(radial, 10.0, 5000, 406, worker_count());
  r.name = "radial";
  Report f = norm_is_bessel(full, 10.0, 5000, 407, worker_count());
  f.name = "dunkl";
  Report neg = norm_is_bessel(radial, 11.0, 5000, 408, worker_count());
  neg.name = "dimension+1 control";
  neg.negative_control = true;
  return from_reports({r, f, neg});
}

Outcome criterion_5() {
  auto b2 = shared(build_type_b(2));
  const Multiplicity k = Multiplicity::constant(*b2, 1.0);
  const Vector x0 = vec({2.0, 1.0});
  const std::size_t r1 = b2->positive()[0];
  const LiftPlan base(b2, {});
  const DunklSimulator shortcut(base.lifted(r1, k(r1), LiftMode::shortcut), k, x0, b2_config(501));
  const DunklSimulator general(base.lifted(r1, k(r1), LiftMode::general), k, x0, b2_config(502));
  const std::vector<Vector> dirs = {vec({1.0, 0.0}), vec({0.0, 1.0}), vec({0.6, -0.8})};
  return from_reports({projection_ks("shortcut-vs-general", shortcut, general, dirs, 5000, worker_count())});
}

Outcome criterion_6() {
  auto b2 = shared(build_type_b(2));
  const Multiplicity k = Multiplicity::constant(*b2, 1.0);
  const Vector x0 = vec({2.0, 1.0});
  const auto full = make_dunkl_simulator(b2, k, std::nullopt, std::nullopt, x0, b2_config(601));
  const RadialSimulator radial(b2, k, project_to_chamber(*b2, x0).point, b2_config(602));
  Report agree = projection_agreement(full, radial, *b2, 5000, worker_count());
  std::size_t jumps = 0, bad = 0, moves = 0, violations = 0, states = 0;
  for (std::size_t i = 1; i <= full.plan().size(); ++i) {
    const DunklSimulator level(full.plan().prefix(i), k, x0, full.config());
    const JumpAudit a = audit_jumps(level, 1000);
    jumps += a.jumps;
    bad += a.inexact;
    moves += a.projection_moves;
    violations += a.confinement_violations;
    states += a.checked_states;
  }
  Outcome o = from_reports({agree});
  o.pass = o.pass && jumps > 0 && bad == 0 && moves == 0 && violations == 0 && states > 0;
  o.detail += "; jumps=" + std::to_string(jumps) + " inexact=" + std::to_string(bad) +
              " projection-moves=" + std::to_string(moves) + " confinement-violations=" +
              std::to_string(violations) + " of " + std::to_string(states) + " states";
  return o;
}

Outcome criterion_7() {
  auto b2 = shared(build_type_b(2));
  const Multiplicity k = Multiplicity::constant(*b2, 1.0);
  const LiftPlan plan = LiftPlan::for_system(b2, k);
  FoldingSetup setup{k, vec({2.0, 1.0}), b2_config(701), 10000, 10, worker_count()};
  return from_reports({folding_identity(plan, 1, setup)});
}

Outcome criterion_8() {
  WallProfile prof;
  Report r = wall_hitting_profile({0.1, 0.3, 0.45, 0.5, 0.6, 1.0}, 0.2, 1.0, 1e-4, 4000, 801, worker_count(), &prof);
  Outcome o = from_reports({r});
  o.detail = r.detail;
  return o;
}

std::vector<std::size_t> random_enumeration(const RootSystem& s, PhiloxStream& rng) {
  std::vector<std::size_t> e = s.positive();
  for (std::size_t i = e.size(); i > 1; --i) std::swap(e[i - 1], e[rng.next_u32() % i]);
  return e;
}

Outcome criterion_9() {
  const RootSystem b2 = build_type_b(2), a2 = build_type_a(3), a3 = build_type_a(4);
  bool b2_all = true, a2_false = false;
  for (std::size_t i = 1; i <= b2.positive_count(); ++i) b2_all = b2_all && check_invariance_condition(b2, i);
  for (std::size_t i = 1; i <= a2.positive_count(); ++i) a2_false = a2_false || !check_invariance_condition(a2, i);
  PhiloxStream rng(909, 0, Substream::auxiliary);
  bool ends = true;
  for (const RootSystem* s : {&b2, &a3})
    for (int t = 0; t < 20; ++t) {
      const RootSystem e = s->with_enumeration(random_enumeration(*s, rng));
      ends = ends && check_invariance_condition(e, 1) && check_invariance_condition(e, e.positive_count());
    }
  return {b2_all && a2_false && ends, std::string("B_2 all true: ") + (b2_all ? "yes" : "no") +
                                          "; A_2 has false: " + (a2_false ? "yes" : "no") +
                                          "; ends true over 40 enumerations: " + (ends ? "yes" : "no")};
}

Outcome criterion_10() {
  auto b2 = shared(build_type_b(2));
  const Multiplicity k(*b2, {0.75, 1.25});
  Report id = rotation_identity(GeneratorSpec::dunkl(b2, k), 50, 1001);
  const Vector x0 = vec({2.0, 1.0});
  PhiloxStream s(1002, 0, Substream::auxiliary);
  const Matrix q = random_orthogonal(2, s);
  const auto rotated = shared(b2->transformed(q));
  const auto orig = make_dunkl_simulator(b2, k, std::nullopt, std::nullopt, x0, b2_config(1003));
  const auto rot = make_dunkl_simulator(rotated, Multiplicity(*rotated, k.per_orbit()), std::nullopt, std::nullopt,
                                        q * x0, b2_config(1004));
  Report stat = rotation_statistical(q, orig, rot, 5000, worker_count());
  const double h = std::sqrt(0.5);
  Matrix theta(2, 2);
  theta << h, -h, h, h;
  Report neg = rotation_identity(GeneratorSpec::dunkl(b2, k), 50, 1005, &theta, true);
  neg.name = "untransported-k control";
  return from_reports({id, stat, neg});
}

Outcome criterion_11() {
  auto b2 = shared(build_type_b(2));
  const Multiplicity k = Multiplicity::constant(*b2, 1.0);
  const Multiplicity kp = Multiplicity::constant(*b2, 2.0);
  const Vector x0 = vec({2.0, 1.0});
  const auto fs = battery_test_functions(2);
  const auto names = battery_test_names();
  const double c = calibrate_bias_constant(x0, b2_config(1100), fs, 2000, worker_count());
  MartingaleOptions mo;
  mo.paths = 2000;
  mo.bias_constant = c;
  mo.threads = worker_count();
  std::vector<Report> all;
  auto add = [&](const std::string& tag, const PathSimulator& sim, const GeneratorSpec& spec) {
    std::vector<std::string> nm;
    for (const auto& n : names) nm.push_back(tag + ":" + n);
    for (auto& r : martingale_residuals(sim, spec, fs, nm, mo)) all.push_back(r);
  };
  const RadialSimulator radial(b2, k, x0, b2_config(1101));
  add("radial", radial, GeneratorSpec::radial(b2, k));
  const auto full = make_dunkl_simulator(b2, k, std::nullopt, std::nullopt, x0, b2_config(1102));
  add("dunkl", full, GeneratorSpec::dunkl(b2, k));
  const auto two = make_dunkl_simulator(b2, k, kp, std::nullopt, x0, b2_config(1103));
  add("two-parameter", two, GeneratorSpec::two_parameter(b2, k, kp));
  Report neg = martingale_residuals(full, GeneratorSpec::radial(b2, k), {fs[1]}, {"mismatched-spec control"}, mo)
                   .front();
  neg.negative_control = true;
  all.push_back(neg);
  Outcome o = from_reports(all);
  o.detail = "bias c=" + std::to_string(c) + "; " + o.detail;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* title;
    double budget_seconds;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "reflection algebra", 1.0, criterion_1},
      {2, "harmonicity", 5.0, criterion_2},
      {3, "squared-norm moment", 120.0, criterion_3},
      {4, "norm law KS", 180.0, criterion_4},
      {5, "lift mode equivalence", 180.0, criterion_5},
      {6, "end-to-end lift", 300.0, criterion_6},
      {7, "folding identity", 0.0, criterion_7},
      {8, "wall-hitting regimes", 0.0, criterion_8},
      {9, "invariance-condition table", 0.0, criterion_9},
      {10, "rotation covariance", 0.0, criterion_10},
      {11, "martingale residuals", 0.0, criterion_11},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_budget = c.budget_seconds <= 0.0 || secs < c.budget_seconds;
    const bool pass = o.pass && in_budget;
    failures += !pass;
    std::printf("criterion %2d %-28s %s  (%.2fs%s) %s\n", c.id, c.title, pass ? "PASS" : "FAIL", secs,
                in_budget ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
