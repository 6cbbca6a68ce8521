#include "dunkl/battery.hpp"

#include "dunkl/error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dunkl {

namespace {

bool wanted(const BatteryConfig& c, const std::string& group) {
  return c.only.empty() || c.only.count(group) > 0;
}

Vector unit_direction(std::size_t n, double phase) {
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = std::cos(phase + 1.3 * static_cast<double>(i));
  return v.normalized();
}

Report max_residual_report(const std::string& name, const std::vector<double>& rel, double tol) {
  Report r;
  r.name = name;
  r.estimate = 0.0;
  for (double v : rel) r.estimate = std::max(r.estimate, v);
  r.target = 0.0;
  r.tolerance = tol;
  r.sample_size = rel.size();
  r.passed = !rel.empty() && r.estimate <= tol;
  r.detail = "max relative residual";
  return r;
}

Report as_negative(Report r, const std::string& name, const std::string& note) {
  r.name = name;
  r.negative_control = true;
  r.detail = note + (r.detail.empty() ? "" : "; " + r.detail);
  return r;
}

}  // namespace

std::vector<TestFunction> battery_test_functions(std::size_t n) {
  const Vector v = unit_direction(n, 0.3);
  const Vector w = unit_direction(n, 1.1);
  const Vector a = unit_direction(n, 2.0);
  return {
      TestFunction{[](const Vector& x) { return x.squaredNorm(); }},
      TestFunction{[v](const Vector& x) { return x.dot(v); }},
      TestFunction{[w](const Vector& x) { return std::sin(x.dot(w)); }},
      TestFunction{[a](const Vector& x) { return std::exp(-0.25 * (x - a).squaredNorm()); }},
      TestFunction{[v](const Vector& x) { return std::pow(x.dot(v), 2); }},
  };
}

std::vector<std::string> battery_test_names() {
  return {"norm-squared", "linear", "sine", "gaussian-bump", "linear-squared"};
}

std::vector<Vector> sample_chamber_points(const RootSystem& system, std::size_t count, std::uint64_t seed,
                                          double margin) {
  PhiloxStream s(seed, 0, Substream::auxiliary);
  const auto n = static_cast<Eigen::Index>(system.dimension());
  std::vector<Vector> out;
  std::size_t tries = 0;
  while (out.size() < count) {
    if (++tries > 1000 * (count + 10)) throw Error(ErrorKind::invalid_argument, "chamber sampling failed");
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = 2.0 * s.normal();
    x = project_to_chamber(system, x).point;
    const Vector dots = system.positive_matrix().transpose() * x;
    if (dots.minCoeff() >= margin * (1.0 + x.norm())) out.push_back(x);
  }
  return out;
}

std::vector<Report> harmonicity_checks(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                                       std::size_t points, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const auto xs = sample_chamber_points(*system, points, seed);
  std::vector<Report> out;
  auto run = [&](HarmonicTarget which, const std::string& name, double tol) {
    std::vector<double> rel;
    for (const auto& x : xs) rel.push_back(harmonicity_residual(which, system, k, x).relative());
    out.push_back(max_residual_report(name, rel, tol));
  };
  run(HarmonicTarget::delta, "harmonic-delta", 1e-5);
  bool has_half = false;
  for (double v : k.per_orbit()) has_half = has_half || std::abs(v - 0.5) <= 1e-12;
  if (has_half) run(HarmonicTarget::delta_bar, "harmonic-delta-bar", 1e-5);
  run(HarmonicTarget::pi, "laplacian-pi", 1e-6);
  if (k.is_uniform()) run(HarmonicTarget::pi_power_identity, "pi-power-identity", 1e-6);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : out) r.runtime_seconds = elapsed / static_cast<double>(out.size());
  return out;
}

Suite run_standard_battery(const BatteryConfig& c) {
  if (!c.system) throw Error(ErrorKind::invalid_argument, "battery needs a root system");
  Suite suite;
  auto& reps = suite.reports;
  auto sys = c.system;
  if (c.enumeration) sys = std::make_shared<const RootSystem>(sys->with_enumeration(*c.enumeration));
  const Multiplicity k(*sys, c.k);
  std::vector<double> kp_values = c.k_prime.value_or(std::vector<double>{});
  if (!c.k_prime)
    for (double v : c.k) kp_values.push_back(2.0 * v);
  const Multiplicity kp(*sys, kp_values);
  const std::size_t n = sys->dimension();
  const double dim = static_cast<double>(n) + 2.0 * k.gamma();
  const unsigned threads = c.sim.threads;
  const std::uint64_t seed = c.sim.seed;
  auto cfg_with_seed = [&](std::uint64_t salt) {
    SimulationConfig s = c.sim;
    s.seed = derive_seed(seed, salt);
    return s;
  };
  const Vector xr = project_to_chamber(*sys, c.x0).point;
  const bool jump_regime = k.min_value() >= 0.5;

  if (wanted(c, "harmonic")) {
    for (auto& r : harmonicity_checks(sys, k, c.harmonic_points, derive_seed(seed, 10))) reps.push_back(r);
  }

  if (wanted(c, "moment")) {
    const RadialSimulator radial(sys, k, xr, cfg_with_seed(20));
    Report r = squared_norm_moment(radial, xr, dim, c.moment_paths, threads);
    reps.push_back(r);
    Report neg = r;
    neg.target = xr.squaredNorm() + (dim + 1.0) * c.sim.horizon;
    neg.passed = std::abs(neg.estimate - neg.target) <= neg.tolerance;
    reps.push_back(as_negative(neg, "squared-norm-moment-negative-control", "dimension off by one"));
  }

  if (wanted(c, "bessel")) {
    const RadialSimulator radial(sys, k, xr, cfg_with_seed(30));
    Report r = norm_is_bessel(radial, dim, c.ks_paths, derive_seed(seed, 31), threads);
    r.name = "norm-is-bessel-radial";
    reps.push_back(r);
    if (jump_regime) {
      const auto full = make_dunkl_simulator(sys, k, std::nullopt, std::nullopt, c.x0, cfg_with_seed(32));
      Report f = norm_is_bessel(full, dim, c.ks_paths, derive_seed(seed, 33), threads);
      f.name = "norm-is-bessel-dunkl";
      reps.push_back(f);
    }
    Report neg = norm_is_bessel(radial, dim + 1.0, c.ks_paths, derive_seed(seed, 34), threads);
    reps.push_back(as_negative(neg, "norm-is-bessel-negative-control", "oracle dimension off by one"));
  }

  if (wanted(c, "modes") && jump_regime) {
    const std::size_t r1 = sys->positive()[0];
    const LiftPlan base(sys, {});
    const DunklSimulator shortcut(base.lifted(r1, k(r1), LiftMode::shortcut), k, c.x0, cfg_with_seed(40));
    const DunklSimulator general(base.lifted(r1, k(r1), LiftMode::general), k, c.x0, cfg_with_seed(41));
    const DunklSimulator silent(base.lifted(r1, 0.0, LiftMode::general), k, c.x0, cfg_with_seed(42));
    const std::vector<Vector> dirs = {unit_direction(n, 0.2), unit_direction(n, 1.7), unit_direction(n, 2.9)};
    reps.push_back(projection_ks("mode-equivalence", shortcut, general, dirs, c.ks_paths, threads));
    Report neg = projection_ks("mode-equivalence", shortcut, silent, dirs, c.ks_paths, threads);
    reps.push_back(as_negative(neg, "mode-equivalence-negative-control", "general lift with zero rate"));
  }

  if (wanted(c, "projection") && jump_regime) {
    const auto full = make_dunkl_simulator(sys, k, std::nullopt, std::nullopt, c.x0, cfg_with_seed(50));
    const RadialSimulator radial(sys, k, xr, cfg_with_seed(51));
    reps.push_back(projection_agreement(full, radial, *sys, c.ks_paths, threads));
    std::vector<double> shifted = c.k;
    for (double& v : shifted) v += 0.5;
    const RadialSimulator wrong(sys, Multiplicity(*sys, shifted), xr, cfg_with_seed(52));
    Report neg = projection_agreement(full, wrong, *sys, c.ks_paths, threads);
    reps.push_back(as_negative(neg, "projection-agreement-negative-control", "radial multiplicity k + 1/2"));
  }

  if (wanted(c, "jumps") && jump_regime) {
    const auto start = std::chrono::steady_clock::now();
    const auto full = make_dunkl_simulator(sys, k, std::nullopt, std::nullopt, c.x0, cfg_with_seed(60));
    bool all_shortcut = true;
    for (const auto& lv : full.plan().levels()) all_shortcut = all_shortcut && lv.mode == LiftMode::shortcut;
    JumpAudit total;
    for (std::size_t i = 1; i <= full.plan().size(); ++i) {
      const DunklSimulator level(full.plan().prefix(i), k, c.x0, full.config());
      const JumpAudit a = audit_jumps(level, c.audit_paths);
      total.jumps += a.jumps;
      total.inexact += a.inexact;
      total.projection_moves += a.projection_moves;
      total.confinement_violations += a.confinement_violations;
      total.checked_states += a.checked_states;
    }
    Report r;
    r.name = "jump-exactness";
    r.estimate = static_cast<double>(total.inexact + total.projection_moves);
    r.tolerance = 0.0;
    r.sample_size = total.jumps;
    r.passed = total.inexact == 0 && total.projection_moves == 0 && total.jumps > 0;
    r.detail = std::to_string(total.jumps) + " jumps audited";
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    reps.push_back(r);
    Report conf;
    conf.name = "region-confinement";
    conf.estimate = static_cast<double>(total.confinement_violations);
    conf.tolerance = 0.0;
    conf.sample_size = total.checked_states;
    if (all_shortcut) {
      conf.passed = total.confinement_violations == 0;
      conf.detail = std::to_string(total.checked_states) + " states checked against C_i";
    } else {
      conf.skipped = true;
      conf.detail = "plan has general-clock levels; confinement is only asserted for shortcut lifts";
    }
    reps.push_back(conf);
  }

  if (wanted(c, "folding") && jump_regime) {
    const LiftPlan plan = LiftPlan::for_system(sys, k);
    FoldingSetup setup{k, c.x0, cfg_with_seed(70), c.fold_paths, 10, threads};
    Report r;
    try {
      r = folding_identity(plan, 1, setup);
    } catch (const Error& e) {
      r.name = "folding-identity";
      r.skipped = true;
      r.detail = e.what();
    }
    reps.push_back(r);
    // Negative control: P^{j−1}(A) against P^j(A) alone, without the reflected term.
    if (!r.skipped) {
      const DunklSimulator lower(plan.prefix(0), k, c.x0, cfg_with_seed(72));
      const DunklSimulator upper(plan.prefix(1), k, c.x0, cfg_with_seed(73));
      const auto pilot = run_ensemble(lower, 200, threads);
      std::vector<Vector> pts;
      for (const auto& p : pilot) pts.push_back(p.final_state);
      const auto boxes = folding_boxes(plan, 1, pts, 0.25 * std::sqrt(c.sim.horizon), 10);
      const auto lo = run_ensemble(lower, c.fold_paths, threads);
      const auto hi = run_ensemble(upper, c.fold_paths, threads);
      bool pass = true;
      for (const auto& b : boxes) {
        double c1 = 0.0, c2 = 0.0;
        for (const auto& p : lo) c1 += b.contains(p.final_state);
        for (const auto& p : hi) c2 += b.contains(p.final_state);
        const double n1 = static_cast<double>(lo.size()), n2 = static_cast<double>(hi.size());
        const double p1 = c1 / n1, p2 = c2 / n2;
        const double se = std::sqrt(p1 * (1 - p1) / n1 + p2 * (1 - p2) / n2);
        pass = pass && std::abs(p1 - p2) <= 3.0 * se;
      }
      Report nr;
      nr.name = "folding-identity-negative-control";
      nr.negative_control = true;
      nr.passed = pass && !boxes.empty();
      nr.sample_size = c.fold_paths;
      nr.detail = "reflected term omitted";
      reps.push_back(nr);
    }
  }

  if (wanted(c, "walls") && c.wall_paths > 0) {
    reps.push_back(wall_hitting_profile({0.1, 0.3, 0.45, 0.5, 0.6, 1.0}, 0.2, 1.0, c.wall_dt, c.wall_paths,
                                        derive_seed(seed, 80), threads));
  }

  if (wanted(c, "rotation")) {
    const GeneratorSpec spec = jump_regime ? GeneratorSpec::dunkl(sys, k) : GeneratorSpec::radial(sys, k);
    reps.push_back(rotation_identity(spec, c.rotation_trials, derive_seed(seed, 90)));
    // Negative control on B_2 with distinct orbit values under a 45° rotation, which swaps
    // the short and long orbits while fixing R as a set.
    auto b2 = std::make_shared<const RootSystem>(build_type_b(2));
    const GeneratorSpec b2spec = GeneratorSpec::dunkl(b2, Multiplicity(*b2, {1.0, 2.0}));
    const double h = std::sqrt(0.5);
    Matrix theta(2, 2);
    theta << h, -h, h, h;
    reps.push_back(rotation_identity(b2spec, c.rotation_trials, derive_seed(seed, 91), &theta, true));
    if (jump_regime) {
      PhiloxStream s(derive_seed(seed, 92), 0, Substream::auxiliary);
      const Matrix q = random_orthogonal(n, s);
      const auto rotated = std::make_shared<const RootSystem>(sys->transformed(q));
      const auto orig = make_dunkl_simulator(sys, k, std::nullopt, std::nullopt, c.x0, cfg_with_seed(93));
      const auto rot = make_dunkl_simulator(rotated, Multiplicity(*rotated, c.k), std::nullopt, std::nullopt,
                                            q * c.x0, cfg_with_seed(94));
      reps.push_back(rotation_statistical(q, orig, rot, c.ks_paths, threads));
      // Statistical negative control: B_2, 45°, multiplicity left on coordinates.
      const Vector bx0 = (Vector(2) << 2.0, 1.0).finished();
      const auto b2orig = make_dunkl_simulator(b2, Multiplicity(*b2, {1.0, 2.0}), std::nullopt, std::nullopt, bx0,
                                               cfg_with_seed(95));
      const GeneratorSpec wrong = untransported_spec(b2spec, theta);
      const auto b2rot = make_dunkl_simulator(wrong.system_ptr(), wrong.k(), std::nullopt, std::nullopt,
                                              theta * bx0, cfg_with_seed(96));
      Report neg = rotation_statistical(theta, b2orig, b2rot, c.ks_paths, threads);
      reps.push_back(as_negative(neg, "rotation-statistical-negative-control", "B_2 multiplicity not transported"));
    }
  }

  if (wanted(c, "martingale")) {
    const auto fs = battery_test_functions(n);
    const auto names = battery_test_names();
    const double bias_c = calibrate_bias_constant(c.x0, cfg_with_seed(100), fs, c.martingale_paths, threads);
    MartingaleOptions mo;
    mo.paths = c.martingale_paths;
    mo.bias_constant = bias_c;
    mo.threads = threads;
    auto add = [&](const std::string& prefix, const PathSimulator& sim, const GeneratorSpec& spec) {
      std::vector<std::string> nm;
      for (const auto& s : names) nm.push_back("martingale-" + prefix + "-" + s);
      for (auto& r : martingale_residuals(sim, spec, fs, nm, mo)) reps.push_back(r);
    };
    const RadialSimulator radial(sys, k, xr, cfg_with_seed(101));
    add("radial", radial, GeneratorSpec::radial(sys, k));
    if (jump_regime) {
      const auto full = make_dunkl_simulator(sys, k, std::nullopt, std::nullopt, c.x0, cfg_with_seed(102));
      add("dunkl", full, GeneratorSpec::dunkl(sys, k));
      const auto two = make_dunkl_simulator(sys, k, kp, std::nullopt, c.x0, cfg_with_seed(103));
      add("two-parameter", two, GeneratorSpec::two_parameter(sys, k, kp));
      Report neg = martingale_residuals(full, GeneratorSpec::radial(sys, k), {fs[1]}, {"x"}, mo).front();
      reps.push_back(as_negative(neg, "martingale-negative-control", "Dunkl paths against the radial generator"));
    }
  }
  return suite;
}

std::string format_table(const std::vector<Report>& reports) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-44s %-8s %14s %14s %12s %8s\n", "check", "status", "estimate", "tol/p",
                "n", "sec");
  out << line;
  for (const auto& r : reports) {
    const char* status = r.skipped ? "SKIP" : (r.satisfied() ? "ok" : "FAIL");
    const double second = r.criterion == "p-value" ? r.p_value : r.tolerance;
    std::snprintf(line, sizeof line, "%-44s %-8s %14.6g %14.6g %12zu %8.2f\n", r.name.c_str(), status, r.estimate,
                  second, r.sample_size, r.runtime_seconds);
    out << line;
  }
  return out.str();
}

}  // namespace dunkl
