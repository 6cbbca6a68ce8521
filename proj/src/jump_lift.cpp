#include "dunkl/jump_lift.hpp"

#include "dunkl/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dunkl {

std::string to_string(LiftMode mode) { return mode == LiftMode::shortcut ? "shortcut" : "general"; }

LiftMode lift_mode_from_string(const std::string& name) {
  if (name == "shortcut") return LiftMode::shortcut;
  if (name == "general") return LiftMode::general;
  throw Error(ErrorKind::invalid_argument, "unknown lift mode '" + name + "'");
}

ModeRequest mode_request_from_string(const std::string& name) {
  if (name == "auto") return ModeRequest::automatic;
  if (name == "shortcut") return ModeRequest::shortcut;
  if (name == "general") return ModeRequest::general;
  throw Error(ErrorKind::invalid_argument, "unknown mode '" + name + "' (expected shortcut|general|auto)");
}

std::uint32_t level_substream(Substream kind, std::size_t level) {
  return static_cast<std::uint32_t>(kind) | (static_cast<std::uint32_t>(level) << 8);
}

// ---------------------------------------------------------------- LiftPlan

LiftPlan::LiftPlan(std::shared_ptr<const RootSystem> system, std::vector<LiftLevel> levels)
    : system_(std::move(system)), levels_(std::move(levels)) {
  const auto& pos = system_->positive();
  std::vector<bool> used(system_->size(), false);
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& lv = levels_[i];
    if (std::find(pos.begin(), pos.end(), lv.root) == pos.end())
      throw Error(ErrorKind::invalid_plan, "level " + std::to_string(i + 1) + " is not a positive root");
    if (used[lv.root]) throw Error(ErrorKind::invalid_plan, "root used twice in a lift plan");
    used[lv.root] = true;
    if (!(lv.rate >= 0.0) || !std::isfinite(lv.rate))
      throw Error(ErrorKind::invalid_plan, "jump rates must be finite and nonnegative");
    if (lv.mode == LiftMode::shortcut && !invariance_holds(i, lv.root))
      throw Error(ErrorKind::invalid_plan,
                  "shortcut mode at level " + std::to_string(i + 1) + " needs the invariance condition");
  }
}

bool LiftPlan::invariance_holds(std::size_t position, std::size_t root) const {
  const Vector& a = system_->root(root);
  for (std::size_t j = 0; j < position; ++j) {
    const Vector image = reflect(a, system_->root(levels_[j].root));
    bool found = false;
    for (std::size_t l = 0; l < position && !found; ++l) {
      const Vector& b = system_->root(levels_[l].root);
      found = (image - b).cwiseAbs().maxCoeff() <= kRootTolerance ||
              (image + b).cwiseAbs().maxCoeff() <= kRootTolerance;
    }
    if (!found) return false;
  }
  return true;
}

LiftPlan LiftPlan::for_system(std::shared_ptr<const RootSystem> system, const Multiplicity& jump,
                              ModeRequest request) {
  LiftPlan plan(system, {});
  for (std::size_t i = 0; i < system->positive_count(); ++i) {
    const std::size_t r = system->positive()[i];
    LiftMode mode = LiftMode::general;
    if (request == ModeRequest::shortcut) mode = LiftMode::shortcut;
    if (request == ModeRequest::automatic && plan.invariance_holds(i, r)) mode = LiftMode::shortcut;
    plan = plan.lifted(r, jump(r), mode);
  }
  return plan;
}

LiftPlan LiftPlan::lifted(std::size_t root, double rate, LiftMode mode) const {
  auto levels = levels_;
  levels.push_back({root, rate, mode});
  return LiftPlan(system_, std::move(levels));
}

LiftPlan LiftPlan::prefix(std::size_t count) const {
  if (count > levels_.size()) throw Error(ErrorKind::index_out_of_range, "plan prefix too long");
  return LiftPlan(system_, std::vector<LiftLevel>(levels_.begin(), levels_.begin() + count));
}

// ---------------------------------------------------------------- clocks

double clock_increment(double d0, double d1, double dt, double cap) {
  const double plain = 0.5 * dt * (1.0 / (d0 * d0) + 1.0 / (d1 * d1));
  if (!(plain > cap) || d0 * d1 <= 0.0) return plain;
  const double pieces = std::min(std::ceil(plain / cap), 1e6);
  const auto k = static_cast<long>(pieces);
  const double h = dt / pieces;
  double sum = 0.5 * (1.0 / (d0 * d0) + 1.0 / (d1 * d1));
  for (long j = 1; j < k; ++j) {
    const double d = d0 + (d1 - d0) * (static_cast<double>(j) / pieces);
    sum += 1.0 / (d * d);
  }
  return h * sum;
}

std::vector<double> cumulative_time_change(const Trajectory& trajectory, const Vector& alpha) {
  const auto& xs = trajectory.states;
  std::vector<double> out(xs.size(), 0.0);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (alpha.dot(xs[j]) == 0.0)
      throw Error(ErrorKind::singular_clock, "trajectory touches the hyperplane at grid index " + std::to_string(j));
    if (j == 0) continue;
    const double d0 = alpha.dot(xs[j - 1]), d1 = alpha.dot(xs[j]);
    out[j] = out[j - 1] + 0.5 * (trajectory.times[j] - trajectory.times[j - 1]) * (1.0 / (d0 * d0) + 1.0 / (d1 * d1));
  }
  return out;
}

double inverse_time_change(const std::vector<double>& times, const std::vector<double>& clock, double a) {
  if (times.size() != clock.size() || times.empty())
    throw Error(ErrorKind::dimension_mismatch, "time grid and clock differ in length");
  if (a <= clock.front()) return times.front();
  auto it = std::lower_bound(clock.begin(), clock.end(), a);
  if (it == clock.end()) return std::numeric_limits<double>::infinity();
  const auto j = static_cast<std::size_t>(it - clock.begin());
  const double span = clock[j] - clock[j - 1];
  const double s = span > 0.0 ? (a - clock[j - 1]) / span : 1.0;
  return times[j - 1] + s * (times[j] - times[j - 1]);
}

// ---------------------------------------------------------------- regions

std::size_t weyl_index(const RootSystem& system, const Matrix& w) {
  const auto& group = system.weyl_group();
  for (std::size_t i = 0; i < group.size(); ++i) {
    if ((group[i] - w).cwiseAbs().maxCoeff() <= kRootTolerance) return i;
  }
  throw Error(ErrorKind::invalid_argument, "matrix is not an element of the Weyl group");
}

FoldRegions fold_check_regions(const LiftPlan& plan) {
  const auto& sys = plan.system();
  const auto& group = sys.weyl_group();
  FoldRegions out;
  out.regions.push_back({0});
  for (const auto& lv : plan.levels()) {
    const Matrix s = reflection_matrix(sys.root(lv.root));
    const auto& prev = out.regions.back();
    std::vector<std::size_t> image;
    for (std::size_t w : prev) image.push_back(weyl_index(sys, s * group[w]));
    bool disjoint = true;
    for (std::size_t w : image) disjoint = disjoint && std::find(prev.begin(), prev.end(), w) == prev.end();
    out.disjoint.push_back(disjoint);
    std::vector<std::size_t> next = prev;
    for (std::size_t w : image)
      if (std::find(next.begin(), next.end(), w) == next.end()) next.push_back(w);
    std::sort(next.begin(), next.end());
    out.regions.push_back(std::move(next));
  }
  out.covers_space = out.regions.back().size() == group.size();
  return out;
}

bool region_contains(const RootSystem& system, const std::vector<std::size_t>& region, const Vector& y) {
  const auto& group = system.weyl_group();
  const Matrix& pm = system.positive_matrix();
  for (std::size_t w : region) {
    const Vector back = group[w].transpose() * y;
    const Vector dots = pm.transpose() * back;
    if (dots.size() == 0 || dots.minCoeff() >= -kChamberTolerance * (1.0 + y.norm())) return true;
  }
  return false;
}

// ---------------------------------------------------------------- engine

DunklSimulator::DunklSimulator(LiftPlan plan, Multiplicity k, Vector x0, SimulationConfig config,
                               LiftOptions options)
    : plan_(std::move(plan)),
      k_(std::move(k)),
      x0_(std::move(x0)),
      config_(std::move(config)),
      options_(options),
      diffusion_(plan_.system_ptr(), k_, config_.wall_policy, config_.max_halvings, config_.wall_epsilon) {
  config_.validate();
  const auto& sys = plan_.system();
  if (static_cast<std::size_t>(x0_.size()) != sys.dimension())
    throw Error(ErrorKind::dimension_mismatch, "x0 has the wrong dimension");
  if (k_.min_value() < 0.5)
    throw Error(ErrorKind::unsupported_regime, "the jump lift needs k(α) >= 1/2 for every root");
  const double dist = diffusion_.signed_wall_distance(x0_, x0_);
  if (!(dist > kChamberTolerance * (1.0 + x0_.norm())))
    throw Error(ErrorKind::wall_contact, "x0 lies on a reflecting hyperplane");
  if (!(options_.lambda_max > 0.0)) throw Error(ErrorKind::invalid_argument, "lambda_max must be positive");
  if (options_.check_confinement) output_region_ = fold_check_regions(plan_).regions.back();
}

DunklSimulator DunklSimulator::lift_one_root(std::size_t root, double rate, LiftMode mode) const {
  return DunklSimulator(plan_.lifted(root, rate, mode), k_, x0_, config_, options_);
}

PathSummary DunklSimulator::run(std::uint64_t path_index, PathObserver* observer) const {
  return run_checked(path_index, observer, nullptr);
}

PathSummary DunklSimulator::run_checked(std::uint64_t path_index, PathObserver* observer,
                                        LiftDiagnostics* diagnostics) const {
  const auto& sys = plan_.system();
  const auto& levels = plan_.levels();
  const std::size_t L = levels.size();

  PhiloxNoise noise(PhiloxStream(config_.seed, path_index, Substream::diffusion));
  std::vector<PhiloxStream> clocks;
  clocks.reserve(L);
  std::vector<double> lambda(L, 0.0), next(L, 0.0), d0(L, 0.0);
  std::vector<int> parity(L, 0);
  std::vector<Vector> alpha(L), a(L);
  for (std::size_t i = 0; i < L; ++i) {
    const Substream kind = levels[i].mode == LiftMode::shortcut ? Substream::poisson : Substream::clock;
    clocks.emplace_back(config_.seed, path_index, level_substream(kind, i + 1));
    next[i] = clocks[i].exponential();
    alpha[i] = sys.root(levels[i].root);
  }

  // a_i = G_{<i}ᵀ α_i, where G_{<i} applies the flipped reflections of levels below i.
  auto refresh = [&] {
    for (std::size_t i = 0; i < L; ++i) {
      a[i] = alpha[i];
      for (std::size_t l = i; l-- > 0;)
        if (parity[l]) a[i] = reflect(alpha[l], a[i]);
    }
  };
  auto apply_levels = [&](Vector y, std::size_t from, std::size_t to) {
    for (std::size_t l = from; l < to; ++l)
      if (parity[l]) y = reflect(alpha[l], y);
    return y;
  };
  auto output = [&](const Vector& zz) { return apply_levels(zz, 0, L); };
  auto check = [&](const Vector& y) {
    if (!diagnostics || !options_.check_confinement) return;
    ++diagnostics->checked_states;
    if (!region_contains(sys, output_region_, y)) ++diagnostics->confinement_violations;
  };
  refresh();

  PathSummary out;
  Vector z = x0_;
  Vector dW(z.size());
  const std::size_t m = config_.steps();
  double t = 0.0;
  const bool need_output = observer != nullptr || (diagnostics && options_.check_confinement);
  if (need_output) {
    const Vector y = output(z);
    if (observer) observer->on_state(0.0, y);
    check(y);
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double h = config_.step_length(j);
    for (std::size_t i = 0; i < L; ++i) d0[i] = z.dot(a[i]);
    noise.draw(dW);
    dW *= std::sqrt(h);
    const StepOutcome r = diffusion_.step(z, h, dW, noise);
    out.refinements += r.refinements;
    out.max_depth = std::max(out.max_depth, r.depth);
    if (r.status != StepOutcome::Status::accepted) {
      out.termination = Termination::step_failure;
      out.artifact = true;
      out.end_time = t;
      out.final_state = output(z);
      if (observer) observer->on_state(t, out.final_state);
      return out;
    }
    for (std::size_t i = 0; i < L; ++i) {
      const double c = levels[i].rate;
      if (c == 0.0) continue;
      const double d1 = z.dot(a[i]);
      const double inc = c * clock_increment(d0[i], d1, h, options_.lambda_max / c);
      const double start = lambda[i];
      lambda[i] += inc;
      while (lambda[i] >= next[i]) {
        JumpEvent ev;
        const double frac = inc > 0.0 ? std::clamp((next[i] - start) / inc, 0.0, 1.0) : 1.0;
        ev.time = t + frac * h;
        ev.level = i + 1;
        ev.pre = output(z);
        const Vector beta = apply_levels(alpha[i], i + 1, L);
        if (levels[i].mode == LiftMode::shortcut) {
          parity[i] ^= 1;
        } else {
          z = reflect(alpha[i], apply_levels(z, 0, i));
          for (std::size_t l = 0; l < i; ++l) parity[l] = 0;
        }
        refresh();
        const auto idx = sys.find_root(beta);
        if (!idx) throw Error(ErrorKind::invalid_plan, "jump direction is not a root");
        ev.root = *idx;
        ev.post = reflect(sys.root(ev.root), ev.pre);
        ++out.jumps;
        if (observer) observer->on_jump(ev);
        check(ev.post);
        next[i] += clocks[i].exponential();
      }
    }
    t = (j + 1 == m) ? config_.horizon : t + h;
    if (need_output) {
      const Vector y = output(z);
      if (observer) observer->on_state(t, y);
      check(y);
    }
  }
  out.end_time = config_.horizon;
  out.final_state = output(z);
  return out;
}

DunklSimulator make_dunkl_simulator(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                                    const std::optional<Multiplicity>& jump,
                                    const std::optional<std::vector<std::size_t>>& enumeration,
                                    const Vector& x0, const SimulationConfig& config, ModeRequest request,
                                    LiftOptions options) {
  std::shared_ptr<const RootSystem> sys = system;
  if (enumeration) sys = std::make_shared<const RootSystem>(system->with_enumeration(*enumeration));
  // Multiplicities are stored per orbit, and orbits do not depend on the enumeration.
  const Multiplicity kk(*sys, k.per_orbit());
  const Multiplicity jj(*sys, jump ? jump->per_orbit() : k.per_orbit());
  LiftPlan plan = LiftPlan::for_system(sys, jj, request);
  return DunklSimulator(std::move(plan), kk, x0, config, options);
}

Trajectory simulate_dunkl(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                          const std::optional<Multiplicity>& jump,
                          const std::optional<std::vector<std::size_t>>& enumeration, const Vector& x0,
                          const SimulationConfig& config, ModeRequest request, std::uint64_t path_index) {
  return make_dunkl_simulator(std::move(system), k, jump, enumeration, x0, config, request)
      .trajectory(path_index);
}

Trajectory shortcut_lift(const Trajectory& lower, const RootSystem& system, std::size_t root, double rate,
                         PhiloxStream& arrivals, std::size_t level, double lambda_max) {
  const Vector& alpha = system.root(root);
  Trajectory out;
  out.termination = lower.termination;
  out.end_time = lower.end_time;
  out.refinements = lower.refinements;
  out.max_depth = lower.max_depth;
  out.artifact = lower.artifact;
  if (lower.states.empty()) return out;
  double lambda = 0.0;
  double next = arrivals.exponential();
  int parity = 0;
  auto lifted = [&](const Vector& y) { return parity ? reflect(alpha, y) : y; };
  out.times.push_back(lower.times[0]);
  out.states.push_back(lifted(lower.states[0]));
  for (std::size_t j = 1; j < lower.states.size(); ++j) {
    const double h = lower.times[j] - lower.times[j - 1];
    const double d0 = alpha.dot(lower.states[j - 1]), d1 = alpha.dot(lower.states[j]);
    if (d0 == 0.0 || d1 == 0.0) throw Error(ErrorKind::singular_clock, "recorded path touches the hyperplane");
    if (rate > 0.0) {
      const double inc = rate * clock_increment(d0, d1, h, lambda_max / rate);
      const double start = lambda;
      lambda += inc;
      while (lambda >= next) {
        JumpEvent ev;
        ev.time = lower.times[j - 1] + std::clamp((next - start) / inc, 0.0, 1.0) * h;
        ev.level = level;
        ev.pre = lifted(lower.states[j]);
        ev.root = root;
        ev.post = reflect(alpha, ev.pre);
        parity ^= 1;
        out.jumps.push_back(std::move(ev));
        next += arrivals.exponential();
      }
    }
    out.times.push_back(lower.times[j]);
    out.states.push_back(lifted(lower.states[j]));
  }
  return out;
}

}  // namespace dunkl
