#include "dunkl/radial_sde.hpp"

#include "dunkl/error.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace dunkl {

std::string to_string(WallPolicy policy) {
  switch (policy) {
    case WallPolicy::automatic: return "auto";
    case WallPolicy::reject_and_halve: return "reject-and-halve";
    case WallPolicy::stop_at_t0: return "stop-at-T0";
  }
  return "auto";
}

WallPolicy wall_policy_from_string(const std::string& name) {
  if (name == "auto" || name == "automatic") return WallPolicy::automatic;
  if (name == "reject-and-halve" || name == "reject_and_halve") return WallPolicy::reject_and_halve;
  if (name == "stop-at-T0" || name == "stop-at-t0" || name == "stop_at_t0") return WallPolicy::stop_at_t0;
  throw Error(ErrorKind::invalid_argument, "unknown wall policy '" + name + "'");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::horizon: return "horizon";
    case Termination::wall_hit: return "T0";
    case Termination::step_failure: return "step-failure";
  }
  return "horizon";
}

void SimulationConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw Error(ErrorKind::invalid_argument, "horizon T must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::invalid_argument, "dt must be positive");
  if (dt > horizon) throw Error(ErrorKind::invalid_argument, "dt must not exceed T");
  if (paths < 1) throw Error(ErrorKind::invalid_argument, "path count must be at least 1");
  if (max_halvings < 0) throw Error(ErrorKind::invalid_argument, "max_halvings must be >= 0");
  if (!(wall_epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "wall_epsilon must be positive");
}

std::size_t SimulationConfig::steps() const {
  const double ratio = horizon / dt;
  const double rounded = std::round(ratio);
  // Tolerate T/dt that is an integer up to rounding.
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(ratio));
}

double SimulationConfig::step_length(std::size_t step) const {
  const std::size_t m = steps();
  if (step + 1 < m) return dt;
  return horizon - dt * static_cast<double>(m - 1);
}

namespace {

class Recorder final : public PathObserver {
 public:
  Recorder(Trajectory& out, std::size_t stride, std::size_t steps)
      : out_(out), stride_(stride), steps_(steps) {}

  void on_state(double t, const Vector& x) override {
    const bool keep = index_ == 0 || index_ == steps_ || (stride_ > 0 && index_ % stride_ == 0);
    if (keep) {
      out_.times.push_back(t);
      out_.states.push_back(x);
    }
    last_t_ = t;
    last_x_ = x;
    ++index_;
  }
  void on_jump(const JumpEvent& e) override { out_.jumps.push_back(e); }

  // Early termination: make sure the final state is recorded.
  void finish() {
    if (index_ > 0 && (out_.times.empty() || out_.times.back() != last_t_)) {
      out_.times.push_back(last_t_);
      out_.states.push_back(last_x_);
    }
  }

 private:
  Trajectory& out_;
  std::size_t stride_;
  std::size_t steps_;
  std::size_t index_ = 0;
  double last_t_ = 0.0;
  Vector last_x_;
};

}  // namespace

Trajectory PathSimulator::trajectory(std::uint64_t path_index) const {
  Trajectory out;
  Recorder rec(out, config().record_stride, config().steps());
  const PathSummary s = run(path_index, &rec);
  rec.finish();
  out.termination = s.termination;
  out.end_time = s.end_time;
  out.refinements = s.refinements;
  out.max_depth = s.max_depth;
  out.artifact = s.artifact;
  return out;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<PathSummary> run_ensemble(const PathSimulator& sim, std::size_t n, unsigned threads) {
  std::vector<PathSummary> out(n);
  parallel_for(n, threads, [&](std::size_t i) { out[i] = sim.run(i, nullptr); });
  return out;
}

void PhiloxNoise::draw(Vector& out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = stream_.normal();
}

ChamberDiffusion::ChamberDiffusion(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                                   WallPolicy policy, int max_halvings, double wall_epsilon)
    : system_(std::move(system)),
      positive_(system_->positive_matrix()),
      k_positive_(k.positive_values(*system_)),
      max_halvings_(max_halvings),
      wall_epsilon_(wall_epsilon),
      min_k_(k.min_value()) {
  policy_ = policy;
  if (policy_ == WallPolicy::automatic)
    policy_ = min_k_ >= 0.5 ? WallPolicy::reject_and_halve : WallPolicy::stop_at_t0;
}

void ChamberDiffusion::drift_into(const Vector& x, Vector& out) const {
  out.setZero(x.size());
  for (Eigen::Index j = 0; j < positive_.cols(); ++j) {
    const double kj = k_positive_[j];
    if (kj == 0.0) continue;
    out.noalias() += (kj / positive_.col(j).dot(x)) * positive_.col(j);
  }
}

Vector ChamberDiffusion::euler_candidate(const Vector& x, double dt, const Vector& dW) const {
  Vector d;
  drift_into(x, d);
  return x + d * dt + dW;
}

double ChamberDiffusion::signed_wall_distance(const Vector& x, const Vector& reference) const {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < positive_.cols(); ++j) {
    const double s = positive_.col(j).dot(reference) >= 0.0 ? 1.0 : -1.0;
    best = std::min(best, s * positive_.col(j).dot(x));
  }
  return best;
}

bool ChamberDiffusion::inside(const Vector& candidate, const Vector& reference) const {
  return signed_wall_distance(candidate, reference) > wall_epsilon_ * (1.0 + candidate.norm());
}

StepOutcome ChamberDiffusion::step(Vector& x, double dt, const Vector& dW, NoiseSource& noise) const {
  return refine(x, dt, dW, noise, 0);
}

StepOutcome ChamberDiffusion::refine(Vector& x, double dt, const Vector& dW, NoiseSource& noise,
                                     int depth) const {
  StepOutcome out;
  out.depth = depth;
  Vector cand = euler_candidate(x, dt, dW);
  if (inside(cand, x)) {
    x = std::move(cand);
    return out;
  }
  if (policy_ == WallPolicy::stop_at_t0) {
    const double eps0 = wall_epsilon_ * (1.0 + x.norm());
    const double d0 = signed_wall_distance(x, x);
    const double d1 = signed_wall_distance(cand, x);
    double s = d0 > d1 ? (d0 - eps0) / (d0 - d1) : 1.0;
    s = std::clamp(s, 0.0, 1.0);
    x = x + s * (cand - x);
    out.status = StepOutcome::Status::wall_hit;
    out.hit_fraction = s;
    return out;
  }
  if (depth >= max_halvings_) {
    out.status = StepOutcome::Status::exhausted;
    return out;
  }
  // Split the increment on its Brownian bridge so the refined path shares dW.
  Vector z(dW.size());
  noise.draw(z);
  const Vector dW1 = 0.5 * dW + 0.5 * std::sqrt(dt) * z;
  const Vector dW2 = dW - dW1;
  StepOutcome first = refine(x, 0.5 * dt, dW1, noise, depth + 1);
  first.refinements += 1;
  if (first.status != StepOutcome::Status::accepted) {
    if (first.status == StepOutcome::Status::wall_hit) first.hit_fraction *= 0.5;
    return first;
  }
  StepOutcome second = refine(x, 0.5 * dt, dW2, noise, depth + 1);
  second.refinements += first.refinements;
  second.depth = std::max(first.depth, second.depth);
  if (second.status == StepOutcome::Status::wall_hit) second.hit_fraction = 0.5 + 0.5 * second.hit_fraction;
  return second;
}

StepOutcome em_step(const ChamberDiffusion& diffusion, Vector& x, double dt, const Vector& dW,
                    NoiseSource& noise) {
  return diffusion.step(x, dt, dW, noise);
}

RadialSimulator::RadialSimulator(std::shared_ptr<const RootSystem> system, Multiplicity k, Vector x0,
                                 SimulationConfig config, bool allow_any_chamber)
    : system_(std::move(system)),
      k_(std::move(k)),
      x0_(std::move(x0)),
      config_(std::move(config)),
      diffusion_(system_, k_, config_.wall_policy, config_.max_halvings, config_.wall_epsilon) {
  config_.validate();
  if (static_cast<std::size_t>(x0_.size()) != system_->dimension())
    throw Error(ErrorKind::dimension_mismatch, "x0 has the wrong dimension");
  if (allow_any_chamber) {
    if (diffusion_.signed_wall_distance(x0_, x0_) <= 0.0)
      throw Error(ErrorKind::invalid_argument, "x0 lies on a reflecting hyperplane");
  } else if (chamber_contains(*system_, x0_) != ChamberMembership::interior) {
    throw Error(ErrorKind::invalid_argument, "x0 must lie in the open chamber");
  }
}

PathSummary RadialSimulator::run(std::uint64_t path_index, PathObserver* observer) const {
  PhiloxNoise noise(PhiloxStream(config_.seed, path_index, Substream::diffusion));
  return run_with_noise(noise, observer);
}

PathSummary RadialSimulator::run_with_noise(NoiseSource& noise, PathObserver* observer) const {
  PathSummary out;
  Vector x = x0_;
  Vector dW(x.size());
  const std::size_t m = config_.steps();
  double t = 0.0;
  if (observer) observer->on_state(0.0, x);
  for (std::size_t j = 0; j < m; ++j) {
    const double h = config_.step_length(j);
    noise.draw(dW);
    dW *= std::sqrt(h);
    const StepOutcome r = diffusion_.step(x, h, dW, noise);
    out.refinements += r.refinements;
    out.max_depth = std::max(out.max_depth, r.depth);
    if (r.status != StepOutcome::Status::accepted) {
      const bool genuine = diffusion_.min_k() < 0.5;
      if (r.status == StepOutcome::Status::wall_hit) {
        out.termination = Termination::wall_hit;
        out.end_time = t + r.hit_fraction * h;
      } else {
        out.termination = genuine ? Termination::wall_hit : Termination::step_failure;
        out.end_time = t;
      }
      out.artifact = !genuine;
      if (observer) observer->on_state(out.end_time, x);
      out.final_state = x;
      return out;
    }
    t = (j + 1 == m) ? config_.horizon : t + h;
    if (observer) observer->on_state(t, x);
  }
  out.end_time = config_.horizon;
  out.final_state = x;
  return out;
}

Trajectory simulate_radial(std::shared_ptr<const RootSystem> system, const Multiplicity& k,
                           const Vector& x0, const SimulationConfig& config, std::uint64_t path_index) {
  RadialSimulator sim(std::move(system), k, x0, config);
  return sim.trajectory(path_index);
}

std::vector<double> squared_norm_series(const Trajectory& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.states.size());
  for (const auto& x : trajectory.states) out.push_back(x.squaredNorm());
  return out;
}

}  // namespace dunkl
