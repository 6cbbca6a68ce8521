#include "dunkl/stat_verify.hpp"

#include "dunkl/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dunkl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe r;
  if (v.empty()) return r;
  const double n = static_cast<double>(v.size());
  r.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

std::vector<Vector> final_states(const PathSimulator& sim, std::size_t paths, unsigned threads) {
  const auto runs = run_ensemble(sim, paths, threads);
  std::vector<Vector> out;
  out.reserve(runs.size());
  for (const auto& r : runs) out.push_back(r.final_state);
  return out;
}

class ResidualObserver final : public PathObserver {
 public:
  ResidualObserver(const GeneratorSpec& spec, const std::vector<TestFunction>& fs)
      : spec_(spec), fs_(fs), integral_(fs.size(), 0.0) {}

  void on_state(double t, const Vector& x) override {
    if (!started_) {
      started_ = true;
      x0_ = x;
    } else {
      // Left Riemann sum: the generator at the previous grid state.
      const double h = t - t_prev_;
      for (std::size_t i = 0; i < fs_.size(); ++i) integral_[i] += gen_prev_[i] * h;
    }
    gen_prev_.resize(fs_.size());
    for (std::size_t i = 0; i < fs_.size(); ++i) gen_prev_[i] = apply_generator(spec_, fs_[i], x).value;
    t_prev_ = t;
    x_last_ = x;
  }

  double residual(std::size_t i) const { return fs_[i](x_last_) - fs_[i](x0_) - integral_[i]; }

 private:
  const GeneratorSpec& spec_;
  const std::vector<TestFunction>& fs_;
  std::vector<double> integral_;
  std::vector<double> gen_prev_;
  bool started_ = false;
  double t_prev_ = 0.0;
  Vector x0_, x_last_;
};

Report p_value_report(const std::string& name, double p, double significance, std::size_t n,
                      double statistic) {
  Report r;
  r.name = name;
  r.criterion = "p-value";
  r.estimate = statistic;
  r.p_value = p;
  r.significance = significance;
  r.sample_size = n;
  r.passed = p >= significance;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Brownian

BrownianSimulator::BrownianSimulator(Vector x0, SimulationConfig config)
    : x0_(std::move(x0)), config_(std::move(config)) {
  config_.validate();
}

PathSummary BrownianSimulator::run(std::uint64_t path_index, PathObserver* observer) const {
  PhiloxStream stream(config_.seed, path_index, Substream::diffusion);
  Vector x = x0_;
  double t = 0.0;
  const std::size_t m = config_.steps();
  if (observer) observer->on_state(0.0, x);
  for (std::size_t j = 0; j < m; ++j) {
    const double h = config_.step_length(j);
    const double s = std::sqrt(h);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += s * stream.normal();
    t = (j + 1 == m) ? config_.horizon : t + h;
    if (observer) observer->on_state(t, x);
  }
  PathSummary out;
  out.final_state = x;
  out.end_time = config_.horizon;
  return out;
}

// ---------------------------------------------------------------- martingale

std::vector<Report> martingale_residuals(const PathSimulator& sim, const GeneratorSpec& spec,
                                         const std::vector<TestFunction>& functions,
                                         const std::vector<std::string>& names,
                                         const MartingaleOptions& options) {
  if (sim.dimension() != spec.system().dimension())
    throw Error(ErrorKind::dimension_mismatch, "simulator and generator live in different dimensions");
  if (names.size() != functions.size())
    throw Error(ErrorKind::invalid_argument, "one name per test function is required");
  const auto start = Clock::now();
  const std::size_t n = options.paths;
  std::vector<std::vector<double>> res(functions.size(), std::vector<double>(n, 0.0));
  std::vector<int> stopped(n, 0);
  parallel_for(n, options.threads, [&](std::size_t p) {
    ResidualObserver obs(spec, functions);
    const PathSummary s = sim.run(p, &obs);
    stopped[p] = s.termination != Termination::horizon;
    for (std::size_t i = 0; i < functions.size(); ++i) res[i][p] = obs.residual(i);
  });
  const double dt = sim.config().dt;
  const double bias = options.bias_constant * dt;
  const auto flagged = static_cast<std::size_t>(std::count(stopped.begin(), stopped.end(), 1));
  std::vector<Report> out;
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const MeanSe ms = mean_se(res[i]);
    Report r;
    r.name = names[i];
    r.estimate = ms.mean;
    r.standard_error = ms.se;
    r.target = 0.0;
    r.tolerance = 3.0 * ms.se + bias;
    r.sample_size = n;
    r.passed = std::abs(ms.mean) <= r.tolerance;
    std::ostringstream d;
    d << "bias allowance " << bias << " (c = " << options.bias_constant << ")";
    if (flagged) d << ", " << flagged << " paths stopped early";
    r.detail = d.str();
    out.push_back(std::move(r));
  }
  const double elapsed = seconds_since(start);
  for (auto& r : out) r.runtime_seconds = elapsed;
  return out;
}

Report martingale_residual(const PathSimulator& sim, const GeneratorSpec& spec, const TestFunction& u,
                           const MartingaleOptions& options, const std::string& name) {
  return martingale_residuals(sim, spec, {u}, {name}, options).front();
}

double calibrate_bias_constant(const Vector& x0, const SimulationConfig& config,
                               const std::vector<TestFunction>& functions, std::size_t paths,
                               unsigned threads) {
  // ½Δ is the radial generator with k ≡ 0 over any system of the right dimension;
  // the coordinate system {±√2 e_i} exists in every dimension.
  std::vector<Vector> roots;
  const auto n = x0.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = std::sqrt(2.0);
    roots.push_back(e);
    roots.push_back(-e);
  }
  auto coord = std::make_shared<const RootSystem>(RootSystem::from_roots(roots));
  const GeneratorSpec spec = GeneratorSpec::radial(coord, Multiplicity::constant(*coord, 0.0));
  BrownianSimulator bm(x0, config);
  std::vector<std::string> names(functions.size(), "calibration");
  MartingaleOptions opts;
  opts.paths = paths;
  opts.threads = threads;
  const auto reports = martingale_residuals(bm, spec, functions, names, opts);
  // Only the part of the mean that stands out of the 3-SE noise band counts as bias.
  double c = 0.0;
  for (const auto& r : reports)
    c = std::max(c, std::max(0.0, std::abs(r.estimate) - 3.0 * r.standard_error) / config.dt);
  return c;
}

// ---------------------------------------------------------------- Bessel

std::vector<double> bessel_oracle_samples(double dimension, double r0, double horizon, double dt,
                                          std::size_t count, std::uint64_t seed, unsigned threads) {
  if (!(dimension > 0.0) || !(r0 > 0.0) || !(dt > 0.0))
    throw Error(ErrorKind::invalid_argument, "Bessel oracle needs positive dimension, start and step");
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  const double h = horizon / static_cast<double>(steps);
  const double sh = std::sqrt(h);
  const double a = 0.5 * (dimension - 1.0);
  std::vector<double> out(count);
  parallel_for(count, threads, [&](std::size_t p) {
    PhiloxStream s(seed, p, Substream::oracle);
    double r = r0;
    for (std::size_t j = 0; j < steps; ++j) {
      r += a / r * h + sh * s.normal();
      r = std::abs(r);
      if (r == 0.0) r = 1e-300;
    }
    out[p] = r;
  });
  return out;
}

Report norm_is_bessel(const PathSimulator& sim, double dimension, std::size_t paths,
                      std::uint64_t oracle_seed, unsigned threads) {
  const auto start = Clock::now();
  const auto runs = run_ensemble(sim, paths, threads);
  std::vector<double> norms;
  norms.reserve(paths);
  for (const auto& r : runs) norms.push_back(r.final_state.norm());
  // The oracle starts from ‖x0‖, recovered from the simulator's first state.
  struct First final : PathObserver {
    Vector x;
    bool set = false;
    void on_state(double, const Vector& y) override {
      if (!set) x = y, set = true;
    }
  } first;
  sim.run(0, &first);
  const double r0 = first.x.norm();
  const auto oracle = bessel_oracle_samples(dimension, r0, sim.config().horizon, sim.config().dt / 10.0,
                                            paths, oracle_seed, threads);
  const KsResult ks = ks_two_sample(norms, oracle);
  Report r = p_value_report("norm-is-bessel", ks.p_value, 0.01, paths, ks.statistic);
  std::ostringstream d;
  d << "dimension " << dimension << ", KS D = " << ks.statistic;
  r.detail = d.str();
  r.runtime_seconds = seconds_since(start);
  return r;
}

Report squared_norm_moment(const PathSimulator& sim, const Vector& x0, double dimension, std::size_t paths,
                           unsigned threads) {
  const auto start = Clock::now();
  const auto runs = run_ensemble(sim, paths, threads);
  std::vector<double> sq;
  std::size_t early = 0;
  for (const auto& r : runs) {
    sq.push_back(r.final_state.squaredNorm());
    early += r.termination != Termination::horizon;
  }
  const MeanSe ms = mean_se(sq);
  Report r;
  r.name = "squared-norm-moment";
  r.estimate = ms.mean;
  r.standard_error = ms.se;
  r.target = x0.squaredNorm() + dimension * sim.config().horizon;
  r.tolerance = 3.0 * ms.se;
  r.sample_size = paths;
  r.passed = std::abs(ms.mean - r.target) <= r.tolerance;
  std::ostringstream d;
  d << "dimension " << dimension;
  if (early) d << ", " << early << " paths stopped early";
  r.detail = d.str();
  r.runtime_seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------------- KS comparisons

Report coordinate_ks(const std::string& name, const std::vector<Vector>& a, const std::vector<Vector>& b,
                     double significance) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::invalid_argument, "empty sample");
  const auto n = a.front().size();
  double worst = 1.0, stat = 0.0;
  std::ostringstream d;
  d << "p =";
  for (Eigen::Index c = 0; c < n; ++c) {
    std::vector<double> u, v;
    for (const auto& x : a) u.push_back(x[c]);
    for (const auto& x : b) v.push_back(x[c]);
    const KsResult ks = ks_two_sample(u, v);
    // Bonferroni across coordinates.
    const double adjusted = std::min(1.0, ks.p_value * static_cast<double>(n));
    if (adjusted < worst) {
      worst = adjusted;
      stat = ks.statistic;
    }
    d << " " << ks.p_value;
  }
  Report r = p_value_report(name, worst, significance, std::min(a.size(), b.size()), stat);
  d << " (Bonferroni over " << n << ")";
  r.detail = d.str();
  return r;
}

Report projection_agreement(const PathSimulator& full, const PathSimulator& radial, const RootSystem& system,
                            std::size_t paths, unsigned threads) {
  const auto start = Clock::now();
  auto ys = final_states(full, paths, threads);
  for (auto& y : ys) y = project_to_chamber(system, y).point;
  const auto xs = final_states(radial, paths, threads);
  Report r = coordinate_ks("projection-agreement", ys, xs);
  r.runtime_seconds = seconds_since(start);
  return r;
}

Report projection_ks(const std::string& name, const PathSimulator& a, const PathSimulator& b,
                     const std::vector<Vector>& directions, std::size_t paths, unsigned threads) {
  const auto start = Clock::now();
  const auto ya = final_states(a, paths, threads);
  const auto yb = final_states(b, paths, threads);
  Matrix v(a.dimension(), static_cast<Eigen::Index>(directions.size()));
  for (std::size_t i = 0; i < directions.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = directions[i];
  std::vector<Vector> pa, pb;
  for (const auto& y : ya) pa.push_back(v.transpose() * y);
  for (const auto& y : yb) pb.push_back(v.transpose() * y);
  Report r = coordinate_ks(name, pa, pb);
  r.runtime_seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------------- folding

bool Box::contains(const Vector& y) const {
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] < lower[i] || y[i] >= upper[i]) return false;
  return true;
}

namespace {

// Index of the open chamber containing y, or nullopt near a wall.
std::optional<std::size_t> open_chamber(const RootSystem& sys, const Vector& y) {
  const auto proj = project_to_chamber(sys, y);
  if (chamber_contains(sys, proj.point, 1e-9) != ChamberMembership::interior) return std::nullopt;
  return weyl_index(sys, sys.weyl_group()[proj.element].transpose());
}

}  // namespace

std::vector<Box> folding_boxes(const LiftPlan& plan, std::size_t j, const std::vector<Vector>& pilot,
                               double half_width, std::size_t count) {
  if (j < 1 || j > plan.size()) throw Error(ErrorKind::index_out_of_range, "fold level out of range");
  const auto& sys = plan.system();
  const auto regions = fold_check_regions(plan);
  const auto& region = regions.regions[j - 1];
  const auto n = static_cast<Eigen::Index>(sys.dimension());
  std::vector<Box> out;
  for (const auto& c : pilot) {
    if (out.size() >= count) break;
    Box b{c.array() - half_width, c.array() + half_width};
    // Every corner must sit in the same open chamber of C_{j−1}; chambers are convex.
    std::optional<std::size_t> chamber;
    bool ok = true;
    for (std::uint64_t mask = 0; ok && mask < (std::uint64_t{1} << n); ++mask) {
      Vector corner(n);
      for (Eigen::Index i = 0; i < n; ++i) corner[i] = (mask >> i) & 1 ? b.upper[i] : b.lower[i];
      const auto ch = open_chamber(sys, corner);
      ok = ch && (!chamber || *chamber == *ch);
      chamber = ch;
    }
    if (!ok || std::find(region.begin(), region.end(), *chamber) == region.end()) continue;
    bool overlaps = false;
    for (const auto& o : out) {
      bool sep = false;
      for (Eigen::Index i = 0; i < n; ++i) sep = sep || b.lower[i] >= o.upper[i] || o.lower[i] >= b.upper[i];
      overlaps = overlaps || !sep;
    }
    if (!overlaps) out.push_back(std::move(b));
  }
  return out;
}

Report folding_identity(const LiftPlan& plan, std::size_t j, const FoldingSetup& setup) {
  const auto start = Clock::now();
  Report r;
  r.name = "folding-identity";
  r.sample_size = setup.paths;
  const auto regions = fold_check_regions(plan);
  if (j < 1 || j > plan.size()) throw Error(ErrorKind::index_out_of_range, "fold level out of range");
  if (!regions.disjoint[j - 1]) {
    r.skipped = true;
    r.detail = "hypothesis-not-met: C_{j-1} overlaps its reflection";
    return r;
  }
  const auto& sys = plan.system();
  const Vector alpha = sys.root(plan.levels()[j - 1].root);

  SimulationConfig lower_cfg = setup.config, upper_cfg = setup.config, pilot_cfg = setup.config;
  lower_cfg.seed = derive_seed(setup.config.seed, 1);
  upper_cfg.seed = derive_seed(setup.config.seed, 2);
  pilot_cfg.seed = derive_seed(setup.config.seed, 3);
  const DunklSimulator lower(plan.prefix(j - 1), setup.k, setup.x0, lower_cfg);
  const DunklSimulator upper(plan.prefix(j), setup.k, setup.x0, upper_cfg);
  const DunklSimulator pilot_sim(plan.prefix(j - 1), setup.k, setup.x0, pilot_cfg);

  const auto pilot = final_states(pilot_sim, 20 * setup.boxes, setup.threads);
  const double half = 0.25 * std::sqrt(setup.config.horizon);
  const auto boxes = folding_boxes(plan, j, pilot, half, setup.boxes);
  if (boxes.size() < setup.boxes) {
    r.skipped = true;
    r.detail = "could not place enough test boxes";
    return r;
  }
  const auto ylo = final_states(lower, setup.paths, setup.threads);
  const auto yhi = final_states(upper, setup.paths, setup.threads);
  const double n1 = static_cast<double>(ylo.size()), n2 = static_cast<double>(yhi.size());
  double worst = 0.0;
  bool pass = true;
  std::ostringstream d;
  d << "z-scores:";
  for (const auto& b : boxes) {
    double c1 = 0.0;
    for (const auto& y : ylo) c1 += b.contains(y);
    double s2 = 0.0, ss2 = 0.0;
    for (const auto& y : yhi) {
      const double v = static_cast<double>(b.contains(y)) + static_cast<double>(b.contains(reflect(alpha, y)));
      s2 += v;
      ss2 += v * v;
    }
    const double p1 = c1 / n1, m2 = s2 / n2;
    const double var2 = std::max(0.0, ss2 / n2 - m2 * m2);
    const double se = std::sqrt(p1 * (1.0 - p1) / n1 + var2 / n2);
    const double diff = p1 - m2;
    const double z = se > 0.0 ? std::abs(diff) / se : (diff == 0.0 ? 0.0 : INFINITY);
    pass = pass && std::abs(diff) <= 3.0 * se;
    if (z >= worst) {
      worst = z;
      r.estimate = diff;
      r.standard_error = se;
    }
    d << " " << z;
  }
  r.tolerance = 3.0 * r.standard_error;
  r.passed = pass;
  r.detail = d.str();
  r.runtime_seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------------- walls

Report wall_hitting_profile(const std::vector<double>& k_values, double x0, double horizon, double dt,
                            std::size_t paths, std::uint64_t seed, unsigned threads, WallProfile* profile) {
  const auto start = Clock::now();
  auto sys = std::make_shared<const RootSystem>(build_rank_one());
  SimulationConfig cfg;
  cfg.horizon = horizon;
  cfg.dt = dt;
  cfg.paths = paths;
  cfg.seed = seed;
  Vector start_point(1);
  start_point[0] = x0;
  WallProfile prof;
  for (double k : k_values) {
    const RadialSimulator sim(sys, Multiplicity::constant(*sys, k), start_point, cfg);
    const auto runs = run_ensemble(sim, paths, threads);
    std::size_t hits = 0;
    for (const auto& r : runs) hits += r.termination != Termination::horizon;
    prof.k_values.push_back(k);
    prof.hit_fractions.push_back(static_cast<double>(hits) / static_cast<double>(paths));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < prof.k_values.size(); ++i) {
    if (prof.k_values[i] > prof.k_values[i - 1])
      monotone = monotone && prof.hit_fractions[i] <= prof.hit_fractions[i - 1];
  }
  bool low_ok = true, high_ok = true;
  std::ostringstream d;
  for (std::size_t i = 0; i < prof.k_values.size(); ++i) {
    const double k = prof.k_values[i], f = prof.hit_fractions[i];
    if (std::abs(k - 0.1) < 1e-12) low_ok = low_ok && f >= 0.5;
    if (k >= 0.6) high_ok = high_ok && f <= 0.01;
    d << "k=" << k << ":" << f << (i + 1 < prof.k_values.size() ? " " : "");
  }
  Report r;
  r.name = "wall-hitting-profile";
  r.estimate = prof.hit_fractions.empty() ? kNaN : prof.hit_fractions.front();
  r.sample_size = paths;
  r.passed = monotone && low_ok && high_ok;
  r.detail = d.str() + (monotone ? "" : " (not monotone)") + (low_ok ? "" : " (k=0.1 below 50%)") +
             (high_ok ? "" : " (k>=0.6 above 1%)");
  r.runtime_seconds = seconds_since(start);
  if (profile) *profile = prof;
  return r;
}

// ---------------------------------------------------------------- rotations

Matrix random_orthogonal(std::size_t n, PhiloxStream& stream) {
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = stream.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
    if (rr(i, i) < 0.0) q.col(i) = -q.col(i);
  return q;
}

GeneratorSpec untransported_spec(const GeneratorSpec& spec, const Matrix& theta) {
  const GeneratorSpec good = rotate_spec(spec, theta);
  const auto& orig = spec.system();
  const auto rotated = good.system_ptr();
  std::vector<double> per_orbit = good.k().per_orbit();
  for (std::size_t o = 0; o < rotated->orbits().size(); ++o) {
    const Vector& beta = rotated->root(rotated->orbits()[o].front());
    if (const auto idx = orig.find_root(beta)) per_orbit[o] = spec.k()(*idx);
  }
  Vector jump = good.jump_coefficients();
  for (std::size_t i = 0; i < rotated->positive_count(); ++i) {
    if (const auto pos = orig.positive_position(rotated->positive_root(i)))
      jump[static_cast<Eigen::Index>(i)] = spec.jump_coefficients()[static_cast<Eigen::Index>(*pos)];
  }
  GeneratorSpec out =
      GeneratorSpec::radial(rotated, Multiplicity(*rotated, per_orbit)).with_jump_coefficients(jump);
  if (const auto& pj = good.point_jump()) out = out.with_point_jump(pj->rate, pj->alpha);
  return out;
}

Report rotation_identity(const GeneratorSpec& spec, std::size_t trials, std::uint64_t seed,
                         const Matrix* fixed_theta, bool untransported) {
  const auto start = Clock::now();
  const auto& sys = spec.system();
  const auto n = static_cast<Eigen::Index>(sys.dimension());
  PhiloxStream s(seed, 0, Substream::auxiliary);
  double worst = 0.0, worst_scale = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Matrix theta = fixed_theta ? *fixed_theta : random_orthogonal(sys.dimension(), s);
    const GeneratorSpec rs = untransported ? untransported_spec(spec, theta) : rotate_spec(spec, theta);
    Vector a(n), b(n), c(n);
    for (Eigen::Index i = 0; i < n; ++i) a[i] = s.normal(), b[i] = s.normal(), c[i] = s.normal();
    const double w1 = 0.5 + s.uniform(), w2 = 0.5 + s.uniform();
    TestFunction u{[a, b, c, w1, w2](const Vector& y) {
      return w1 * std::sin(a.dot(y)) + w2 * std::pow(b.dot(y), 2) + std::exp(-0.25 * (y - c).squaredNorm());
    }};
    TestFunction ut{[u, theta](const Vector& y) { return u(theta * y); }};
    // A point off every wall, at distance at least 0.1·‖x‖.
    Vector x(n);
    for (int tries = 0;; ++tries) {
      for (Eigen::Index i = 0; i < n; ++i) x[i] = 2.0 * s.normal();
      const Vector dots = sys.positive_matrix().transpose() * x;
      if (dots.cwiseAbs().minCoeff() >= 0.1 * x.norm()) break;
      if (tries > 1000) throw Error(ErrorKind::invalid_argument, "could not sample a point off the walls");
    }
    const GeneratorValue lhs = apply_generator(rs, u, theta * x);
    const GeneratorValue rhs = apply_generator(spec, ut, x);
    const double scale = std::max(lhs.scale, rhs.scale);
    const double rel = std::abs(lhs.value - rhs.value) / (scale > 0.0 ? scale : 1.0);
    if (rel >= worst) {
      worst = rel;
      worst_scale = scale;
    }
  }
  Report r;
  r.name = untransported ? "rotation-identity-untransported" : "rotation-identity";
  r.estimate = worst;
  r.target = 0.0;
  r.tolerance = 1e-6;
  r.sample_size = trials;
  r.passed = worst <= r.tolerance;
  r.negative_control = untransported;
  std::ostringstream d;
  d << "max relative residual over " << trials << " trials (scale " << worst_scale << ")";
  r.detail = d.str();
  r.runtime_seconds = seconds_since(start);
  return r;
}

Report rotation_statistical(const Matrix& theta, const PathSimulator& original, const PathSimulator& rotated,
                            std::size_t paths, unsigned threads) {
  const auto start = Clock::now();
  auto ya = final_states(original, paths, threads);
  for (auto& y : ya) y = theta * y;
  const auto yb = final_states(rotated, paths, threads);
  Report r = coordinate_ks("rotation-statistical", ya, yb);
  r.runtime_seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------------- jump audit

JumpAudit audit_jumps(const DunklSimulator& sim, std::size_t paths, double tolerance) {
  LiftOptions opts = sim.options();
  opts.check_confinement = true;
  const DunklSimulator checked(sim.plan(), sim.k(), sim.x0(), sim.config(), opts);
  const auto& sys = sim.plan().system();
  struct Audit final : PathObserver {
    const RootSystem* sys;
    double tol;
    JumpAudit* out;
    void on_jump(const JumpEvent& e) override {
      ++out->jumps;
      const Vector expect = reflect(sys->root(e.root), e.pre);
      const double scale = 1.0 + e.pre.norm();
      if ((expect - e.post).cwiseAbs().maxCoeff() > tol * scale) ++out->inexact;
      const Vector pa = project_to_chamber(*sys, e.pre).point;
      const Vector pb = project_to_chamber(*sys, e.post).point;
      if ((pa - pb).cwiseAbs().maxCoeff() > tol * scale) ++out->projection_moves;
    }
  };
  JumpAudit total;
  for (std::size_t p = 0; p < paths; ++p) {
    Audit a;
    a.sys = &sys;
    a.tol = tolerance;
    a.out = &total;
    LiftDiagnostics diag;
    checked.run_checked(p, &a, &diag);
    total.confinement_violations += diag.confinement_violations;
    total.checked_states += diag.checked_states;
    ++total.paths;
  }
  return total;
}

bool Suite::all_satisfied() const {
  return std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.satisfied(); });
}

}  // namespace dunkl
