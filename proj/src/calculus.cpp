#include "dunkl/calculus.hpp"

#include "dunkl/error.hpp"

#include <cmath>

namespace dunkl {

namespace {

bool is_half(double k) { return std::abs(k - 0.5) <= 1e-12; }

double wall_tolerance(const Vector& x) { return 1e-12 * (1.0 + x.norm()); }

void require_dimension(const RootSystem& system, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != system.dimension()) {
    throw Error(ErrorKind::dimension_mismatch, "point has the wrong dimension");
  }
}

void require_chamber(const RootSystem& system, const Vector& x, const char* what) {
  require_dimension(system, x);
  const Vector dots = system.positive_matrix().transpose() * x;
  if (dots.size() && !(dots.minCoeff() > 0.0)) {
    throw Error(ErrorKind::domain_error, std::string(what) + " is defined on the open chamber only");
  }
}

}  // namespace

double checked_power(double base, double exponent) {
  if (exponent == std::floor(exponent) && std::abs(exponent) <= 64.0) {
    const int e = static_cast<int>(exponent);
    double r = 1.0;
    double b = e < 0 ? 1.0 / base : base;
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    return r;
  }
  if (!(base > 0.0)) {
    throw Error(ErrorKind::domain_error, "fractional power of a non-positive base");
  }
  return std::exp(exponent * std::log(base));
}

double weight_omega(const RootSystem& system, const Multiplicity& k, const Vector& y) {
  require_dimension(system, y);
  double w = 1.0;
  for (auto p : system.positive()) {
    const double d = std::abs(system.root(p).dot(y));
    const double e = 2.0 * k(p);
    w *= (e == 0.0) ? 1.0 : (d == 0.0 ? 0.0 : checked_power(d, e));
  }
  return w;
}

double weight_varpi(const RootSystem& system, const Multiplicity& k, const Vector& x) {
  require_dimension(system, x);
  double w = 1.0;
  for (auto p : system.positive()) {
    if (k(p) == 0.0) continue;
    w *= checked_power(system.root(p).dot(x), k(p));
  }
  return w;
}

Vector drift(const RootSystem& system, const Multiplicity& k, const Vector& x) {
  require_dimension(system, x);
  Vector out = Vector::Zero(x.size());
  const double tol = wall_tolerance(x);
  for (auto p : system.positive()) {
    if (k(p) == 0.0) continue;
    const double d = system.root(p).dot(x);
    if (std::abs(d) <= tol) throw Error(ErrorKind::singular_drift, "drift is singular on a wall");
    out += (k(p) / d) * system.root(p);
  }
  return out;
}

double delta(const RootSystem& system, const Multiplicity& k, const Vector& x) {
  require_chamber(system, x, "delta");
  double v = 1.0;
  for (auto p : system.positive()) v *= checked_power(system.root(p).dot(x), 1.0 - 2.0 * k(p));
  return v;
}

double delta_bar(const RootSystem& system, const Multiplicity& k, const Vector& x) {
  bool any_half = false;
  for (auto p : system.positive()) any_half = any_half || is_half(k(p));
  if (!any_half) {
    throw Error(ErrorKind::invalid_argument, "delta_bar needs an orbit with k = 1/2");
  }
  require_chamber(system, x, "delta_bar");
  double factor = 1.0;
  double log_arg = 0.0;
  for (auto p : system.positive()) {
    const double d = system.root(p).dot(x);
    if (is_half(k(p))) {
      log_arg += std::log(d);
    } else {
      factor *= checked_power(d, 1.0 - 2.0 * k(p));
    }
  }
  return factor * log_arg;
}

double pi_product(const RootSystem& system, const Vector& x) {
  require_dimension(system, x);
  double v = 1.0;
  for (auto p : system.positive()) v *= system.root(p).dot(x);
  return v;
}

// ---------------------------------------------------------------------------

GeneratorSpec::GeneratorSpec(std::shared_ptr<const RootSystem> system, Multiplicity k, Vector jump)
    : system_(std::move(system)), k_(std::move(k)), jump_(std::move(jump)) {
  if (!system_) throw Error(ErrorKind::invalid_argument, "generator needs a root system");
  if (k_.per_root().size() != system_->size()) {
    throw Error(ErrorKind::dimension_mismatch, "multiplicity belongs to a different root system");
  }
  if (static_cast<std::size_t>(jump_.size()) != system_->positive_count()) {
    throw Error(ErrorKind::dimension_mismatch, "one jump coefficient per positive root required");
  }
  for (Eigen::Index i = 0; i < jump_.size(); ++i) {
    if (!(jump_[i] >= 0.0)) throw Error(ErrorKind::invalid_argument, "jump coefficients must be >= 0");
  }
}

GeneratorSpec GeneratorSpec::radial(std::shared_ptr<const RootSystem> system, Multiplicity k) {
  const auto m = static_cast<Eigen::Index>(system ? system->positive_count() : 0);
  return GeneratorSpec(std::move(system), std::move(k), Vector::Zero(m));
}

GeneratorSpec GeneratorSpec::dunkl(std::shared_ptr<const RootSystem> system, Multiplicity k) {
  Vector jump = k.positive_values(*system);
  return GeneratorSpec(std::move(system), std::move(k), std::move(jump));
}

GeneratorSpec GeneratorSpec::two_parameter(std::shared_ptr<const RootSystem> system,
                                           Multiplicity k, const Multiplicity& jump) {
  Vector coeffs = jump.positive_values(*system);
  return GeneratorSpec(std::move(system), std::move(k), std::move(coeffs));
}

GeneratorSpec GeneratorSpec::partial(std::shared_ptr<const RootSystem> system, Multiplicity k,
                                     std::size_t active_prefix) {
  if (active_prefix > system->positive_count()) {
    throw Error(ErrorKind::index_out_of_range, "partial generator index exceeds |R_+|");
  }
  Vector jump = k.positive_values(*system);
  for (auto i = static_cast<Eigen::Index>(active_prefix); i < jump.size(); ++i) jump[i] = 0.0;
  return GeneratorSpec(std::move(system), std::move(k), std::move(jump));
}

GeneratorSpec GeneratorSpec::with_point_jump(double rate, Vector alpha) const {
  if (!(rate >= 0.0)) throw Error(ErrorKind::invalid_argument, "point-jump rate must be >= 0");
  if (static_cast<std::size_t>(alpha.size()) != system_->dimension()) {
    throw Error(ErrorKind::dimension_mismatch, "point-jump direction has the wrong dimension");
  }
  GeneratorSpec out = *this;
  out.point_ = PointJump{rate, normalize_roots({alpha}).front()};
  return out;
}

GeneratorSpec GeneratorSpec::with_jump_coefficients(Vector coefficients) const {
  GeneratorSpec out(system_, k_, std::move(coefficients));
  out.point_ = point_;
  return out;
}

// ---------------------------------------------------------------------------

Derivatives finite_differences(const TestFunction& u, const Vector& x,
                               const FiniteDifferenceOptions& opts) {
  const auto n = x.size();
  const double h = opts.relative_step * (1.0 + x.norm());
  auto eval = [&](const Vector& p) {
    if (!u.trusted_at(p)) {
      throw Error(ErrorKind::smoothness_region, "finite-difference stencil leaves the trusted region");
    }
    return u(p);
  };
  Derivatives d;
  d.value = eval(x);
  d.gradient.resize(n);
  d.second.resize(n);
  Vector p = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    p[i] = x[i] + h;
    const double fp = eval(p);
    p[i] = x[i] - h;
    const double fm = eval(p);
    double g = (fp - fm) / (2.0 * h);
    double s = (fp - 2.0 * d.value + fm) / (h * h);
    if (opts.richardson) {
      const double hh = 0.5 * h;
      p[i] = x[i] + hh;
      const double fp2 = eval(p);
      p[i] = x[i] - hh;
      const double fm2 = eval(p);
      const double g2 = (fp2 - fm2) / (2.0 * hh);
      const double s2 = (fp2 - 2.0 * d.value + fm2) / (hh * hh);
      g = (4.0 * g2 - g) / 3.0;
      s = (4.0 * s2 - s) / 3.0;
    }
    p[i] = x[i];
    d.gradient[i] = g;
    d.second[i] = s;
  }
  return d;
}

GeneratorValue apply_generator(const GeneratorSpec& spec, const TestFunction& u, const Vector& x,
                               const FiniteDifferenceOptions& opts) {
  const auto& system = spec.system();
  require_dimension(system, x);
  const Vector dots = system.positive_matrix().transpose() * x;
  const double tol = wall_tolerance(x);
  for (Eigen::Index i = 0; i < dots.size(); ++i) {
    if (std::abs(dots[i]) <= tol) throw Error(ErrorKind::wall_contact, "point lies on a wall");
  }
  const Derivatives d = finite_differences(u, x, opts);
  const Vector kpos = spec.k().positive_values(system);

  GeneratorValue out;
  out.diffusion_term = 0.5 * d.laplacian();
  out.scale = std::abs(out.diffusion_term);

  Vector b = Vector::Zero(x.size());
  for (Eigen::Index i = 0; i < dots.size(); ++i) {
    if (kpos[i] != 0.0) b += (kpos[i] / dots[i]) * system.positive_matrix().col(i);
  }
  out.drift_term = b.dot(d.gradient);
  out.scale += std::abs(out.drift_term);

  const Vector& c = spec.jump_coefficients();
  for (Eigen::Index i = 0; i < dots.size(); ++i) {
    if (c[i] == 0.0) continue;
    const Vector a = system.positive_matrix().col(i);
    const double term = c[i] * (u(reflect(a, x)) - d.value) / (dots[i] * dots[i]);
    out.jump_term += term;
    out.scale += std::abs(term);
  }
  if (const auto& pj = spec.point_jump(); pj && pj->rate != 0.0) {
    out.point_term = pj->rate * (u(reflect(pj->alpha, x)) - d.value);
    out.scale += std::abs(out.point_term);
  }
  out.value = out.diffusion_term + out.drift_term + out.jump_term + out.point_term;
  return out;
}

Residual harmonicity_residual(HarmonicTarget which, std::shared_ptr<const RootSystem> system,
                              const Multiplicity& k, const Vector& x,
                              const FiniteDifferenceOptions& opts) {
  const RootSystem& rs = *system;
  require_chamber(rs, x, "harmonicity check");
  const double h = opts.relative_step * (1.0 + x.norm());
  const Vector dots = rs.positive_matrix().transpose() * x;
  if (dots.minCoeff() < 10.0 * h) {
    throw Error(ErrorKind::domain_error, "point is closer than 10h to a wall");
  }
  auto in_chamber = [system](const Vector& p) {
    return (system->positive_matrix().transpose() * p).minCoeff() > 0.0;
  };

  switch (which) {
    case HarmonicTarget::delta:
    case HarmonicTarget::delta_bar: {
      TestFunction u;
      if (which == HarmonicTarget::delta) {
        u.fn = [system, k](const Vector& p) { return dunkl::delta(*system, k, p); };
      } else {
        u.fn = [system, k](const Vector& p) { return dunkl::delta_bar(*system, k, p); };
      }
      u.domain = in_chamber;
      const auto g = apply_generator(GeneratorSpec::radial(system, k), u, x, opts);
      return {g.value, g.scale};
    }
    case HarmonicTarget::pi: {
      TestFunction u{[system](const Vector& p) { return pi_product(*system, p); }};
      const auto d = finite_differences(u, x, opts);
      return {d.laplacian(), d.second.cwiseAbs().sum()};
    }
    case HarmonicTarget::pi_power_identity: {
      if (!k.is_uniform()) {
        throw Error(ErrorKind::invalid_argument, "the π-power identity needs a uniform multiplicity");
      }
      const double kv = k.per_orbit().front();
      TestFunction f{[system, kv](const Vector& p) {
                       return checked_power(pi_product(*system, p), 1.0 - 2.0 * kv);
                     },
                     std::numeric_limits<double>::infinity(), in_chamber};
      TestFunction g{[system, kv](const Vector& p) { return kv * std::log(pi_product(*system, p)); },
                     std::numeric_limits<double>::infinity(), in_chamber};
      const auto df = finite_differences(f, x, opts);
      const auto dg = finite_differences(g, x, opts);
      const double lap = df.laplacian();
      const double cross = 2.0 * df.gradient.dot(dg.gradient);
      return {lap + cross, std::abs(lap) + std::abs(cross)};
    }
  }
  throw Error(ErrorKind::invalid_argument, "unknown harmonic target");
}

GeneratorSpec rotate_spec(const GeneratorSpec& spec, const Matrix& theta) {
  auto rotated = std::make_shared<const RootSystem>(spec.system().transformed(theta));
  Multiplicity k(*rotated, spec.k().per_orbit());
  GeneratorSpec out = GeneratorSpec::radial(rotated, k).with_jump_coefficients(spec.jump_coefficients());
  if (const auto& pj = spec.point_jump()) out = out.with_point_jump(pj->rate, theta * pj->alpha);
  return out;
}

}  // namespace dunkl
