#include "dunkl/serialization.hpp"

#include "dunkl/error.hpp"

#include <cmath>

namespace dunkl {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key))
    throw Error(ErrorKind::schema_error, std::string("/") + key + ": missing");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::schema_error, std::string("/") + key + ": wrong type");
  }
}

}  // namespace

json root_system_to_json(const RootSystem& system) {
  json roots = json::array();
  for (const auto& r : system.roots()) roots.push_back(std::vector<double>(r.data(), r.data() + r.size()));
  return {{"dimension", system.dimension()},
          {"roots", roots},
          {"positive", system.positive()},
          {"orbits", system.orbits()}};
}

RootSystem root_system_from_json(const json& doc) {
  const auto dim = field<std::size_t>(doc, "dimension");
  const auto raw = field<std::vector<std::vector<double>>>(doc, "roots");
  std::vector<Vector> roots;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].size() != dim)
      throw Error(ErrorKind::schema_error, "/roots/" + std::to_string(i) + ": wrong dimension");
    roots.push_back(Eigen::Map<const Vector>(raw[i].data(), static_cast<Eigen::Index>(dim)));
  }
  std::optional<std::vector<std::size_t>> positive;
  if (doc.contains("positive")) positive = field<std::vector<std::size_t>>(doc, "positive");
  RootSystem sys = RootSystem::from_roots(roots, positive);
  if (doc.contains("orbits") && field<std::vector<std::vector<std::size_t>>>(doc, "orbits") != sys.orbits())
    throw Error(ErrorKind::schema_error, "/orbits: does not match the orbits of the roots");
  return sys;
}

json lift_plan_to_json(const LiftPlan& plan) {
  json e = json::array(), m = json::array(), r = json::array();
  for (const auto& lv : plan.levels()) {
    e.push_back(lv.root);
    m.push_back(to_string(lv.mode));
    r.push_back(lv.rate);
  }
  return {{"enumeration", e}, {"modes", m}, {"rates", r}};
}

LiftPlan lift_plan_from_json(std::shared_ptr<const RootSystem> system, const json& doc) {
  const auto e = field<std::vector<std::size_t>>(doc, "enumeration");
  const auto m = field<std::vector<std::string>>(doc, "modes");
  const auto r = field<std::vector<double>>(doc, "rates");
  if (e.size() != m.size() || e.size() != r.size())
    throw Error(ErrorKind::schema_error, "/modes: enumeration, modes and rates differ in length");
  std::vector<LiftLevel> levels;
  for (std::size_t i = 0; i < e.size(); ++i) levels.push_back({e[i], r[i], lift_mode_from_string(m[i])});
  return LiftPlan(std::move(system), std::move(levels));
}

json report_to_json(const Report& r) {
  return {{"name", r.name},
          {"criterion", r.criterion},
          {"estimate", number_or_null(r.estimate)},
          {"target", number_or_null(r.target)},
          {"standard_error", number_or_null(r.standard_error)},
          {"tolerance", number_or_null(r.tolerance)},
          {"p_value", number_or_null(r.p_value)},
          {"significance", number_or_null(r.significance)},
          {"sample_size", r.sample_size},
          {"passed", r.passed},
          {"skipped", r.skipped},
          {"negative_control", r.negative_control},
          {"satisfied", r.satisfied()},
          {"runtime_seconds", r.runtime_seconds},
          {"detail", r.detail}};
}

json reports_to_json(const std::vector<Report>& reports) {
  json out = json::array();
  for (const auto& r : reports) out.push_back(report_to_json(r));
  return out;
}

}  // namespace dunkl
