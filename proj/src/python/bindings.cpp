#include "dunkl/battery.hpp"
#include "dunkl/error.hpp"
#include "dunkl/jump_lift.hpp"
#include "dunkl/rng.hpp"
#include "dunkl/run_config.hpp"
#include "dunkl/serialization.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dunkl;

namespace {

using SystemPtr = std::shared_ptr<RootSystem>;

HarmonicTarget target_from_string(const std::string& name) {
  if (name == "delta") return HarmonicTarget::delta;
  if (name == "delta_bar") return HarmonicTarget::delta_bar;
  if (name == "pi") return HarmonicTarget::pi;
  if (name == "pi_power_identity") return HarmonicTarget::pi_power_identity;
  throw Error(ErrorKind::invalid_argument, "unknown target '" + name + "'");
}

SimulationConfig make_config(double T, double dt, std::size_t paths, std::uint64_t seed,
                             const std::string& wall_policy, std::size_t record_stride) {
  SimulationConfig c;
  c.horizon = T;
  c.dt = dt;
  c.paths = paths;
  c.seed = seed;
  c.wall_policy = wall_policy_from_string(wall_policy);
  c.record_stride = record_stride;
  c.validate();
  return c;
}

py::dict trajectory_dict(const Trajectory& t) {
  Matrix states(static_cast<Eigen::Index>(t.states.size()),
                t.states.empty() ? 0 : t.states.front().size());
  for (std::size_t i = 0; i < t.states.size(); ++i) states.row(static_cast<Eigen::Index>(i)) = t.states[i];
  py::list jumps;
  for (const auto& e : t.jumps) {
    py::dict j;
    j["time"] = e.time;
    j["level"] = e.level;
    j["root"] = e.root;
    j["pre"] = e.pre;
    j["post"] = e.post;
    jumps.append(j);
  }
  py::dict d;
  d["times"] = t.times;
  d["states"] = states;
  d["jumps"] = jumps;
  d["termination"] = to_string(t.termination);
  d["end_time"] = t.end_time;
  d["artifact"] = t.artifact;
  return d;
}

py::list run_paths(const PathSimulator& sim, std::size_t paths, unsigned threads) {
  std::vector<Trajectory> out(paths);
  {
    py::gil_scoped_release release;
    parallel_for(paths, threads, [&](std::size_t i) { out[i] = sim.trajectory(i); });
  }
  py::list result;
  for (const auto& t : out) result.append(trajectory_dict(t));
  return result;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dunkl process simulation and verification";

  py::register_exception<Error>(m, "DunklError", PyExc_ValueError);

  py::class_<RootSystem, SystemPtr>(m, "RootSystem")
      .def_static("type_a", [](int n) { return std::make_shared<RootSystem>(build_type_a(n)); })
      .def_static("type_b", [](int n) { return std::make_shared<RootSystem>(build_type_b(n)); })
      .def_static("rank_one", [] { return std::make_shared<RootSystem>(build_rank_one()); })
      .def_static("from_roots",
                  [](const std::vector<Vector>& roots) {
                    return std::make_shared<RootSystem>(RootSystem::from_roots(roots));
                  })
      .def("with_enumeration",
           [](const RootSystem& s, const std::vector<std::size_t>& e) {
             return std::make_shared<RootSystem>(s.with_enumeration(e));
           })
      .def_property_readonly("dimension", &RootSystem::dimension)
      .def_property_readonly("roots",
                             [](const RootSystem& s) {
                               Matrix r(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.dimension()));
                               for (std::size_t i = 0; i < s.size(); ++i) r.row(static_cast<Eigen::Index>(i)) = s.root(i);
                               return r;
                             })
      .def_property_readonly("positive", &RootSystem::positive)
      .def_property_readonly("orbits", &RootSystem::orbits)
      .def_property_readonly("weyl_order", [](const RootSystem& s) { return s.weyl_group().size(); })
      .def("invariance", [](const RootSystem& s, std::size_t i) { return check_invariance_condition(s, i); },
           py::arg("i"))
      .def("chamber_contains",
           [](const RootSystem& s, const Vector& x) {
             switch (chamber_contains(s, x)) {
               case ChamberMembership::interior: return "interior";
               case ChamberMembership::boundary: return "boundary";
               default: return "exterior";
             }
           })
      .def("project_to_chamber", [](const RootSystem& s, const Vector& x) {
        const auto p = project_to_chamber(s, x);
        return py::make_tuple(p.point, p.element);
      });

  m.def("reflect", &reflect, py::arg("alpha"), py::arg("x"));

  m.def(
      "harmonicity_residual",
      [](const SystemPtr& s, const std::vector<double>& k, const Vector& x, const std::string& target) {
        const auto r = harmonicity_residual(target_from_string(target), s, Multiplicity(*s, k), x);
        return py::make_tuple(r.residual, r.scale);
      },
      py::arg("system"), py::arg("k"), py::arg("x"), py::arg("target") = "delta");

  m.def(
      "simulate_radial",
      [](const SystemPtr& s, const std::vector<double>& k, const Vector& x0, double T, double dt,
         std::size_t paths, std::uint64_t seed, const std::string& wall_policy, std::size_t record_stride,
         unsigned threads) {
        const RadialSimulator sim(s, Multiplicity(*s, k), x0, make_config(T, dt, paths, seed, wall_policy, record_stride));
        return run_paths(sim, paths, threads);
      },
      py::arg("system"), py::arg("k"), py::arg("x0"), py::arg("T") = 1.0, py::arg("dt") = 1e-3,
      py::arg("paths") = 1, py::arg("seed") = 0, py::arg("wall_policy") = "auto", py::arg("record_stride") = 1,
      py::arg("threads") = 1);

  m.def(
      "simulate_dunkl",
      [](const SystemPtr& s, const std::vector<double>& k, const Vector& x0, double T, double dt,
         std::size_t paths, std::uint64_t seed, const std::string& mode,
         const std::optional<std::vector<double>>& k_prime,
         const std::optional<std::vector<std::size_t>>& enumeration, std::size_t record_stride, unsigned threads) {
        std::optional<Multiplicity> jump;
        if (k_prime) jump = Multiplicity(*s, *k_prime);
        const auto sim = make_dunkl_simulator(s, Multiplicity(*s, k), jump, enumeration, x0,
                                              make_config(T, dt, paths, seed, "auto", record_stride),
                                              mode_request_from_string(mode));
        return run_paths(sim, paths, threads);
      },
      py::arg("system"), py::arg("k"), py::arg("x0"), py::arg("T") = 1.0, py::arg("dt") = 1e-3,
      py::arg("paths") = 1, py::arg("seed") = 0, py::arg("mode") = "auto", py::arg("k_prime") = py::none(),
      py::arg("enumeration") = py::none(), py::arg("record_stride") = 1, py::arg("threads") = 1);

  m.def(
      "verify_harmonic_json",
      [](const SystemPtr& s, const std::vector<double>& k, std::size_t points, std::uint64_t seed) {
        return reports_to_json(harmonicity_checks(s, Multiplicity(*s, k), points, seed)).dump();
      },
      py::arg("system"), py::arg("k"), py::arg("points") = 100, py::arg("seed") = 1);

  m.def(
      "verify_suite_json",
      [](const std::string& config, const std::vector<std::string>& sets, unsigned threads) {
        const RunConfig cfg = load_run_config(config, sets);
        Suite suite;
        {
          py::gil_scoped_release release;
          suite = run_standard_battery(battery_config(cfg, threads));
        }
        return reports_to_json(suite.reports).dump();
      },
      py::arg("config"), py::arg("sets") = std::vector<std::string>{}, py::arg("threads") = 1);

  m.def("philox4x32", &philox4x32, py::arg("counter"), py::arg("key"));
}
