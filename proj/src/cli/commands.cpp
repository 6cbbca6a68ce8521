#include "dunkl/commands.hpp"

#include "dunkl/battery.hpp"
#include "dunkl/error.hpp"
#include "dunkl/jump_lift.hpp"
#include "dunkl/run_config.hpp"
#include "dunkl/serialization.hpp"
#include "dunkl/trajectory_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace dunkl {

using nlohmann::json;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream s(text);
  std::string cell;
  while (std::getline(s, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_argument, "'" + text + "' is not a comma-separated list of numbers");
    }
  }
  if (out.empty()) throw Error(ErrorKind::invalid_argument, "empty number list");
  return out;
}

std::shared_ptr<const RootSystem> system_from_flags(const std::string& type, int n, const std::string& roots) {
  SystemChoice c;
  c.type = type;
  c.n = n;
  if (type == "custom") {
    json doc;
    try {
      doc = json::parse(roots);
    } catch (const json::exception&) {
      throw Error(ErrorKind::invalid_argument, "--roots must be a JSON array of vectors");
    }
    for (const auto& r : doc) {
      const auto v = r.get<std::vector<double>>();
      c.roots.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
  }
  return build_system(c);
}

std::string vec_text(const Vector& v) {
  std::ostringstream s;
  s << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s << (i ? ", " : "") << format_double(v[i] + 0.0);
  s << ")";
  return s.str();
}

// Writes to the configured path or to `fallback`.
template <class F>
void with_output(const std::string& path, std::ostream& fallback, F&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io_error, "cannot write '" + path + "'");
  write(f);
  if (!f) throw Error(ErrorKind::io_error, "write to '" + path + "' failed");
}

json trajectory_json(std::uint64_t id, const Trajectory& t) {
  json states = json::array(), jumps = json::array();
  for (const auto& x : t.states) states.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  for (const auto& e : t.jumps)
    jumps.push_back({{"time", e.time},
                     {"level", e.level},
                     {"root", e.root},
                     {"pre", std::vector<double>(e.pre.data(), e.pre.data() + e.pre.size())},
                     {"post", std::vector<double>(e.post.data(), e.post.data() + e.post.size())}});
  return {{"path_id", id}, {"times", t.times},     {"states", states},
          {"jumps", jumps}, {"termination", to_string(t.termination)}, {"end_time", t.end_time}};
}

std::vector<Trajectory> simulate_all(const PathSimulator& sim, std::size_t paths, unsigned threads) {
  std::vector<Trajectory> out(paths);
  parallel_for(paths, threads, [&](std::size_t i) { out[i] = sim.trajectory(i); });
  return out;
}

json write_trajectories(const RunConfig& cfg, const std::vector<Trajectory>& trs, std::size_t dim,
                        std::ostream& out) {
  with_output(cfg.output_path, out, [&](std::ostream& os) {
    if (cfg.output_format == "json") {
      json all = json::array();
      for (std::size_t i = 0; i < trs.size(); ++i) all.push_back(trajectory_json(i, trs[i]));
      os << all.dump() << '\n';
    } else {
      write_trajectory_header(os, dim);
      for (std::size_t i = 0; i < trs.size(); ++i) write_trajectory_rows(os, i, trs[i]);
    }
  });
  json summary;
  double norm2 = 0.0, jumps = 0.0;
  std::size_t hits = 0, failures = 0, artifacts = 0;
  for (const auto& t : trs) {
    norm2 += t.states.back().squaredNorm();
    jumps += static_cast<double>(t.jumps.size());
    hits += t.termination == Termination::wall_hit;
    failures += t.termination == Termination::step_failure;
    artifacts += t.artifact;
  }
  const double n = static_cast<double>(trs.size());
  summary["paths"] = trs.size();
  summary["T"] = cfg.sim.horizon;
  summary["dt"] = cfg.sim.dt;
  summary["seed"] = cfg.sim.seed;
  summary["mean_norm2_final"] = norm2 / n;
  summary["hit_fraction"] = static_cast<double>(hits) / n;
  summary["step_failure_fraction"] = static_cast<double>(failures) / n;
  summary["artifact_fraction"] = static_cast<double>(artifacts) / n;
  summary["mean_jumps"] = jumps / n;
  summary["wall_epsilon"] = cfg.sim.wall_epsilon;
  return summary;
}

void emit_summary(const RunConfig& cfg, const json& summary, std::ostream& out, std::ostream& err) {
  // Keep standard output clean for the trajectories when they go there.
  (cfg.output_path.empty() ? err : out) << summary.dump(2) << '\n';
}

int cmd_describe(const std::string& type, int n, const std::string& roots, const std::string& enumeration,
                 bool as_json, std::ostream& out) {
  auto sys = system_from_flags(type, n, roots);
  if (!enumeration.empty()) {
    std::vector<std::size_t> e;
    for (double v : parse_list(enumeration)) e.push_back(static_cast<std::size_t>(v));
    sys = std::make_shared<const RootSystem>(sys->with_enumeration(e));
  }
  std::vector<bool> inv;
  for (std::size_t i = 1; i <= sys->positive_count(); ++i) inv.push_back(check_invariance_condition(*sys, i));
  if (as_json) {
    json doc = root_system_to_json(*sys);
    doc["weyl_order"] = sys->weyl_group().size();
    doc["invariance"] = inv;
    out << doc.dump(2) << '\n';
    return 0;
  }
  out << "dimension: " << sys->dimension() << "\n";
  out << "roots (" << sys->size() << "):\n";
  for (std::size_t i = 0; i < sys->size(); ++i) out << "  [" << i << "] " << vec_text(sys->root(i)) << "\n";
  out << "orbits (" << sys->orbits().size() << "):";
  for (const auto& o : sys->orbits()) {
    out << " {";
    for (std::size_t j = 0; j < o.size(); ++j) out << (j ? "," : "") << o[j];
    out << "}";
  }
  out << "\nWeyl group order: " << sys->weyl_group().size() << "\n";
  out << "chamber: x.a > 0 for the positive roots\n";
  out << "  i  root   vector                          invariant\n";
  for (std::size_t i = 0; i < sys->positive_count(); ++i) {
    char line[160];
    std::snprintf(line, sizeof line, "%3zu  [%2zu]   %-30s  %s\n", i + 1, sys->positive()[i],
                  vec_text(sys->positive_root(i)).c_str(), inv[i] ? "true" : "false");
    out << line;
  }
  return 0;
}

int cmd_simulate_radial(const std::string& config, const std::vector<std::string>& sets, unsigned threads,
                        std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_run_config(config, sets);
  auto sys = build_system(cfg.system);
  if (cfg.enumeration) sys = std::make_shared<const RootSystem>(sys->with_enumeration(*cfg.enumeration));
  const Multiplicity k(*sys, cfg.k);
  SimulationConfig sc = cfg.sim;
  sc.threads = threads;
  const RadialSimulator sim(sys, k, cfg.x0, sc);
  const auto trs = simulate_all(sim, sc.paths, threads);
  json summary = write_trajectories(cfg, trs, sys->dimension(), out);
  summary["process"] = "radial";
  summary["target_mean_norm2"] =
      cfg.x0.squaredNorm() + (static_cast<double>(sys->dimension()) + 2.0 * k.gamma()) * sc.horizon;
  summary["wall_policy"] = to_string(sim.diffusion().policy());
  emit_summary(cfg, summary, out, err);
  return 0;
}

int cmd_simulate_dunkl(const std::string& config, const std::vector<std::string>& sets, const std::string& mode,
                       unsigned threads, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_run_config(config, sets);
  auto sys = build_system(cfg.system);
  const Multiplicity k(*sys, cfg.k);
  std::optional<Multiplicity> kp;
  if (cfg.k_prime) kp = Multiplicity(*sys, *cfg.k_prime);
  SimulationConfig sc = cfg.sim;
  sc.threads = threads;
  const auto sim = make_dunkl_simulator(sys, k, kp, cfg.enumeration, cfg.x0, sc, mode_request_from_string(mode));
  const auto trs = simulate_all(sim, sc.paths, threads);
  json summary = write_trajectories(cfg, trs, sys->dimension(), out);
  summary["process"] = cfg.k_prime ? "two-parameter" : "dunkl";
  summary["plan"] = lift_plan_to_json(sim.plan());
  summary["target_mean_norm2"] =
      cfg.x0.squaredNorm() + (static_cast<double>(sys->dimension()) + 2.0 * k.gamma()) * sc.horizon;
  emit_summary(cfg, summary, out, err);
  return 0;
}

int cmd_verify_harmonic(const std::string& type, int n, const std::string& roots, const std::string& k_text,
                        std::size_t points, std::uint64_t seed, const std::string& json_path, std::ostream& out) {
  auto sys = system_from_flags(type, n, roots);
  const Multiplicity k(*sys, orbit_values(*sys, parse_list(k_text), "--k"));
  const auto reports = harmonicity_checks(sys, k, points, seed);
  out << format_table(reports);
  if (!json_path.empty())
    with_output(json_path, out, [&](std::ostream& os) { os << reports_to_json(reports).dump(2) << '\n'; });
  for (const auto& r : reports)
    if (!r.satisfied()) return 1;
  return 0;
}

int cmd_verify_suite(const std::string& config, const std::vector<std::string>& sets, unsigned threads,
                     std::ostream& out) {
  const RunConfig cfg = load_run_config(config, sets);
  const Suite suite = run_standard_battery(battery_config(cfg, threads));
  out << format_table(suite.reports);
  const std::string doc = reports_to_json(suite.reports).dump(2);
  with_output(cfg.output_path, out, [&](std::ostream& os) { os << doc << '\n'; });
  return suite.all_satisfied() ? 0 : 1;
}

int cmd_export(const std::string& in_path, const std::string& out_path, std::size_t bins, std::ostream& out) {
  std::ifstream in(in_path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open '" + in_path + "'");
  const auto rows = read_trajectory_csv(in);
  with_output(out_path, out, [&](std::ostream& os) { write_plot_summary(os, rows, bins); });
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dunkl process simulation and verification lab", "dunkl_lab"};
  app.require_subcommand(1);

  std::string sys_type = "B", roots, k_text = "1", enumeration, config, mode = "auto", json_path, in_path, out_path;
  int n = 2;
  bool as_json = false;
  std::size_t points = 100, bins = 50;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::vector<std::string> sets;

  auto* describe = app.add_subcommand("describe", "Roots, orbits, Weyl group order and invariance table");
  describe->add_option("--system", sys_type, "A, B or custom")->check(CLI::IsMember({"A", "B", "custom"}));
  describe->add_option("--n", n, "Rank parameter");
  describe->add_option("--roots", roots, "JSON array of root vectors (custom)");
  describe->add_option("--enumeration", enumeration, "Comma-separated positive root indices");
  describe->add_flag("--json", as_json, "Emit JSON");

  auto add_sim = [&](CLI::App* sc) {
    sc->add_option("--config", config, "Run configuration (JSON)")->required();
    sc->add_option("--set", sets, "Override key.path=value")->allow_extra_args(false);
    sc->add_option("--threads", threads, "Worker threads (0 = auto)");
  };
  auto* radial = app.add_subcommand("simulate-radial", "Simulate the radial process");
  add_sim(radial);
  auto* dunkl = app.add_subcommand("simulate-dunkl", "Simulate the full jump process");
  add_sim(dunkl);
  dunkl->add_option("--mode", mode, "shortcut, general or auto")->check(CLI::IsMember({"shortcut", "general", "auto"}));

  auto* harmonic = app.add_subcommand("verify-harmonic", "Harmonicity residuals at random chamber points");
  harmonic->add_option("--system", sys_type, "A, B or custom")->check(CLI::IsMember({"A", "B", "custom"}));
  harmonic->add_option("--n", n, "Rank parameter");
  harmonic->add_option("--roots", roots, "JSON array of root vectors (custom)");
  harmonic->add_option("--k", k_text, "Per-orbit multiplicities, comma-separated");
  harmonic->add_option("--points", points, "Number of sample points");
  harmonic->add_option("--seed", seed, "Sampling seed");
  harmonic->add_option("--json", json_path, "Also write the reports as JSON to this file");

  auto* suite = app.add_subcommand("verify-suite", "Run the verification battery");
  add_sim(suite);

  auto* exporter = app.add_subcommand("export-plot-data", "Time-binned statistics of a trajectory CSV");
  exporter->add_option("--in", in_path, "Trajectory CSV")->required();
  exporter->add_option("--out", out_path, "Summary CSV (default: standard output)");
  exporter->add_option("--bins", bins, "Number of time bins");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*describe) return cmd_describe(sys_type, n, roots, enumeration, as_json, out);
    if (*radial) return cmd_simulate_radial(config, sets, threads, out, err);
    if (*dunkl) return cmd_simulate_dunkl(config, sets, mode, threads, out, err);
    if (*harmonic) return cmd_verify_harmonic(sys_type, n, roots, k_text, points, seed, json_path, out);
    if (*suite) return cmd_verify_suite(config, sets, threads, out);
    if (*exporter) return cmd_export(in_path, out_path, bins, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace dunkl
