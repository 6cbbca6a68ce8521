#include "dunkl/trajectory_io.hpp"

#include "dunkl/error.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace dunkl {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_header(std::ostream& out, std::size_t dimension) {
  out << "path_id,t";
  for (std::size_t i = 1; i <= dimension; ++i) out << ",x_" << i;
  out << ",event\n";
}

namespace {

void row(std::ostream& out, std::uint64_t id, double t, const Vector& x, const std::string& event) {
  out << id << ',' << format_double(t);
  for (Eigen::Index i = 0; i < x.size(); ++i) out << ',' << format_double(x[i]);
  out << ',' << event << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_trajectory_rows(std::ostream& out, std::uint64_t path_id, const Trajectory& tr) {
  std::size_t next_jump = 0;
  for (std::size_t j = 0; j < tr.states.size(); ++j) {
    const double t = tr.times[j];
    while (next_jump < tr.jumps.size() && tr.jumps[next_jump].time <= t) {
      const auto& e = tr.jumps[next_jump++];
      row(out, path_id, e.time, e.post, "jump:" + std::to_string(e.root));
    }
    const bool last = j + 1 == tr.states.size();
    row(out, path_id, t, tr.states[j], last && tr.termination == Termination::wall_hit ? "T0" : "");
  }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::io_error, "empty trajectory file");
  const auto header = split(line);
  if (header.size() < 3 || header.front() != "path_id" || header[1] != "t" || header.back() != "event")
    throw Error(ErrorKind::io_error, "unexpected trajectory header");
  const std::size_t n = header.size() - 3;
  std::vector<TrajectoryRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != n + 3)
      throw Error(ErrorKind::io_error, "line " + std::to_string(lineno) + ": wrong number of fields");
    TrajectoryRow r;
    try {
      r.path_id = std::stoull(cells[0]);
      r.t = std::stod(cells[1]);
      r.x.resize(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) r.x[static_cast<Eigen::Index>(i)] = std::stod(cells[2 + i]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::io_error, "line " + std::to_string(lineno) + ": malformed number");
    }
    r.event = cells.back();
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_plot_summary(std::ostream& out, const std::vector<TrajectoryRow>& rows, std::size_t bins) {
  if (bins == 0) throw Error(ErrorKind::invalid_argument, "need at least one bin");
  out << "t_start,t_end,rows";
  const std::size_t n = rows.empty() ? 0 : static_cast<std::size_t>(rows.front().x.size());
  for (std::size_t i = 1; i <= n; ++i) out << ",mean_x_" << i;
  out << ",mean_norm2,jumps,T0\n";
  if (rows.empty()) return;
  double tmax = 0.0;
  for (const auto& r : rows) tmax = std::max(tmax, r.t);
  const double width = tmax > 0.0 ? tmax / static_cast<double>(bins) : 1.0;
  std::vector<std::size_t> count(bins, 0), jumps(bins, 0), hits(bins, 0);
  std::vector<Vector> sum(bins, Vector::Zero(static_cast<Eigen::Index>(n)));
  std::vector<double> norm2(bins, 0.0);
  for (const auto& r : rows) {
    auto b = static_cast<std::size_t>(r.t / width);
    b = std::min(b, bins - 1);
    if (r.event.rfind("jump:", 0) == 0) {
      ++jumps[b];
      continue;
    }
    if (r.event == "T0") ++hits[b];
    ++count[b];
    sum[b] += r.x;
    norm2[b] += r.x.squaredNorm();
  }
  for (std::size_t b = 0; b < bins; ++b) {
    out << format_double(width * static_cast<double>(b)) << ',' << format_double(width * static_cast<double>(b + 1))
        << ',' << count[b];
    const double c = count[b] ? static_cast<double>(count[b]) : 1.0;
    for (std::size_t i = 0; i < n; ++i) out << ',' << format_double(sum[b][static_cast<Eigen::Index>(i)] / c);
    out << ',' << format_double(norm2[b] / c) << ',' << jumps[b] << ',' << hits[b] << '\n';
  }
}

}  // namespace dunkl
