#pragma once

#include "dunkl/radial_sde.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dunkl {

/// %.17g.
std::string format_double(double v);

/// Header `path_id,t,x_1,...,x_n,event`; grid rows carry an empty event, jump
/// rows the post-jump state with "jump:<root index>", and the last row of a
/// path stopped at the wall carries "T0".
void write_trajectory_header(std::ostream& out, std::size_t dimension);
void write_trajectory_rows(std::ostream& out, std::uint64_t path_id, const Trajectory& trajectory);

struct TrajectoryRow {
  std::uint64_t path_id = 0;
  double t = 0.0;
  Vector x;
  std::string event;
};

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

/// Time-binned statistics: bin start/end, rows, mean coordinates, mean ‖x‖²,
/// jump and T0 counts.
void write_plot_summary(std::ostream& out, const std::vector<TrajectoryRow>& rows, std::size_t bins);

}  // namespace dunkl
