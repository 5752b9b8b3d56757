#pragma once

// Plain-text export of trajectories.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfsim/dynamics.hpp"

namespace dfsim {

struct CsvColumn {
  std::string name;
  std::vector<double> values;
};

/// Shortest round-trip decimal representation, '.' separator.
[[nodiscard]] std::string format_double(double value);

/// Header `t,<name>...`, one row per time, LF line endings.
void write_csv(std::ostream& out, const std::vector<double>& times, const std::vector<CsvColumn>& columns);
void write_csv(const std::filesystem::path& path, const std::vector<double>& times,
               const std::vector<CsvColumn>& columns);

/// One line per sample: t followed by Re, Im of every entry in row-major order.
void write_state_dump(std::ostream& out, const Trajectory& traj);

}  // namespace dfsim
