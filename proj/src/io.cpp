#include "dfsim/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "dfsim/errors.hpp"

namespace dfsim {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<double>& times, const std::vector<CsvColumn>& columns) {
  for (const auto& c : columns) {
    if (c.values.size() != times.size()) throw DimensionError("CSV column '" + c.name + "' has wrong length");
  }
  out << 't';
  for (const auto& c : columns) out << ',' << c.name;
  out << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << format_double(times[i]);
    for (const auto& c : columns) out << ',' << format_double(c.values[i]);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<double>& times,
               const std::vector<CsvColumn>& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_csv(out, times, columns);
}

void write_state_dump(std::ostream& out, const Trajectory& traj) {
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out << format_double(traj.times[i]);
    const CMatrix& m = traj.states[i].matrix();
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) {
        out << ',' << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag());
      }
    }
    out << '\n';
  }
}

}  // namespace dfsim
