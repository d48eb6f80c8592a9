#include "edgeworth/csv.hpp"

#include <array>
#include <charconv>

#include "edgeworth/errors.hpp"

namespace edgeworth {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf.data(), ptr);
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  if (trajectory.size() == 0) return;
  const int m = trajectory.states.front().goods();
  const int n = trajectory.states.front().agents();
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= m; ++k) header.push_back("x_" + std::to_string(i) + "_" + std::to_string(k));
  }
  for (int i = 1; i <= n; ++i) header.push_back("U_" + std::to_string(i));
  header.push_back("potential");
  write_csv_row(os, header);

  std::vector<std::string> row;
  for (std::size_t s = 0; s < trajectory.size(); ++s) {
    row.clear();
    row.push_back(format_double(trajectory.times[s]));
    const Matrix& x = trajectory.states[s].holdings();
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) row.push_back(format_double(x(k, i)));
    }
    for (int i = 0; i < n; ++i) row.push_back(format_double(trajectory.utilities[s][i]));
    row.push_back(format_double(trajectory.potentials[s]));
    write_csv_row(os, row);
  }
}

}  // namespace edgeworth
