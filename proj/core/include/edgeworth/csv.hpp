#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "edgeworth/integrate.hpp"

namespace edgeworth {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Columns: t, x_1_1..x_n_m (agent-major: agent i's goods are contiguous),
// U_1..U_n, potential.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

}  // namespace edgeworth
