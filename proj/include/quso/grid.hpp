#pragma once

// Power grid topology: buses, susceptance-weighted transmission lines and a
// reference bus. Grids are immutable after construction and safe to share.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace quso {

// Undirected transmission line between buses i < j (1-based), per-unit
// susceptance > 0. Parallel branches are merged by summing susceptances.
struct Line {
  int i = 0;
  int j = 0;
  double susceptance = 0.0;

  friend bool operator==(const Line&, const Line&) = default;
};

struct PowerGrid {
  int num_buses = 0;
  int reference_bus = 0;             // 1-based; defaults to num_buses
  std::vector<Line> lines;           // sorted by (i, j), one entry per pair

  int num_lines() const { return static_cast<int>(lines.size()); }

  std::vector<int> degrees() const;

  // neighbors[b] lists (line index, other endpoint) for bus b+1.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;

  std::uint64_t digest() const;

  friend bool operator==(const PowerGrid&, const PowerGrid&) = default;
};

// Throws ValidationError unless the grid is connected, self-loop free,
// duplicate free, has positive susceptances and a reference bus in range.
void validate_grid(const PowerGrid& grid);

bool is_connected(const PowerGrid& grid);

// Parses the fixed-column IEEE Common Data Format: a title card followed by
// "-999"-terminated BUS DATA and BRANCH DATA sections. Bus ids are re-indexed
// contiguously to 1..N in ascending order of the original ids; the reference
// bus is bus N. Line susceptance is 1/x from the branch reactance column; all
// other branch fields (resistance, charging, taps) are ignored.
PowerGrid parse_cdf(std::istream& in);
PowerGrid parse_cdf(const std::string& text);
PowerGrid parse_cdf_file(const std::string& path);

nlohmann::json grid_to_json(const PowerGrid& grid);
PowerGrid grid_from_json(const nlohmann::json& j);

}  // namespace quso
