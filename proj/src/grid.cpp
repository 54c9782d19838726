#include "quso/grid.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "quso/util.hpp"

namespace quso {

std::vector<int> PowerGrid::degrees() const {
  std::vector<int> d(static_cast<std::size_t>(num_buses), 0);
  for (const auto& line : lines) {
    ++d[static_cast<std::size_t>(line.i - 1)];
    ++d[static_cast<std::size_t>(line.j - 1)];
  }
  return d;
}

std::vector<std::vector<std::pair<int, int>>> PowerGrid::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(num_buses));
  for (int e = 0; e < num_lines(); ++e) {
    const auto& line = lines[static_cast<std::size_t>(e)];
    adj[static_cast<std::size_t>(line.i - 1)].emplace_back(e, line.j);
    adj[static_cast<std::size_t>(line.j - 1)].emplace_back(e, line.i);
  }
  return adj;
}

std::uint64_t PowerGrid::digest() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(num_buses));
  w.u32(static_cast<std::uint32_t>(reference_bus));
  for (const auto& line : lines) {
    w.u32(static_cast<std::uint32_t>(line.i));
    w.u32(static_cast<std::uint32_t>(line.j));
    w.f64(line.susceptance);
  }
  return fnv1a64(w.data());
}

bool is_connected(const PowerGrid& grid) {
  if (grid.num_buses <= 0) return false;
  auto adj = grid.adjacency();
  std::vector<char> seen(static_cast<std::size_t>(grid.num_buses), 0);
  std::vector<int> stack{1};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int bus = stack.back();
    stack.pop_back();
    for (auto [e, other] : adj[static_cast<std::size_t>(bus - 1)]) {
      if (!seen[static_cast<std::size_t>(other - 1)]) {
        seen[static_cast<std::size_t>(other - 1)] = 1;
        ++visited;
        stack.push_back(other);
      }
    }
  }
  return visited == grid.num_buses;
}

void validate_grid(const PowerGrid& grid) {
  if (grid.num_buses < 2) throw ValidationError("grid must have at least 2 buses");
  if (grid.reference_bus < 1 || grid.reference_bus > grid.num_buses)
    throw ValidationError("reference bus " + std::to_string(grid.reference_bus) + " out of range 1.." +
                          std::to_string(grid.num_buses));
  for (std::size_t e = 0; e < grid.lines.size(); ++e) {
    const auto& line = grid.lines[e];
    if (line.i == line.j) throw ValidationError("self-loop at bus " + std::to_string(line.i));
    if (line.i < 1 || line.j < 1 || line.i > grid.num_buses || line.j > grid.num_buses)
      throw ValidationError("line endpoint out of range: " + std::to_string(line.i) + "-" + std::to_string(line.j));
    if (line.i >= line.j) throw ValidationError("line endpoints must satisfy i < j");
    if (!(line.susceptance > 0.0))
      throw ValidationError("non-positive susceptance on line " + std::to_string(line.i) + "-" +
                            std::to_string(line.j));
    if (e > 0) {
      const auto& prev = grid.lines[e - 1];
      if (prev.i == line.i && prev.j == line.j)
        throw ValidationError("duplicate line " + std::to_string(line.i) + "-" + std::to_string(line.j));
      if (std::pair{prev.i, prev.j} > std::pair{line.i, line.j})
        throw ValidationError("lines not sorted by (i, j)");
    }
  }
  if (!is_connected(grid)) throw ValidationError("disconnected graph: not all buses reachable from bus 1");
}

namespace {

std::string_view trimmed(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Fixed-column field, 1-based inclusive columns; short lines yield the
// available suffix.
std::string_view field(std::string_view line, std::size_t first, std::size_t last) {
  if (line.size() < first) return {};
  return trimmed(line.substr(first - 1, last - first + 1));
}

int parse_int_field(std::string_view f, int line_no, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
  if (ec != std::errc() || ptr != f.data() + f.size())
    throw ParseError("line " + std::to_string(line_no) + ": non-numeric " + what + " '" + std::string(f) + "'");
  return value;
}

double parse_double_field(std::string_view f, int line_no, const char* what) {
  std::string buf(f);
  char* end = nullptr;
  double value = std::strtod(buf.c_str(), &end);
  if (f.empty() || end != buf.c_str() + buf.size())
    throw ParseError("line " + std::to_string(line_no) + ": non-numeric " + what + " '" + buf + "'");
  return value;
}

bool is_sentinel(std::string_view line) { return field(line, 1, 4) == "-999"; }

}  // namespace

PowerGrid parse_cdf(std::istream& in) {
  std::string raw;
  std::vector<int> bus_ids;
  struct Branch {
    int from;
    int to;
    double reactance;
  };
  std::vector<Branch> branches;

  int line_no = 0;
  bool saw_title = false;
  bool saw_bus_section = false;
  bool saw_branch_section = false;

  enum class Section { None, Bus, Branch };
  Section section = Section::None;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!saw_title) {
      if (trimmed(line).empty()) continue;
      saw_title = true;
      continue;
    }

    if (section == Section::None) {
      auto t = trimmed(line);
      if (t.empty()) continue;
      if (t.starts_with("BUS DATA")) {
        if (saw_bus_section) throw ParseError("line " + std::to_string(line_no) + ": duplicate BUS DATA section");
        saw_bus_section = true;
        section = Section::Bus;
      } else if (t.starts_with("BRANCH DATA")) {
        if (!saw_bus_section)
          throw ParseError("line " + std::to_string(line_no) + ": malformed section header: BRANCH DATA before BUS DATA");
        if (saw_branch_section)
          throw ParseError("line " + std::to_string(line_no) + ": duplicate BRANCH DATA section");
        saw_branch_section = true;
        section = Section::Branch;
      }
      // other sections (LOSS ZONES, INTERCHANGE, TIE LINES, END OF DATA) are skipped
      continue;
    }

    if (is_sentinel(line)) {
      section = Section::None;
      continue;
    }
    if (trimmed(line).empty()) continue;

    if (section == Section::Bus) {
      bus_ids.push_back(parse_int_field(field(line, 1, 4), line_no, "bus number"));
    } else {
      Branch b;
      b.from = parse_int_field(field(line, 1, 4), line_no, "tap bus number");
      b.to = parse_int_field(field(line, 6, 9), line_no, "z bus number");
      b.reactance = parse_double_field(field(line, 30, 39), line_no, "reactance");
      if (b.reactance == 0.0)
        throw ParseError("line " + std::to_string(line_no) + ": zero reactance on branch " +
                         std::to_string(b.from) + "-" + std::to_string(b.to));
      if (b.reactance < 0.0)
        throw ParseError("line " + std::to_string(line_no) + ": negative reactance on branch " +
                         std::to_string(b.from) + "-" + std::to_string(b.to));
      branches.push_back(b);
    }
  }

  if (section != Section::None) throw ParseError("unterminated section: no -999 sentinel before end of file");
  if (!saw_bus_section) throw ParseError("malformed section header: missing BUS DATA section");
  if (!saw_branch_section) throw ParseError("malformed section header: missing BRANCH DATA section");
  if (bus_ids.empty()) throw ParseError("BUS DATA section contains no records");

  // contiguous re-indexing in ascending original id order
  std::vector<int> sorted_ids = bus_ids;
  std::sort(sorted_ids.begin(), sorted_ids.end());
  std::map<int, int> index_of;
  for (std::size_t k = 0; k < sorted_ids.size(); ++k) {
    if (!index_of.emplace(sorted_ids[k], static_cast<int>(k + 1)).second)
      throw ParseError("duplicate bus id " + std::to_string(sorted_ids[k]));
  }

  PowerGrid grid;
  grid.num_buses = static_cast<int>(bus_ids.size());
  grid.reference_bus = grid.num_buses;

  std::map<std::pair<int, int>, double> merged;
  for (const auto& b : branches) {
    auto fi = index_of.find(b.from);
    auto ti = index_of.find(b.to);
    if (fi == index_of.end() || ti == index_of.end())
      throw ParseError("branch references unknown bus " + std::to_string(fi == index_of.end() ? b.from : b.to));
    int i = fi->second;
    int j = ti->second;
    if (i == j) throw ParseError("self-loop branch at bus " + std::to_string(b.from));
    if (i > j) std::swap(i, j);
    merged[{i, j}] += 1.0 / b.reactance;
  }
  grid.lines.reserve(merged.size());
  for (const auto& [key, susceptance] : merged) grid.lines.push_back({key.first, key.second, susceptance});

  validate_grid(grid);
  return grid;
}

PowerGrid parse_cdf(const std::string& text) {
  std::istringstream in(text);
  return parse_cdf(in);
}

PowerGrid parse_cdf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open case file: " + path);
  return parse_cdf(in);
}

nlohmann::json grid_to_json(const PowerGrid& grid) {
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& line : grid.lines) lines.push_back({{"i", line.i}, {"j", line.j}, {"b", line.susceptance}});
  return {{"buses", grid.num_buses}, {"reference_bus", grid.reference_bus}, {"lines", std::move(lines)}};
}

PowerGrid grid_from_json(const nlohmann::json& j) {
  PowerGrid grid;
  grid.num_buses = j.at("buses").get<int>();
  grid.reference_bus = j.at("reference_bus").get<int>();
  for (const auto& item : j.at("lines"))
    grid.lines.push_back({item.at("i").get<int>(), item.at("j").get<int>(), item.at("b").get<double>()});
  std::sort(grid.lines.begin(), grid.lines.end(),
            [](const Line& a, const Line& b) { return std::pair{a.i, a.j} < std::pair{b.i, b.j}; });
  validate_grid(grid);
  return grid;
}

}  // namespace quso
