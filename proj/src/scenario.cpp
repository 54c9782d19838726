#include "quso/scenario.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "quso/rng.hpp"
#include "quso/util.hpp"

namespace quso {

std::uint64_t Scenario::digest() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(grid.num_buses));
  w.u32(static_cast<std::uint32_t>(grid.reference_bus));
  for (const auto& line : grid.lines) {
    w.u32(static_cast<std::uint32_t>(line.i));
    w.u32(static_cast<std::uint32_t>(line.j));
    w.f64(line.susceptance);
  }
  for (int g : generators) w.u32(static_cast<std::uint32_t>(g));
  w.f64(capacity_per_generator);
  w.f64(total_capacity);
  for (double v : load_injection) w.f64(v);
  for (double c : line_costs) w.f64(c);
  w.f64(load_fraction);
  w.u64(seed);
  return fnv1a64(w.data());
}

Scenario generate_scenario(const PowerGrid& grid, int num_generators, double total_capacity,
                           double load_fraction, std::uint64_t seed, const ScenarioOptions& options) {
  validate_grid(grid);
  if (num_generators < 1 || num_generators > grid.num_buses)
    throw ValidationError("num_generators " + std::to_string(num_generators) + " out of range 1.." +
                          std::to_string(grid.num_buses));
  if (!(load_fraction > 0.0) || load_fraction > 1.0)
    throw ValidationError("load_fraction must lie in (0, 1]");
  if (!(total_capacity > 0.0)) throw ValidationError("total_capacity must be positive");

  Scenario s;
  s.grid = grid;
  s.total_capacity = total_capacity;
  s.capacity_per_generator = total_capacity / num_generators;
  s.load_fraction = load_fraction;
  s.seed = seed;

  auto assign = Rng::stream(seed, stream_id::kGeneratorAssignment);
  auto picks = assign.sample_without_replacement(static_cast<std::size_t>(grid.num_buses),
                                                 static_cast<std::size_t>(num_generators));
  s.generators.reserve(picks.size());
  for (auto p : picks) s.generators.push_back(static_cast<int>(p) + 1);

  std::vector<char> is_generator(static_cast<std::size_t>(grid.num_buses), 0);
  for (int g : s.generators) is_generator[static_cast<std::size_t>(g - 1)] = 1;

  auto loads = Rng::stream(seed, stream_id::kLoadSampling);
  std::vector<double> raw(static_cast<std::size_t>(grid.num_buses), 0.0);
  double raw_sum = 0.0;
  for (int bus = 1; bus <= grid.num_buses; ++bus) {
    if (is_generator[static_cast<std::size_t>(bus - 1)]) continue;
    double v = loads.uniform_open_closed();
    raw[static_cast<std::size_t>(bus - 1)] = v;
    raw_sum += v;
  }
  if (raw_sum <= 0.0) throw ValidationError("no load buses: all buses are generators");
  const double scale = load_fraction * total_capacity / raw_sum;
  s.load_injection.assign(static_cast<std::size_t>(grid.num_buses), 0.0);
  for (int bus = 1; bus <= grid.num_buses; ++bus)
    s.load_injection[static_cast<std::size_t>(bus - 1)] = -raw[static_cast<std::size_t>(bus - 1)] * scale;

  if (options.sample_line_costs) {
    auto costs = Rng::stream(seed, stream_id::kLineCosts);
    s.line_costs.reserve(grid.lines.size());
    for (std::size_t e = 0; e < grid.lines.size(); ++e) s.line_costs.push_back(0.5 + costs.uniform_double());
  } else {
    s.line_costs.assign(grid.lines.size(), 1.0);
  }
  return s;
}

Scenario truncate_generators(const Scenario& master, int k) {
  if (k < 1 || k > master.num_generators())
    throw ValidationError("cannot truncate to " + std::to_string(k) + " of " +
                          std::to_string(master.num_generators()) + " generators");
  Scenario s = master;
  s.generators.resize(static_cast<std::size_t>(k));
  s.capacity_per_generator = master.total_capacity / k;
  // dropped generator buses keep a zero load_injection entry: they inject nothing
  return s;
}

std::vector<double> injection_vector(const Scenario& scenario, std::uint64_t bits) {
  std::vector<double> p = scenario.load_injection;
  for (int b = 0; b < scenario.num_generators(); ++b) {
    if ((bits >> b) & 1u)
      p[static_cast<std::size_t>(scenario.generators[static_cast<std::size_t>(b)] - 1)] +=
          scenario.capacity_per_generator;
  }
  return p;
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
  nlohmann::json j = grid_to_json(scenario.grid);
  j["generators"] = scenario.generators;
  j["capacity_per_generator"] = scenario.capacity_per_generator;
  j["total_capacity"] = scenario.total_capacity;
  j["injections"] = scenario.load_injection;
  j["line_costs"] = scenario.line_costs;
  j["load_fraction"] = scenario.load_fraction;
  j["seed"] = scenario.seed;
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.grid = grid_from_json(j);
  s.generators = j.at("generators").get<std::vector<int>>();
  s.capacity_per_generator = j.at("capacity_per_generator").get<double>();
  s.total_capacity = j.at("total_capacity").get<double>();
  s.load_injection = j.at("injections").get<std::vector<double>>();
  s.line_costs = j.at("line_costs").get<std::vector<double>>();
  s.load_fraction = j.at("load_fraction").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  if (s.load_injection.size() != static_cast<std::size_t>(s.grid.num_buses))
    throw ValidationError("injections length does not match bus count");
  if (s.line_costs.size() != s.grid.lines.size())
    throw ValidationError("line_costs length does not match line count");
  return s;
}

}  // namespace quso
