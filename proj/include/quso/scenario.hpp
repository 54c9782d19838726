#pragma once

// A concrete unit-commitment instance on a grid: which buses host generators,
// how much each generator injects when switched on, per-bus loads and per-line
// cost factors. Deterministic in (grid, arguments, seed).

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "quso/grid.hpp"

namespace quso {

struct Scenario {
  PowerGrid grid;
  // Generator buses in draw order; bit b of a solution index switches
  // generators[b] (least-significant bit first).
  std::vector<int> generators;
  double capacity_per_generator = 0.0;  // MW injected by each switched-on generator
  double total_capacity = 0.0;          // MW, = capacity_per_generator * generators.size()
  // Per-bus injection from loads, <= 0 (consumption), 0 at generator buses.
  std::vector<double> load_injection;
  std::vector<double> line_costs;  // aligned with grid.lines
  double load_fraction = 0.0;      // sum of loads / total_capacity
  std::uint64_t seed = 0;

  int num_generators() const { return static_cast<int>(generators.size()); }
  std::uint64_t digest() const;
};

struct ScenarioOptions {
  // Line cost factors default to 1.0; optionally sample them uniformly in
  // [0.5, 1.5) from the seed's line-cost stream.
  bool sample_line_costs = false;
};

// Picks num_generators distinct buses with the seed's assignment stream, gives
// each a capacity of total_capacity / num_generators, samples raw loads in
// (0, 1] for every remaining bus and rescales them so total load equals
// load_fraction * total_capacity. Pure function of its arguments.
Scenario generate_scenario(const PowerGrid& grid, int num_generators, double total_capacity,
                           double load_fraction, std::uint64_t seed, const ScenarioOptions& options = {});

// Keeps the first k generators as decision variables and turns the remaining
// generator buses into zero-injection buses; loads are untouched, and the
// per-generator capacity is rescaled to total_capacity / k. Instances produced
// from one master scenario nest consistently across k.
Scenario truncate_generators(const Scenario& master, int k);

// Full-length injection vector p for a solution bitstring: +capacity at
// switched-on generators, the (negative) load injection elsewhere. Entry
// reference_bus-1 participates here and is dropped by the reduced solve.
std::vector<double> injection_vector(const Scenario& scenario, std::uint64_t bits);

nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

}  // namespace quso
