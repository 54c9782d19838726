#pragma once

// DC power flow on a scenario: reduced Laplacian solve for bus angles, signed
// per-line flows and the transmission-cost objective sum_lines c |flow|.

#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "quso/scenario.hpp"

namespace quso {

struct FlowSolution {
  std::vector<double> theta;       // bus angles, radians; theta[reference-1] == 0
  std::vector<double> line_flows;  // signed MW per line, oriented i -> j, aligned with grid.lines
  double cost = 0.0;               // sum over lines of cost_factor * |flow| (+ optional imbalance term)
};

nlohmann::json flow_to_json(const FlowSolution& solution);

// Grid Laplacian (off-diagonal -b_ij, diagonal sum_j b_ij) with the reference
// bus row and column removed; symmetric positive definite for connected grids.
// Returned dense, row-major, (N-1)^2 entries.
std::vector<double> reduced_laplacian(const PowerGrid& grid);

// Cholesky factorization of the reduced Laplacian, computed once per scenario
// and reused for every solution bitstring. Immutable after construction;
// concurrent solve()/cost() calls are safe.
class FlowSolver {
 public:
  // imbalance_penalty adds penalty * (sum_i p_i)^2 to the cost; the default 0
  // leaves imbalance to the reference bus, which absorbs it by construction.
  explicit FlowSolver(Scenario scenario, double imbalance_penalty = 0.0);
  ~FlowSolver();
  FlowSolver(FlowSolver&&) noexcept;
  FlowSolver& operator=(FlowSolver&&) noexcept;

  FlowSolution solve(std::uint64_t bits) const;
  FlowSolution solve_injection(const std::vector<double>& injection) const;

  // Cost only; same arithmetic as solve().
  double cost(std::uint64_t bits) const;

  const Scenario& scenario() const { return scenario_; }

 private:
  struct Impl;
  Scenario scenario_;
  double imbalance_penalty_;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience: factorizes, solves, discards.
FlowSolution solve_flow(const Scenario& scenario, std::uint64_t bits, double imbalance_penalty = 0.0);

// Independent verification oracle with the identical contract: dense Gaussian
// elimination with partial pivoting, rebuilt from the scenario on every call,
// sharing no code with the solver above.
FlowSolution solve_flow_dense_oracle(const Scenario& scenario, std::uint64_t bits,
                                     double imbalance_penalty = 0.0);

}  // namespace quso
