#pragma once

// Simulated-annealing baseline over generator bitstrings: uniform random
// start, Hamming-1 proposals, Metropolis acceptance exp(-|dC|/kT) on the
// normalized costs, geometric cooling T <- alpha T after each temperature
// step. Restarts are independent and deterministically seeded.

#include <cstdint>
#include <functional>
#include <vector>

#include "quso/cost_table.hpp"

namespace quso {

struct SaConfig {
  int temperature_steps = 10;
  // proposals per temperature step; 0 means one sweep, i.e. the bit count M
  int inner_iterations_per_step = 0;
  double initial_temperature = 1.0;  // on the normalized cost scale
  double alpha = 0.95;               // geometric decay, in (0, 1)
  double boltzmann_k = 1.0;
  std::uint64_t seed = 0;
  int num_samples = 10;  // independent restarts
};

void validate_config(const SaConfig& config, const CostTable& table);

// Probability of accepting a worsening move with cost gap delta at
// temperature T: exp(-|delta| / (k T)). Improvements are always accepted.
double acceptance_probability(double delta, double temperature, double boltzmann_k);

struct SaStepStat {
  int restart = 0;
  int temperature_step = 0;  // 1-based
  double temperature = 0.0;
  double current_cost = 0.0;
  double best_cost = 0.0;
};

struct SaRestartResult {
  std::uint64_t best_bitstring = 0;
  double best_cost = 0.0;
};

struct SaResult {
  std::vector<SaRestartResult> restarts;
  std::vector<SaStepStat> trace;  // restart-major, step order within restart
};

struct SaProposal {
  int restart = 0;
  int temperature_step = 0;
  int iteration = 0;
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  double delta = 0.0;  // C(to) - C(from)
  bool accepted = false;
};

using ProposalHook = std::function<void(const SaProposal&)>;

// Runs all restarts; per-restart streams derive from (config.seed, restart
// index) so results do not depend on execution order. The optional hook sees
// every proposal (testing aid).
SaResult run_sa(const CostTable& table, const SaConfig& config, const ProposalHook& hook = {});

}  // namespace quso
