#include "quso/annealing.hpp"

#include <cmath>
#include <string>

#include "quso/rng.hpp"
#include "quso/util.hpp"

namespace quso {

void validate_config(const SaConfig& config, const CostTable& table) {
  if (table.raw.empty()) throw ValidationError("empty cost table");
  if (config.temperature_steps < 1) throw ValidationError("temperature_steps must be at least 1");
  if (config.inner_iterations_per_step < 0) throw ValidationError("inner_iterations_per_step must be >= 0");
  if (!(config.initial_temperature > 0.0)) throw ValidationError("initial temperature must be positive");
  if (!(config.alpha > 0.0) || !(config.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(config.boltzmann_k > 0.0)) throw ValidationError("boltzmann_k must be positive");
  if (config.num_samples < 1) throw ValidationError("num_samples must be at least 1");
}

double acceptance_probability(double delta, double temperature, double boltzmann_k) {
  if (delta <= 0.0) return 1.0;
  const double kt = boltzmann_k * temperature;
  if (kt <= 0.0) return 0.0;
  return std::exp(-std::abs(delta) / kt);
}

namespace {

SaRestartResult run_restart(const CostTable& table, const SaConfig& config, int restart,
                            std::vector<SaStepStat>& trace, const ProposalHook& hook) {
  const int m = table.num_bits;
  const std::uint64_t mask = (m == 0) ? 0 : ((std::uint64_t{1} << m) - 1);
  const int inner = config.inner_iterations_per_step > 0 ? config.inner_iterations_per_step : m;

  auto rng = Rng::stream(config.seed, stream_id::kSaRestartBase + static_cast<std::uint64_t>(restart));
  std::uint64_t current = rng.uniform_index(table.size());
  double current_cost = table.normalized[current];
  std::uint64_t best = current;
  double best_cost = current_cost;

  double temperature = config.initial_temperature;
  for (int step = 1; step <= config.temperature_steps; ++step) {
    for (int it = 0; it < inner; ++it) {
      const int bit = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(m)));
      const std::uint64_t candidate = (current ^ (std::uint64_t{1} << bit)) & mask;
      const double candidate_cost = table.normalized[candidate];
      const double delta = candidate_cost - current_cost;
      bool accepted;
      if (delta <= 0.0) {
        accepted = true;
      } else {
        accepted = rng.uniform_double() < acceptance_probability(delta, temperature, config.boltzmann_k);
      }
      if (hook) hook({restart, step, it, current, candidate, delta, accepted});
      if (accepted) {
        current = candidate;
        current_cost = candidate_cost;
        if (current_cost < best_cost) {
          best_cost = current_cost;
          best = current;
        }
      }
    }
    trace.push_back({restart, step, temperature, current_cost, best_cost});
    temperature *= config.alpha;
  }
  return {best, best_cost};
}

}  // namespace

SaResult run_sa(const CostTable& table, const SaConfig& config, const ProposalHook& hook) {
  validate_config(config, table);
  if (table.num_bits == 0) throw ValidationError("cost table must cover at least one decision bit");

  SaResult result;
  result.restarts.resize(static_cast<std::size_t>(config.num_samples));
  std::vector<std::vector<SaStepStat>> traces(static_cast<std::size_t>(config.num_samples));
  for (int r = 0; r < config.num_samples; ++r)
    result.restarts[static_cast<std::size_t>(r)] = run_restart(table, config, r, traces[static_cast<std::size_t>(r)], hook);
  for (auto& t : traces)
    result.trace.insert(result.trace.end(), t.begin(), t.end());
  return result;
}

}  // namespace quso
