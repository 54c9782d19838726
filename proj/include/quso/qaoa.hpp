#pragma once

// Statevector simulation of the diagonalized QAOA: uniform-superposition
// start, alternating diagonal cost phases exp(-i gamma c(x)) and per-qubit
// X rotations exp(-i beta X), ramp-scheduled parameters, exact outcome
// probabilities and seeded measurement sampling. The cost phases consume the
// table's normalized costs, so gamma acts on a [0, 1] spectrum.

#include <complex>
#include <cstdint>
#include <vector>

#include "quso/cost_table.hpp"

namespace quso {

struct Statevector {
  int num_qubits = 0;
  std::vector<std::complex<double>> amplitudes;  // length 2^num_qubits

  static Statevector uniform(int num_qubits);
  static Statevector basis(int num_qubits, std::uint64_t index);

  std::size_t size() const { return amplitudes.size(); }
  double norm_squared() const;
  std::vector<double> probabilities() const;
};

// Linear-ramp parameters: gamma_k = k/p rising 0 -> 1, beta_k = -(p-k+1)/p
// falling in magnitude 1 -> 1/p, for k = 1..p.
struct RampSchedule {
  std::vector<double> gammas;
  std::vector<double> betas;

  int layers() const { return static_cast<int>(gammas.size()); }
};

RampSchedule make_schedule(int layers);

// amplitude[i] *= exp(-i gamma normalized_cost[i]); table length must match.
void apply_cost_phase(Statevector& state, const CostTable& table, double gamma, int threads = 0);

// exp(-i beta X) on every qubit.
void apply_mixer(Statevector& state, double beta, int threads = 0);

// Full evolution from the uniform superposition; returns |amplitude|^2 per
// bitstring index.
std::vector<double> run_qaoa(const CostTable& table, const RampSchedule& schedule, int threads = 0);

// In-place evolution of a caller-prepared state.
void evolve(Statevector& state, const CostTable& table, const RampSchedule& schedule, int threads = 0);

// Expectation of the normalized cost under an outcome distribution.
double expected_cost(const std::vector<double>& probabilities, const CostTable& table);

// Probability mass on indices whose normalized cost c satisfies 1 - c >= threshold.
double success_mass(const std::vector<double>& probabilities, const CostTable& table, double ar_threshold);

// Seeded i.i.d. draws by inverse CDF. Probabilities must sum to 1 within 1e-9
// and are renormalized before sampling.
std::vector<std::uint64_t> sample_outcomes(const std::vector<double>& probabilities, int num_samples,
                                           std::uint64_t seed);

}  // namespace quso
