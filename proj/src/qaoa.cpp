#include "quso/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quso/rng.hpp"
#include "quso/util.hpp"

namespace quso {

Statevector Statevector::uniform(int num_qubits) {
  Statevector s;
  s.num_qubits = num_qubits;
  const std::size_t count = std::size_t{1} << num_qubits;
  s.amplitudes.assign(count, std::complex<double>(std::pow(2.0, -0.5 * num_qubits), 0.0));
  return s;
}

Statevector Statevector::basis(int num_qubits, std::uint64_t index) {
  Statevector s;
  s.num_qubits = num_qubits;
  const std::size_t count = std::size_t{1} << num_qubits;
  if (index >= count) throw ValidationError("basis index out of range");
  s.amplitudes.assign(count, {0.0, 0.0});
  s.amplitudes[index] = {1.0, 0.0};
  return s;
}

double Statevector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return acc;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i) p[i] = std::norm(amplitudes[i]);
  return p;
}

RampSchedule make_schedule(int layers) {
  if (layers < 1) throw ValidationError("schedule needs at least one layer");
  RampSchedule s;
  s.gammas.resize(static_cast<std::size_t>(layers));
  s.betas.resize(static_cast<std::size_t>(layers));
  for (int k = 1; k <= layers; ++k) {
    s.gammas[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) / layers;
    s.betas[static_cast<std::size_t>(k - 1)] = -static_cast<double>(layers - k + 1) / layers;
  }
  return s;
}

void apply_cost_phase(Statevector& state, const CostTable& table, double gamma, int threads) {
  if (state.size() != table.size())
    throw ValidationError("statevector has " + std::to_string(state.size()) + " amplitudes but table has " +
                          std::to_string(table.size()) + " entries");
  if (gamma == 0.0) return;
  auto* amps = state.amplitudes.data();
  const double* costs = table.normalized.data();
  parallel_for(0, state.size(), threads, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double angle = -gamma * costs[i];
      amps[i] *= std::complex<double>(std::cos(angle), std::sin(angle));
    }
  });
}

void apply_mixer(Statevector& state, double beta, int threads) {
  if (beta == 0.0) return;
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  auto* amps = state.amplitudes.data();
  const std::size_t count = state.size();
  for (int q = 0; q < state.num_qubits; ++q) {
    const std::size_t half = std::size_t{1} << q;
    const std::size_t block = half << 1;
    // pairs (i, i + half) within each block are disjoint; chunks are aligned
    // to whole blocks so any thread count produces identical results
    parallel_for(0, count, threads, block, [&](std::size_t begin, std::size_t end) {
      for (std::size_t base = begin; base < end; base += block) {
        for (std::size_t off = 0; off < half; ++off) {
          const std::size_t i0 = base + off;
          const std::size_t i1 = i0 + half;
          const double a_re = amps[i0].real();
          const double a_im = amps[i0].imag();
          const double b_re = amps[i1].real();
          const double b_im = amps[i1].imag();
          // exp(-i beta X): (a, b) -> (c a - i s b, -i s a + c b)
          amps[i0] = {c * a_re + s * b_im, c * a_im - s * b_re};
          amps[i1] = {s * a_im + c * b_re, -s * a_re + c * b_im};
        }
      }
    });
  }
}

void evolve(Statevector& state, const CostTable& table, const RampSchedule& schedule, int threads) {
  for (int k = 0; k < schedule.layers(); ++k) {
    apply_cost_phase(state, table, schedule.gammas[static_cast<std::size_t>(k)], threads);
    apply_mixer(state, schedule.betas[static_cast<std::size_t>(k)], threads);
  }
}

std::vector<double> run_qaoa(const CostTable& table, const RampSchedule& schedule, int threads) {
  Statevector state = Statevector::uniform(table.num_bits);
  evolve(state, table, schedule, threads);
  return state.probabilities();
}

double expected_cost(const std::vector<double>& probabilities, const CostTable& table) {
  if (probabilities.size() != table.size())
    throw ValidationError("distribution length does not match table length");
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) acc += probabilities[i] * table.normalized[i];
  return acc;
}

double success_mass(const std::vector<double>& probabilities, const CostTable& table, double ar_threshold) {
  if (probabilities.size() != table.size())
    throw ValidationError("distribution length does not match table length");
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i)
    if (1.0 - table.normalized[i] >= ar_threshold) acc += probabilities[i];
  return acc;
}

std::vector<std::uint64_t> sample_outcomes(const std::vector<double>& probabilities, int num_samples,
                                           std::uint64_t seed) {
  if (num_samples < 1) throw ValidationError("num_samples must be at least 1");
  if (probabilities.empty()) throw ValidationError("empty distribution");
  double total = 0.0;
  for (double p : probabilities) {
    if (p < 0.0) throw ValidationError("negative probability in distribution");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("distribution sums to " + format_double(total) + ", expected 1 within 1e-9");

  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    cdf[i] = acc / total;
  }
  cdf.back() = 1.0;

  auto rng = Rng::stream(seed, stream_id::kOutcomeSampling);
  std::vector<std::uint64_t> samples(static_cast<std::size_t>(num_samples));
  for (auto& sample : samples) {
    const double u = rng.uniform_double();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    sample = static_cast<std::uint64_t>(it - cdf.begin());
  }
  return samples;
}

}  // namespace quso
