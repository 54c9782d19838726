#pragma once

// Evaluation metrics: approximation ratio on normalized costs, success
// probability at a threshold, time-to-solution over a resource sweep and
// mean / 95% confidence-interval aggregation.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace quso {

// AR = 1 - normalized cost; 1 is optimal, 0 is the worst solution. Costs may
// stray outside [0, 1] by at most 1e-9 (clamped); anything further is a
// domain error.
double approximation_ratio(double normalized_cost);

// Fraction of samples whose AR meets the threshold.
double success_probability(std::span<const double> ars, double threshold);

// Minimum over resource levels s of s * (log(1 - confidence) / log(1 - P_s) + 1).
// P_s = 1 contributes s itself (one run suffices); P_s = 0 levels are skipped.
// Returns nullopt when no level has P_s > 0.
std::optional<double> time_to_solution(std::span<const std::pair<int, double>> success_by_resource,
                                       double confidence = 0.99);

struct Aggregate {
  double mean = 0.0;
  double ci95_half_width = 0.0;  // Student-t, n-1 degrees of freedom
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  bool degenerate = false;  // single member: interval undefined, reported as 0
};

Aggregate aggregate(std::span<const double> values);

// One benchmark sample: algorithm ("qaoa" or "sa"), instance (qubits, load),
// resource level s (layers or temperature steps) and the sampled outcome.
struct BenchRecord {
  std::string algorithm;
  int qubits = 0;
  double load = 0.0;
  int resource = 0;
  int sample_index = 0;
  double normalized_cost = 0.0;
  double ar = 0.0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

// CSV with header: algorithm,qubits,load,s,sample_index,normalized_cost,ar.
// Doubles are written with round-trip precision.
std::string records_to_csv(std::span<const BenchRecord> records);
std::vector<BenchRecord> records_from_csv(const std::string& csv);
void write_records_csv(const std::filesystem::path& path, std::span<const BenchRecord> records);
std::vector<BenchRecord> read_records_csv(const std::filesystem::path& path);

}  // namespace quso
