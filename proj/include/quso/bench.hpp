#pragma once

// Experiment orchestration: sweep (qubits x load) cells over a case file,
// cache cost tables by scenario digest, run the QAOA and SA engines over
// their resource sweeps and emit records, plot data and a manifest that pins
// every input needed for an exact re-run.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "quso/metrics.hpp"

namespace quso {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct ExperimentPlan {
  std::string case_file;
  std::vector<int> qubit_counts;          // default 4..20
  std::vector<double> load_fractions;     // default 0.1..1.0 step 0.1
  std::vector<int> qaoa_layers;           // default 2^0..2^10
  std::vector<int> sa_temperature_steps;  // default 10..80 step 10
  double total_capacity = 1000.0;         // MW
  int master_generators = 20;             // master assignment size; cells truncate it
  std::uint64_t seed = 15;
  double ar_threshold = 0.95;
  double confidence = 0.99;
  int num_samples = 10;
  int heatmap_layers = 256;
  int heatmap_temperature_steps = 20;
  double sa_initial_temperature = 1.0;
  double sa_alpha = 0.95;
  double sa_boltzmann_k = 1.0;
  int sa_inner_iterations = 0;  // 0 = one sweep per temperature step
  bool sample_line_costs = false;
  double imbalance_penalty = 0.0;
  int max_table_bits = 24;

  // execution knobs; never affect numeric output and stay out of the manifest
  std::string output_dir = "bench_out";
  int cell_workers = 1;
  int threads = 0;
  bool reuse_cached_tables = true;
};

ExperimentPlan default_plan();

void validate_plan(const ExperimentPlan& plan);

// Reproducibility-relevant fields only (no output_dir / worker counts).
nlohmann::json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::json& j);

struct QaoaExactStat {
  int qubits = 0;
  double load = 0.0;
  int layers = 0;
  double expected_cost = 0.0;
  double expected_ar = 0.0;
  double success_mass = 0.0;  // exact probability of sampling AR >= threshold
};

struct CellOutcome {
  int qubits = 0;
  double load = 0.0;
  std::uint64_t table_digest = 0;
  std::string status = "ok";  // or "error: ..."
  std::vector<BenchRecord> records;
  std::vector<QaoaExactStat> qaoa_exact;
  std::vector<std::uint64_t> qaoa_sample_seeds;  // aligned with plan.qaoa_layers
  std::vector<std::uint64_t> sa_seeds;           // aligned with plan.sa_temperature_steps
};

struct PlanResult {
  std::filesystem::path output_dir;
  int cells_total = 0;
  int cells_failed = 0;
  std::vector<CellOutcome> cells;
};

// Runs the full plan. Per-cell failures are recorded in the manifest and the
// plan continues; the caller inspects cells_failed.
PlanResult run_plan(const ExperimentPlan& plan);

// Derived plot data, recomputable from records alone.
struct ReportSettings {
  double ar_threshold = 0.95;
  double confidence = 0.99;
  int heatmap_layers = 256;
  int heatmap_temperature_steps = 20;
};

void emit_reports(std::span<const BenchRecord> records, const ReportSettings& settings,
                  const std::filesystem::path& out_dir);

struct HeatmapCell {
  int qubits = 0;
  double load = 0.0;
  double value = 0.0;
};

// Elementwise a - b over matching (qubits, load) keys; antisymmetric in its
// arguments. Throws if the key sets differ.
std::vector<HeatmapCell> difference_heatmap(std::span<const HeatmapCell> a, std::span<const HeatmapCell> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
  std::vector<int> excluded;  // qubit counts with unattained TTS
};

// Ordinary least squares of log2(TTS) against qubit count; unattained points
// are excluded and reported. Throws ValidationError with fewer than 2 usable
// points.
LinearFit fit_tts_slope(std::span<const std::pair<int, std::optional<double>>> tts_per_qubit);

// Per-qubit TTS with samples pooled across loads at each resource level.
std::vector<std::pair<int, std::optional<double>>> tts_by_qubits(std::span<const BenchRecord> records,
                                                                 const std::string& algorithm,
                                                                 double ar_threshold, double confidence);

std::string digest_hex(std::uint64_t digest);

}  // namespace quso
