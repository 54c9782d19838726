#include "quso/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "quso/annealing.hpp"
#include "quso/cost_table.hpp"
#include "quso/powerflow.hpp"
#include "quso/qaoa.hpp"
#include "quso/rng.hpp"
#include "quso/util.hpp"

namespace quso {

namespace {

// Seed for one (algorithm, qubits, load index, resource) cell, derived from
// the plan seed so outputs are independent of execution order.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t qubits,
                          std::uint64_t load_index, std::uint64_t resource) {
  ByteWriter w;
  w.bytes(tag);
  w.u64(qubits);
  w.u64(load_index);
  w.u64(resource);
  return mix64(base + fnv1a64(w.data()));
}

}  // namespace

std::string digest_hex(std::uint64_t digest) {
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[digest & 0xf];
    digest >>= 4;
  }
  return out;
}

ExperimentPlan default_plan() {
  ExperimentPlan plan;
  for (int q = 4; q <= 20; ++q) plan.qubit_counts.push_back(q);
  for (int i = 1; i <= 10; ++i) plan.load_fractions.push_back(i / 10.0);
  for (int p = 1; p <= 1024; p *= 2) plan.qaoa_layers.push_back(p);
  for (int t = 10; t <= 80; t += 10) plan.sa_temperature_steps.push_back(t);
  return plan;
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.case_file.empty()) throw ValidationError("plan: case_file is required");
  if (plan.qubit_counts.empty()) throw ValidationError("plan: qubit_counts must be non-empty");
  if (plan.load_fractions.empty()) throw ValidationError("plan: load_fractions must be non-empty");
  if (plan.qaoa_layers.empty()) throw ValidationError("plan: qaoa_layers must be non-empty");
  if (plan.sa_temperature_steps.empty()) throw ValidationError("plan: sa_temperature_steps must be non-empty");
  for (int q : plan.qubit_counts) {
    if (q < 1) throw ValidationError("plan: qubit count must be positive");
    if (q > plan.max_table_bits)
      throw ValidationError("plan: qubit count " + std::to_string(q) + " exceeds max_table_bits " +
                            std::to_string(plan.max_table_bits));
    if (q > plan.master_generators)
      throw ValidationError("plan: qubit count " + std::to_string(q) + " exceeds master_generators " +
                            std::to_string(plan.master_generators));
  }
  for (double f : plan.load_fractions)
    if (!(f > 0.0) || f > 1.0) throw ValidationError("plan: load fractions must lie in (0, 1]");
  for (int p : plan.qaoa_layers)
    if (p < 1) throw ValidationError("plan: layer counts must be positive");
  for (int t : plan.sa_temperature_steps)
    if (t < 1) throw ValidationError("plan: temperature step counts must be positive");
  if (plan.num_samples < 1) throw ValidationError("plan: num_samples must be at least 1");
  if (!(plan.ar_threshold > 0.0) || plan.ar_threshold > 1.0)
    throw ValidationError("plan: ar_threshold must lie in (0, 1]");
  if (!(plan.confidence > 0.0) || !(plan.confidence < 1.0))
    throw ValidationError("plan: confidence must lie in (0, 1)");
  if (!(plan.total_capacity > 0.0)) throw ValidationError("plan: total_capacity must be positive");
}

nlohmann::json plan_to_json(const ExperimentPlan& plan) {
  return {{"case_file", plan.case_file},
          {"qubit_counts", plan.qubit_counts},
          {"load_fractions", plan.load_fractions},
          {"qaoa_layers", plan.qaoa_layers},
          {"sa_temperature_steps", plan.sa_temperature_steps},
          {"total_capacity", plan.total_capacity},
          {"master_generators", plan.master_generators},
          {"seed", plan.seed},
          {"ar_threshold", plan.ar_threshold},
          {"confidence", plan.confidence},
          {"num_samples", plan.num_samples},
          {"heatmap_layers", plan.heatmap_layers},
          {"heatmap_temperature_steps", plan.heatmap_temperature_steps},
          {"sa_initial_temperature", plan.sa_initial_temperature},
          {"sa_alpha", plan.sa_alpha},
          {"sa_boltzmann_k", plan.sa_boltzmann_k},
          {"sa_inner_iterations", plan.sa_inner_iterations},
          {"sample_line_costs", plan.sample_line_costs},
          {"imbalance_penalty", plan.imbalance_penalty},
          {"max_table_bits", plan.max_table_bits}};
}

ExperimentPlan plan_from_json(const nlohmann::json& j) {
  ExperimentPlan plan;
  plan.case_file = j.at("case_file").get<std::string>();
  plan.qubit_counts = j.at("qubit_counts").get<std::vector<int>>();
  plan.load_fractions = j.at("load_fractions").get<std::vector<double>>();
  plan.qaoa_layers = j.at("qaoa_layers").get<std::vector<int>>();
  plan.sa_temperature_steps = j.at("sa_temperature_steps").get<std::vector<int>>();
  plan.total_capacity = j.at("total_capacity").get<double>();
  plan.master_generators = j.at("master_generators").get<int>();
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.ar_threshold = j.at("ar_threshold").get<double>();
  plan.confidence = j.at("confidence").get<double>();
  plan.num_samples = j.at("num_samples").get<int>();
  plan.heatmap_layers = j.at("heatmap_layers").get<int>();
  plan.heatmap_temperature_steps = j.at("heatmap_temperature_steps").get<int>();
  plan.sa_initial_temperature = j.at("sa_initial_temperature").get<double>();
  plan.sa_alpha = j.at("sa_alpha").get<double>();
  plan.sa_boltzmann_k = j.at("sa_boltzmann_k").get<double>();
  plan.sa_inner_iterations = j.at("sa_inner_iterations").get<int>();
  plan.sample_line_costs = j.at("sample_line_costs").get<bool>();
  plan.imbalance_penalty = j.at("imbalance_penalty").get<double>();
  plan.max_table_bits = j.at("max_table_bits").get<int>();
  return plan;
}

namespace {

CellOutcome run_cell(const ExperimentPlan& plan, const PowerGrid& grid, int qubits, std::size_t load_index,
                     const std::filesystem::path& table_dir) {
  const double load = plan.load_fractions[load_index];
  CellOutcome cell;
  cell.qubits = qubits;
  cell.load = load;

  Scenario master = generate_scenario(grid, plan.master_generators, plan.total_capacity, load, plan.seed,
                                      {.sample_line_costs = plan.sample_line_costs});
  Scenario scenario = truncate_generators(master, qubits);
  cell.table_digest = scenario.digest();

  const auto table_path = table_dir / (digest_hex(cell.table_digest) + ".qct");
  CostTable table;
  if (plan.reuse_cached_tables && std::filesystem::exists(table_path)) {
    table = load_table_checked(table_path, cell.table_digest);
  } else {
    table = build_table(scenario, {.max_bits = plan.max_table_bits,
                                   .threads = plan.threads,
                                   .imbalance_penalty = plan.imbalance_penalty});
    save_table(table, table_path);
  }

  for (int p : plan.qaoa_layers) {
    const auto probs = run_qaoa(table, make_schedule(p), plan.threads);
    const double ecost = expected_cost(probs, table);
    cell.qaoa_exact.push_back(
        {qubits, load, p, ecost, 1.0 - ecost, success_mass(probs, table, plan.ar_threshold)});
    const std::uint64_t sample_seed =
        derive_seed(plan.seed, "qaoa", static_cast<std::uint64_t>(qubits), load_index, static_cast<std::uint64_t>(p));
    cell.qaoa_sample_seeds.push_back(sample_seed);
    const auto samples = sample_outcomes(probs, plan.num_samples, sample_seed);
    for (int si = 0; si < plan.num_samples; ++si) {
      const double cost = table.normalized[samples[static_cast<std::size_t>(si)]];
      cell.records.push_back({"qaoa", qubits, load, p, si, cost, approximation_ratio(cost)});
    }
  }

  for (int steps : plan.sa_temperature_steps) {
    SaConfig config;
    config.temperature_steps = steps;
    config.inner_iterations_per_step = plan.sa_inner_iterations;
    config.initial_temperature = plan.sa_initial_temperature;
    config.alpha = plan.sa_alpha;
    config.boltzmann_k = plan.sa_boltzmann_k;
    config.num_samples = plan.num_samples;
    config.seed =
        derive_seed(plan.seed, "sa", static_cast<std::uint64_t>(qubits), load_index, static_cast<std::uint64_t>(steps));
    cell.sa_seeds.push_back(config.seed);
    const SaResult result = run_sa(table, config);
    for (int ri = 0; ri < plan.num_samples; ++ri) {
      const double cost = result.restarts[static_cast<std::size_t>(ri)].best_cost;
      cell.records.push_back({"sa", qubits, load, steps, ri, cost, approximation_ratio(cost)});
    }
  }
  return cell;
}

std::string qaoa_exact_csv(std::span<const CellOutcome> cells) {
  std::string out = "qubits,load,layers,expected_cost,expected_ar,success_mass\n";
  for (const auto& cell : cells) {
    for (const auto& stat : cell.qaoa_exact) {
      out += std::to_string(stat.qubits);
      out += ',' + format_double(stat.load);
      out += ',' + std::to_string(stat.layers);
      out += ',' + format_double(stat.expected_cost);
      out += ',' + format_double(stat.expected_ar);
      out += ',' + format_double(stat.success_mass);
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace

PlanResult run_plan(const ExperimentPlan& plan) {
  validate_plan(plan);
  const PowerGrid grid = parse_cdf_file(plan.case_file);
  const std::uint64_t case_digest = grid.digest();

  PlanResult result;
  result.output_dir = plan.output_dir;
  const auto table_dir = result.output_dir / "tables";
  std::filesystem::create_directories(table_dir);

  struct CellKey {
    int qubits;
    std::size_t load_index;
  };
  std::vector<CellKey> keys;
  for (int q : plan.qubit_counts)
    for (std::size_t li = 0; li < plan.load_fractions.size(); ++li) keys.push_back({q, li});

  result.cells_total = static_cast<int>(keys.size());
  result.cells.resize(keys.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= keys.size()) return;
      const auto key = keys[idx];
      try {
        result.cells[idx] = run_cell(plan, grid, key.qubits, key.load_index, table_dir);
      } catch (const std::exception& e) {
        CellOutcome failed;
        failed.qubits = key.qubits;
        failed.load = plan.load_fractions[key.load_index];
        failed.status = std::string("error: ") + e.what();
        result.cells[idx] = std::move(failed);
      }
    }
  };
  const int workers = std::max(1, std::min<int>(plan.cell_workers, static_cast<int>(keys.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<BenchRecord> records;
  for (const auto& cell : result.cells) {
    if (cell.status != "ok") ++result.cells_failed;
    records.insert(records.end(), cell.records.begin(), cell.records.end());
  }

  write_records_csv(result.output_dir / "records.csv", records);
  write_file_atomic(result.output_dir / "qaoa_exact.csv", qaoa_exact_csv(result.cells));

  nlohmann::json per_cell = nlohmann::json::array();
  for (const auto& cell : result.cells) {
    per_cell.push_back({{"qubits", cell.qubits},
                        {"load", cell.load},
                        {"table_digest", digest_hex(cell.table_digest)},
                        {"status", cell.status},
                        {"qaoa_sample_seeds", cell.qaoa_sample_seeds},
                        {"sa_seeds", cell.sa_seeds}});
  }
  nlohmann::json manifest = {{"case_digest", digest_hex(case_digest)},
                             {"plan", plan_to_json(plan)},
                             {"seeds", {{"base", plan.seed}}},
                             {"tool_version", std::string(kToolVersion)},
                             {"per_cell", std::move(per_cell)}};
  write_file_atomic(result.output_dir / "manifest.json", manifest.dump(2) + "\n");

  emit_reports(records,
               {.ar_threshold = plan.ar_threshold,
                .confidence = plan.confidence,
                .heatmap_layers = plan.heatmap_layers,
                .heatmap_temperature_steps = plan.heatmap_temperature_steps},
               result.output_dir);
  return result;
}

namespace {

// records grouped as resource -> load -> qubits -> ars (sample order)
using GroupedRecords = std::map<int, std::map<double, std::map<int, std::vector<double>>>>;

GroupedRecords group_records(std::span<const BenchRecord> records, const std::string& algorithm) {
  GroupedRecords grouped;
  for (const auto& r : records)
    if (r.algorithm == algorithm) grouped[r.resource][r.load][r.qubits].push_back(r.ar);
  return grouped;
}

double best_of(const std::vector<double>& ars) { return *std::max_element(ars.begin(), ars.end()); }

double mean_of(const std::vector<double>& ars) {
  double acc = 0.0;
  for (double v : ars) acc += v;
  return acc / static_cast<double>(ars.size());
}

std::string lineplot_csv(const GroupedRecords& grouped) {
  std::string out = "s,load,n_qubits,ar_mean,ar_mean_ci95,ar_best,ar_best_ci95,ar_mean_min,ar_mean_max\n";
  for (const auto& [s, by_load] : grouped) {
    for (const auto& [load, by_qubits] : by_load) {
      std::vector<double> means;
      std::vector<double> bests;
      for (const auto& [q, ars] : by_qubits) {
        means.push_back(mean_of(ars));
        bests.push_back(best_of(ars));
      }
      const Aggregate mean_agg = aggregate(means);
      const Aggregate best_agg = aggregate(bests);
      out += std::to_string(s);
      out += ',' + format_double(load);
      out += ',' + std::to_string(means.size());
      out += ',' + format_double(mean_agg.mean);
      out += ',' + format_double(mean_agg.ci95_half_width);
      out += ',' + format_double(best_agg.mean);
      out += ',' + format_double(best_agg.ci95_half_width);
      out += ',' + format_double(mean_agg.min);
      out += ',' + format_double(mean_agg.max);
      out.push_back('\n');
    }
  }
  return out;
}

int effective_heatmap_resource(const GroupedRecords& grouped, int requested) {
  if (grouped.contains(requested)) return requested;
  return grouped.rbegin()->first;  // largest available level
}

std::vector<HeatmapCell> heatmap_cells(const GroupedRecords& grouped, int resource, bool use_best) {
  std::vector<HeatmapCell> cells;
  const auto& by_load = grouped.at(resource);
  for (const auto& [load, by_qubits] : by_load)
    for (const auto& [q, ars] : by_qubits) cells.push_back({q, load, use_best ? best_of(ars) : mean_of(ars)});
  std::sort(cells.begin(), cells.end(), [](const HeatmapCell& a, const HeatmapCell& b) {
    return std::tie(a.qubits, a.load) < std::tie(b.qubits, b.load);
  });
  return cells;
}

std::string heatmap_csv(int resource, std::span<const HeatmapCell> best, std::span<const HeatmapCell> mean) {
  std::string out = "s,qubits,load,ar_best,ar_mean\n";
  for (std::size_t i = 0; i < best.size(); ++i) {
    out += std::to_string(resource);
    out += ',' + std::to_string(best[i].qubits);
    out += ',' + format_double(best[i].load);
    out += ',' + format_double(best[i].value);
    out += ',' + format_double(mean[i].value);
    out.push_back('\n');
  }
  return out;
}

}  // namespace

std::vector<HeatmapCell> difference_heatmap(std::span<const HeatmapCell> a, std::span<const HeatmapCell> b) {
  if (a.size() != b.size()) throw ValidationError("heatmaps differ in size");
  std::vector<HeatmapCell> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].qubits != b[i].qubits || a[i].load != b[i].load)
      throw ValidationError("heatmaps differ in cell keys");
    out.push_back({a[i].qubits, a[i].load, a[i].value - b[i].value});
  }
  return out;
}

std::vector<std::pair<int, std::optional<double>>> tts_by_qubits(std::span<const BenchRecord> records,
                                                                 const std::string& algorithm,
                                                                 double ar_threshold, double confidence) {
  // qubits -> resource -> pooled ars across loads and samples
  std::map<int, std::map<int, std::vector<double>>> pooled;
  for (const auto& r : records)
    if (r.algorithm == algorithm) pooled[r.qubits][r.resource].push_back(r.ar);

  std::vector<std::pair<int, std::optional<double>>> out;
  for (const auto& [qubits, by_resource] : pooled) {
    std::vector<std::pair<int, double>> success;
    for (const auto& [resource, ars] : by_resource)
      success.emplace_back(resource, success_probability(ars, ar_threshold));
    out.emplace_back(qubits, time_to_solution(success, confidence));
  }
  return out;
}

LinearFit fit_tts_slope(std::span<const std::pair<int, std::optional<double>>> tts_per_qubit) {
  LinearFit fit;
  std::vector<std::pair<double, double>> points;
  for (const auto& [qubits, tts] : tts_per_qubit) {
    if (!tts) {
      fit.excluded.push_back(qubits);
      continue;
    }
    points.emplace_back(static_cast<double>(qubits), std::log2(*tts));
  }
  if (points.size() < 2)
    throw ValidationError("TTS slope fit needs at least 2 attained points, got " + std::to_string(points.size()));
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (sxx == 0.0) throw ValidationError("TTS slope fit needs at least 2 distinct qubit counts");
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.points_used = static_cast<int>(points.size());
  return fit;
}

void emit_reports(std::span<const BenchRecord> records, const ReportSettings& settings,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto qaoa = group_records(records, "qaoa");
  const auto sa = group_records(records, "sa");

  if (!qaoa.empty()) write_file_atomic(out_dir / "lineplot_qaoa.csv", lineplot_csv(qaoa));
  if (!sa.empty()) write_file_atomic(out_dir / "lineplot_sa.csv", lineplot_csv(sa));

  nlohmann::json fit_report;
  fit_report["ar_threshold"] = settings.ar_threshold;
  fit_report["confidence"] = settings.confidence;

  if (!qaoa.empty() && !sa.empty()) {
    const int sq = effective_heatmap_resource(qaoa, settings.heatmap_layers);
    const int ss = effective_heatmap_resource(sa, settings.heatmap_temperature_steps);
    const auto qaoa_best = heatmap_cells(qaoa, sq, true);
    const auto qaoa_mean = heatmap_cells(qaoa, sq, false);
    const auto sa_best = heatmap_cells(sa, ss, true);
    const auto sa_mean = heatmap_cells(sa, ss, false);
    write_file_atomic(out_dir / "heatmap_qaoa.csv", heatmap_csv(sq, qaoa_best, qaoa_mean));
    write_file_atomic(out_dir / "heatmap_sa.csv", heatmap_csv(ss, sa_best, sa_mean));

    const auto diff_best = difference_heatmap(qaoa_best, sa_best);
    const auto diff_mean = difference_heatmap(qaoa_mean, sa_mean);
    std::string diff = "qaoa_s,sa_s,qubits,load,ar_best_diff,ar_mean_diff\n";
    for (std::size_t i = 0; i < diff_best.size(); ++i) {
      diff += std::to_string(sq);
      diff += ',' + std::to_string(ss);
      diff += ',' + std::to_string(diff_best[i].qubits);
      diff += ',' + format_double(diff_best[i].load);
      diff += ',' + format_double(diff_best[i].value);
      diff += ',' + format_double(diff_mean[i].value);
      diff.push_back('\n');
    }
    write_file_atomic(out_dir / "heatmap_diff.csv", diff);
  }

  std::string tts_csv = "algorithm,qubits,tts\n";
  for (const std::string algorithm : {"qaoa", "sa"}) {
    const auto& grouped = algorithm == "qaoa" ? qaoa : sa;
    if (grouped.empty()) continue;
    const auto tts = tts_by_qubits(records, algorithm, settings.ar_threshold, settings.confidence);
    for (const auto& [qubits, value] : tts) {
      tts_csv += algorithm;
      tts_csv += ',' + std::to_string(qubits);
      tts_csv += ',' + (value ? format_double(*value) : std::string("unattained"));
      tts_csv.push_back('\n');
    }
    try {
      const LinearFit fit = fit_tts_slope(tts);
      fit_report[algorithm] = {{"slope", fit.slope},
                               {"intercept", fit.intercept},
                               {"points_used", fit.points_used},
                               {"excluded_qubits", fit.excluded}};
    } catch (const ValidationError& e) {
      fit_report[algorithm] = {{"error", e.what()}};
    }
  }
  write_file_atomic(out_dir / "tts.csv", tts_csv);
  write_file_atomic(out_dir / "tts_fit.json", fit_report.dump(2) + "\n");
}

}  // namespace quso
