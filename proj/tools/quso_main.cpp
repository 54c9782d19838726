// Command-line driver: validate case files, precompute cost tables, run the
// QAOA and SA engines on single instances, execute full benchmark plans and
// recompute report CSVs from records.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "quso/annealing.hpp"
#include "quso/bench.hpp"
#include "quso/cost_table.hpp"
#include "quso/metrics.hpp"
#include "quso/powerflow.hpp"
#include "quso/qaoa.hpp"
#include "quso/util.hpp"

namespace {

using namespace quso;

struct InstanceArgs {
  std::string case_file;
  int qubits = 12;
  double load = 0.5;
  std::uint64_t seed = 15;
  int master_generators = 20;
  double total_capacity = 1000.0;
  bool sample_line_costs = false;
  double imbalance_penalty = 0.0;
  int threads = 0;
  int max_table_bits = 24;
};

void add_instance_options(CLI::App& cmd, InstanceArgs& args) {
  cmd.add_option("case", args.case_file, "IEEE CDF case file")->required();
  cmd.add_option("--qubits", args.qubits, "active generators / decision qubits");
  cmd.add_option("--load", args.load, "load fraction in (0, 1]");
  cmd.add_option("--seed", args.seed, "scenario seed");
  cmd.add_option("--master", args.master_generators, "size of the master generator assignment");
  cmd.add_option("--capacity", args.total_capacity, "total generating capacity, MW");
  cmd.add_flag("--sample-line-costs", args.sample_line_costs, "sample line cost factors in [0.5, 1.5)");
  cmd.add_option("--imbalance-penalty", args.imbalance_penalty, "quadratic penalty weight on net imbalance");
  cmd.add_option("--threads", args.threads, "worker threads (0 = hardware)");
  cmd.add_option("--max-table-bits", args.max_table_bits, "cost table size limit");
}

Scenario make_instance(const InstanceArgs& args) {
  const PowerGrid grid = parse_cdf_file(args.case_file);
  Scenario master = generate_scenario(grid, args.master_generators, args.total_capacity, args.load, args.seed,
                                      {.sample_line_costs = args.sample_line_costs});
  return truncate_generators(master, args.qubits);
}

CostTable table_for(const InstanceArgs& args, const Scenario& scenario) {
  return build_table(scenario, {.max_bits = args.max_table_bits,
                                .threads = args.threads,
                                .imbalance_penalty = args.imbalance_penalty});
}

std::string bitstring_of(std::uint64_t index, int bits) {
  std::string s(static_cast<std::size_t>(bits), '0');
  for (int b = 0; b < bits; ++b)
    if ((index >> b) & 1u) s[static_cast<std::size_t>(bits - 1 - b)] = '1';
  return s;
}

int cmd_parse(const std::string& case_file, const std::string& json_out) {
  const PowerGrid grid = parse_cdf_file(case_file);
  std::cout << "buses: " << grid.num_buses << "\nlines: " << grid.num_lines()
            << "\nreference_bus: " << grid.reference_bus << "\ndigest: " << digest_hex(grid.digest()) << "\n";
  if (!json_out.empty()) write_file_atomic(json_out, grid_to_json(grid).dump(2) + "\n");
  return 0;
}

int cmd_precompute(const InstanceArgs& args, const std::string& out_path, const std::string& scenario_out) {
  const Scenario scenario = make_instance(args);
  if (!scenario_out.empty()) write_file_atomic(scenario_out, scenario_to_json(scenario).dump(2) + "\n");
  const CostTable table = table_for(args, scenario);
  save_table(table, out_path);
  std::cout << "table: " << out_path << "\nentries: " << table.size() << "\ndigest: " << digest_hex(table.scenario_digest)
            << "\nmin_index: " << table.min_index << " (raw " << format_double(table.raw[table.min_index]) << ")"
            << "\nmax_index: " << table.max_index << " (raw " << format_double(table.raw[table.max_index]) << ")\n";
  if (table.degenerate) std::cout << "note: degenerate instance, all costs equal\n";
  return 0;
}

int cmd_qaoa(const InstanceArgs& args, std::vector<int> layers, int samples, const std::string& records_out,
             const std::string& distribution_out) {
  const Scenario scenario = make_instance(args);
  const CostTable table = table_for(args, scenario);
  std::vector<BenchRecord> records;
  for (int p : layers) {
    const auto probs = run_qaoa(table, make_schedule(p), args.threads);
    const double ecost = expected_cost(probs, table);
    std::cout << "layers=" << p << " expected_cost=" << format_double(ecost)
              << " expected_ar=" << format_double(1.0 - ecost) << "\n";
    const auto outcome = sample_outcomes(probs, samples, args.seed + static_cast<std::uint64_t>(p));
    for (int si = 0; si < samples; ++si) {
      const double cost = table.normalized[outcome[static_cast<std::size_t>(si)]];
      records.push_back({"qaoa", args.qubits, args.load, p, si, cost, approximation_ratio(cost)});
    }
    if (!distribution_out.empty() && p == layers.back()) {
      std::string csv = "index,bitstring,probability,normalized_cost\n";
      for (std::size_t i = 0; i < probs.size(); ++i) {
        csv += std::to_string(i);
        csv += ',' + bitstring_of(i, table.num_bits);
        csv += ',' + format_double(probs[i]);
        csv += ',' + format_double(table.normalized[i]);
        csv.push_back('\n');
      }
      write_file_atomic(distribution_out, csv);
    }
  }
  if (!records_out.empty()) write_records_csv(records_out, records);
  return 0;
}

int cmd_sa(const InstanceArgs& args, std::vector<int> temperature_steps, int samples, double t0, double alpha,
           double boltzmann_k, int inner, const std::string& records_out, const std::string& trace_out) {
  const Scenario scenario = make_instance(args);
  const CostTable table = table_for(args, scenario);
  std::vector<BenchRecord> records;
  std::string trace_csv = "restart,temperature_step,T,current_cost,best_cost\n";
  for (int steps : temperature_steps) {
    SaConfig config;
    config.temperature_steps = steps;
    config.inner_iterations_per_step = inner;
    config.initial_temperature = t0;
    config.alpha = alpha;
    config.boltzmann_k = boltzmann_k;
    config.num_samples = samples;
    config.seed = args.seed + static_cast<std::uint64_t>(steps);
    const SaResult result = run_sa(table, config);
    double best = 1.0;
    for (int ri = 0; ri < samples; ++ri) {
      const double cost = result.restarts[static_cast<std::size_t>(ri)].best_cost;
      best = std::min(best, cost);
      records.push_back({"sa", args.qubits, args.load, steps, ri, cost, approximation_ratio(cost)});
    }
    std::cout << "temperature_steps=" << steps << " best_cost=" << format_double(best)
              << " best_ar=" << format_double(1.0 - best) << "\n";
    if (!trace_out.empty() && steps == temperature_steps.back()) {
      for (const auto& stat : result.trace) {
        trace_csv += std::to_string(stat.restart);
        trace_csv += ',' + std::to_string(stat.temperature_step);
        trace_csv += ',' + format_double(stat.temperature);
        trace_csv += ',' + format_double(stat.current_cost);
        trace_csv += ',' + format_double(stat.best_cost);
        trace_csv.push_back('\n');
      }
    }
  }
  if (!records_out.empty()) write_records_csv(records_out, records);
  if (!trace_out.empty()) write_file_atomic(trace_out, trace_csv);
  return 0;
}

int cmd_bench(const ExperimentPlan& plan) {
  const PlanResult result = run_plan(plan);
  std::cout << "cells: " << result.cells_total << "\nfailed: " << result.cells_failed
            << "\noutput: " << result.output_dir.string() << "\n";
  if (result.cells_failed > 0) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& cell : result.cells)
      if (cell.status != "ok")
        failures.push_back({{"qubits", cell.qubits}, {"load", cell.load}, {"status", cell.status}});
    std::cerr << nlohmann::json{{"failed_cells", result.cells_failed}, {"cells", failures}}.dump() << "\n";
    return 1;
  }
  return 0;
}

int cmd_report(const std::string& records_path, const std::string& manifest_path, const std::string& out_dir,
               ReportSettings settings, bool settings_overridden) {
  const auto records = read_records_csv(records_path);
  if (!manifest_path.empty() && !settings_overridden) {
    const auto manifest = nlohmann::json::parse(read_file(manifest_path));
    const auto& plan = manifest.at("plan");
    settings.ar_threshold = plan.at("ar_threshold").get<double>();
    settings.confidence = plan.at("confidence").get<double>();
    settings.heatmap_layers = plan.at("heatmap_layers").get<int>();
    settings.heatmap_temperature_steps = plan.at("heatmap_temperature_steps").get<int>();
  }
  emit_reports(records, settings, out_dir);
  std::cout << "reports written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA vs simulated-annealing benchmark for power-flow unit commitment"};
  app.require_subcommand(1);

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "validate a case file and print a summary");
  std::string parse_case;
  std::string parse_json;
  parse_cmd->add_option("case", parse_case, "IEEE CDF case file")->required();
  parse_cmd->add_option("--json", parse_json, "write the canonical grid JSON here");

  // precompute
  auto* pre_cmd = app.add_subcommand("precompute", "build and save a cost table");
  InstanceArgs pre_args;
  add_instance_options(*pre_cmd, pre_args);
  std::string pre_out = "table.qct";
  std::string pre_scenario;
  pre_cmd->add_option("--out", pre_out, "output table path");
  pre_cmd->add_option("--scenario", pre_scenario, "write the canonical scenario JSON here");

  // qaoa
  auto* qaoa_cmd = app.add_subcommand("qaoa", "run the QAOA engine on one instance");
  InstanceArgs qaoa_args;
  add_instance_options(*qaoa_cmd, qaoa_args);
  std::vector<int> qaoa_layers{1024};
  int qaoa_samples = 10;
  std::string qaoa_records;
  std::string qaoa_distribution;
  qaoa_cmd->add_option("--layers", qaoa_layers, "layer counts")->delimiter(',');
  qaoa_cmd->add_option("--samples", qaoa_samples, "measurement samples per layer count");
  qaoa_cmd->add_option("--records", qaoa_records, "write sample records CSV here");
  qaoa_cmd->add_option("--distribution", qaoa_distribution, "dump the exact outcome distribution CSV here");

  // sa
  auto* sa_cmd = app.add_subcommand("sa", "run the simulated-annealing baseline on one instance");
  InstanceArgs sa_args;
  add_instance_options(*sa_cmd, sa_args);
  std::vector<int> sa_steps{80};
  int sa_samples = 10;
  double sa_t0 = 1.0;
  double sa_alpha = 0.95;
  double sa_k = 1.0;
  int sa_inner = 0;
  std::string sa_records;
  std::string sa_trace;
  sa_cmd->add_option("--temperature-steps", sa_steps, "temperature step counts")->delimiter(',');
  sa_cmd->add_option("--samples", sa_samples, "independent restarts");
  sa_cmd->add_option("--t0", sa_t0, "initial temperature");
  sa_cmd->add_option("--alpha", sa_alpha, "geometric decay in (0, 1)");
  sa_cmd->add_option("--k", sa_k, "acceptance constant");
  sa_cmd->add_option("--inner", sa_inner, "proposals per temperature step (0 = one sweep)");
  sa_cmd->add_option("--records", sa_records, "write restart records CSV here");
  sa_cmd->add_option("--trace", sa_trace, "write per-step trace CSV here");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a full experiment plan");
  ExperimentPlan plan = default_plan();
  bench_cmd->add_option("case", plan.case_file, "IEEE CDF case file")->required();
  bench_cmd->add_option("--qubits", plan.qubit_counts, "qubit counts")->delimiter(',');
  bench_cmd->add_option("--loads", plan.load_fractions, "load fractions")->delimiter(',');
  bench_cmd->add_option("--layers", plan.qaoa_layers, "QAOA layer sweep")->delimiter(',');
  bench_cmd->add_option("--temperature-steps", plan.sa_temperature_steps, "SA temperature step sweep")->delimiter(',');
  bench_cmd->add_option("--out", plan.output_dir, "output directory");
  bench_cmd->add_option("--seed", plan.seed, "base seed");
  bench_cmd->add_option("--threshold", plan.ar_threshold, "AR threshold for TTS");
  bench_cmd->add_option("--samples", plan.num_samples, "samples / restarts per cell");
  bench_cmd->add_option("--master", plan.master_generators, "master generator assignment size");
  bench_cmd->add_option("--capacity", plan.total_capacity, "total generating capacity, MW");
  bench_cmd->add_option("--heatmap-layers", plan.heatmap_layers, "QAOA layer count for heatmaps");
  bench_cmd->add_option("--heatmap-temperature-steps", plan.heatmap_temperature_steps,
                        "SA step count for heatmaps");
  bench_cmd->add_option("--workers", plan.cell_workers, "concurrent cells");
  bench_cmd->add_option("--threads", plan.threads, "threads per cell (0 = hardware)");
  bench_cmd->add_flag("--sample-line-costs", plan.sample_line_costs, "sample line cost factors in [0.5, 1.5)");
  bench_cmd->add_option("--imbalance-penalty", plan.imbalance_penalty, "quadratic net-imbalance penalty weight");
  bench_cmd->add_option("--sa-t0", plan.sa_initial_temperature, "SA initial temperature");
  bench_cmd->add_option("--sa-alpha", plan.sa_alpha, "SA geometric decay");
  bench_cmd->add_option("--sa-k", plan.sa_boltzmann_k, "SA acceptance constant");
  bench_cmd->add_option("--sa-inner", plan.sa_inner_iterations, "SA proposals per step (0 = one sweep)");
  bench_cmd->add_option("--max-table-bits", plan.max_table_bits, "cost table size limit");
  bool no_cache = false;
  bench_cmd->add_flag("--no-cache", no_cache, "rebuild cost tables even when cached");

  // report
  auto* report_cmd = app.add_subcommand("report", "recompute plot CSVs from a records file");
  std::string report_records;
  std::string report_manifest;
  std::string report_out = "report_out";
  ReportSettings report_settings;
  report_cmd->add_option("--records", report_records, "records.csv produced by bench")->required();
  report_cmd->add_option("--manifest", report_manifest, "manifest.json (source of default settings)");
  report_cmd->add_option("--out", report_out, "output directory");
  auto* opt_threshold = report_cmd->add_option("--threshold", report_settings.ar_threshold, "AR threshold");
  auto* opt_conf = report_cmd->add_option("--confidence", report_settings.confidence, "TTS confidence");
  auto* opt_hl = report_cmd->add_option("--heatmap-layers", report_settings.heatmap_layers, "heatmap layer count");
  auto* opt_ht = report_cmd->add_option("--heatmap-temperature-steps", report_settings.heatmap_temperature_steps,
                                        "heatmap SA step count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse_cmd->parsed()) return cmd_parse(parse_case, parse_json);
    if (pre_cmd->parsed()) return cmd_precompute(pre_args, pre_out, pre_scenario);
    if (qaoa_cmd->parsed()) return cmd_qaoa(qaoa_args, qaoa_layers, qaoa_samples, qaoa_records, qaoa_distribution);
    if (sa_cmd->parsed())
      return cmd_sa(sa_args, sa_steps, sa_samples, sa_t0, sa_alpha, sa_k, sa_inner, sa_records, sa_trace);
    if (bench_cmd->parsed()) {
      plan.reuse_cached_tables = !no_cache;
      if (const char* env = std::getenv("QUSO_OUTPUT_DIR"); env != nullptr && *env != '\0')
        plan.output_dir = env;
      return cmd_bench(plan);
    }
    if (report_cmd->parsed()) {
      const bool overridden = opt_threshold->count() > 0 || opt_conf->count() > 0 || opt_hl->count() > 0 ||
                              opt_ht->count() > 0;
      return cmd_report(report_records, report_manifest, report_out, report_settings, overridden);
    }
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
