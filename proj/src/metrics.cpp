#include "quso/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "quso/util.hpp"

namespace quso {

double approximation_ratio(double normalized_cost) {
  constexpr double slack = 1e-9;
  if (normalized_cost < -slack || normalized_cost > 1.0 + slack)
    throw DomainError("normalized cost " + format_double(normalized_cost) + " outside [0, 1]");
  const double clamped = std::clamp(normalized_cost, 0.0, 1.0);
  return 1.0 - clamped;
}

double success_probability(std::span<const double> ars, double threshold) {
  if (ars.empty()) throw ValidationError("success_probability needs at least one sample");
  std::size_t hits = 0;
  for (double ar : ars)
    if (ar >= threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(ars.size());
}

std::optional<double> time_to_solution(std::span<const std::pair<int, double>> success_by_resource,
                                       double confidence) {
  if (success_by_resource.empty()) throw ValidationError("time_to_solution needs at least one resource level");
  if (!(confidence > 0.0) || !(confidence < 1.0)) throw ValidationError("confidence must lie in (0, 1)");
  const double log_failure = std::log(1.0 - confidence);
  std::optional<double> best;
  for (const auto& [resource, p] : success_by_resource) {
    if (p < 0.0 || p > 1.0) throw ValidationError("success probability outside [0, 1]");
    if (p == 0.0) continue;  // this level never reaches the threshold
    double candidate;
    if (p == 1.0) {
      candidate = resource;  // a single run suffices
    } else {
      candidate = resource * (log_failure / std::log(1.0 - p) + 1.0);
    }
    if (!best || candidate < *best) best = candidate;
  }
  return best;
}

Aggregate aggregate(std::span<const double> values) {
  if (values.empty()) throw ValidationError("aggregate needs at least one value");
  Aggregate out;
  out.count = values.size();
  out.min = values[0];
  out.max = values[0];
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
  }
  const auto n = static_cast<double>(values.size());
  out.mean = sum / n;
  if (values.size() == 1) {
    out.degenerate = true;
    return out;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t_distribution<double> dist(n - 1.0);
  out.ci95_half_width = boost::math::quantile(dist, 0.975) * sd / std::sqrt(n);
  return out;
}

namespace {
constexpr std::string_view kRecordsHeader = "algorithm,qubits,load,s,sample_index,normalized_cost,ar";
}

std::string records_to_csv(std::span<const BenchRecord> records) {
  std::string out(kRecordsHeader);
  out.push_back('\n');
  for (const auto& r : records) {
    out += r.algorithm;
    out += ',' + std::to_string(r.qubits);
    out += ',' + format_double(r.load);
    out += ',' + std::to_string(r.resource);
    out += ',' + std::to_string(r.sample_index);
    out += ',' + format_double(r.normalized_cost);
    out += ',' + format_double(r.ar);
    out.push_back('\n');
  }
  return out;
}

std::vector<BenchRecord> records_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader)
    throw ParseError("records CSV: unexpected header '" + line + "'");
  std::vector<BenchRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tok;
    BenchRecord r;
    auto next = [&](const char* what) {
      if (!std::getline(fields, tok, ','))
        throw ParseError("records CSV line " + std::to_string(line_no) + ": missing " + what);
      return tok;
    };
    r.algorithm = next("algorithm");
    r.qubits = std::stoi(next("qubits"));
    r.load = std::stod(next("load"));
    r.resource = std::stoi(next("s"));
    r.sample_index = std::stoi(next("sample_index"));
    r.normalized_cost = std::stod(next("normalized_cost"));
    r.ar = std::stod(next("ar"));
    records.push_back(std::move(r));
  }
  return records;
}

void write_records_csv(const std::filesystem::path& path, std::span<const BenchRecord> records) {
  write_file_atomic(path, records_to_csv(records));
}

std::vector<BenchRecord> read_records_csv(const std::filesystem::path& path) {
  return records_from_csv(read_file(path));
}

}  // namespace quso
