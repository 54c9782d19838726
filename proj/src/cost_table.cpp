#include "quso/cost_table.hpp"

#include <bit>
#include <string>

#include "quso/powerflow.hpp"
#include "quso/util.hpp"

namespace quso {

namespace {

constexpr std::string_view kMagic = "QUSOCTBL";
constexpr std::uint32_t kVersion = 1;

void finalize(CostTable& table) {
  const std::size_t count = table.raw.size();
  std::size_t min_i = 0;
  std::size_t max_i = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (table.raw[i] < table.raw[min_i]) min_i = i;
    if (table.raw[i] > table.raw[max_i]) max_i = i;
  }
  table.min_index = min_i;
  table.max_index = max_i;
  const double lo = table.raw[min_i];
  const double hi = table.raw[max_i];
  table.normalized.resize(count);
  if (hi > lo) {
    table.degenerate = false;
    const double span = hi - lo;
    for (std::size_t i = 0; i < count; ++i) table.normalized[i] = (table.raw[i] - lo) / span;
  } else {
    table.degenerate = true;
    for (std::size_t i = 0; i < count; ++i) table.normalized[i] = 0.0;
  }
}

}  // namespace

CostTable CostTable::from_raw(std::vector<double> raw_costs, std::uint64_t scenario_digest) {
  if (raw_costs.empty() || !std::has_single_bit(raw_costs.size()))
    throw ValidationError("raw cost array length must be a power of two");
  CostTable table;
  table.num_bits = std::countr_zero(raw_costs.size());
  table.raw = std::move(raw_costs);
  table.scenario_digest = scenario_digest;
  finalize(table);
  return table;
}

CostTable build_table(const Scenario& scenario, const BuildOptions& options) {
  const int m = scenario.num_generators();
  if (m > options.max_bits)
    throw CapacityError("cost table for " + std::to_string(m) + " generators needs 2^" + std::to_string(m) +
                        " entries (" + std::to_string((std::uint64_t{16} << m)) + " bytes), limit is 2^" +
                        std::to_string(options.max_bits));

  const std::size_t count = std::size_t{1} << m;
  CostTable table;
  table.num_bits = m;
  table.scenario_digest = scenario.digest();
  table.raw.resize(count);

  const FlowSolver solver(scenario, options.imbalance_penalty);
  double* raw = table.raw.data();
  parallel_for(0, count, options.threads, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) raw[i] = solver.cost(i);
  });

  finalize(table);
  return table;
}

void save_table(const CostTable& table, const std::filesystem::path& path) {
  ByteWriter w;
  w.bytes(kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(table.num_bits));
  w.u64(table.scenario_digest);
  w.u64(table.min_index);
  w.u64(table.max_index);
  w.u8(table.degenerate ? 1 : 0);
  for (int i = 0; i < 7; ++i) w.u8(0);
  for (double v : table.raw) w.f64(v);
  for (double v : table.normalized) w.f64(v);
  write_file_atomic(path, w.data());
}

CostTable load_table(const std::filesystem::path& path) {
  const std::string blob = read_file(path);
  if (blob.size() < kTableHeaderBytes || std::string_view(blob).substr(0, kMagic.size()) != kMagic)
    throw FormatError("not a cost table file: " + path.string());
  ByteReader r(std::string_view(blob).substr(kMagic.size()));
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw FormatError("unsupported cost table version " + std::to_string(version) + ": " + path.string());

  CostTable table;
  table.num_bits = static_cast<int>(r.u32());
  table.scenario_digest = r.u64();
  table.min_index = r.u64();
  table.max_index = r.u64();
  table.degenerate = r.u8() != 0;
  for (int i = 0; i < 7; ++i) r.u8();

  if (table.num_bits < 0 || table.num_bits > 40) throw FormatError("implausible num_bits in " + path.string());
  const std::size_t count = std::size_t{1} << table.num_bits;
  if (r.remaining() != 2 * 8 * count)
    throw FormatError("truncated cost table file (expected " + std::to_string(kTableHeaderBytes + 16 * count) +
                      " bytes, got " + std::to_string(blob.size()) + "): " + path.string());
  table.raw.resize(count);
  for (std::size_t i = 0; i < count; ++i) table.raw[i] = r.f64();
  table.normalized.resize(count);
  for (std::size_t i = 0; i < count; ++i) table.normalized[i] = r.f64();
  return table;
}

CostTable load_table_checked(const std::filesystem::path& path, std::uint64_t expected_digest) {
  CostTable table = load_table(path);
  if (table.scenario_digest != expected_digest)
    throw StaleCacheError("cost table " + path.string() + " was built for a different scenario");
  return table;
}

}  // namespace quso
