#pragma once

// Exhaustive objective evaluation over all 2^M generator bitstrings, min/max
// rescaled to [0, 1]. This classical precomputation is what stands in for the
// quantum simulation oracle: index i encodes the bitstring with generator b
// on bit b (least-significant first).

#include <cstdint>
#include <filesystem>
#include <vector>

#include "quso/scenario.hpp"

namespace quso {

struct CostTable {
  int num_bits = 0;
  std::vector<double> raw;         // length 2^num_bits, transmission cost per index
  std::vector<double> normalized;  // (raw - min) / (max - min), all 0 when degenerate
  std::size_t min_index = 0;       // first index attaining the minimum
  std::size_t max_index = 0;       // first index attaining the maximum
  bool degenerate = false;         // max == min: every solution is optimal
  std::uint64_t scenario_digest = 0;

  std::size_t size() const { return raw.size(); }

  // Rescales a raw cost array; num_bits is inferred (length must be a power
  // of two).
  static CostTable from_raw(std::vector<double> raw_costs, std::uint64_t scenario_digest);
};

struct BuildOptions {
  int max_bits = 24;  // refuse larger instances: the table needs 2 * 8 * 2^M bytes
  int threads = 0;    // 0 = hardware concurrency; any count gives bit-identical tables
  double imbalance_penalty = 0.0;
};

CostTable build_table(const Scenario& scenario, const BuildOptions& options = {});

// Binary container, little-endian: 48-byte header (magic "QUSOCTBL", u32
// version, u32 num_bits, u64 scenario digest, u64 min index, u64 max index,
// u8 degenerate flag, 7 pad bytes) followed by the raw then the normalized
// array as 64-bit floats. Round-trips bit-exactly.
inline constexpr std::size_t kTableHeaderBytes = 48;

void save_table(const CostTable& table, const std::filesystem::path& path);
CostTable load_table(const std::filesystem::path& path);

// As load_table, but rejects a file whose stored digest does not match.
CostTable load_table_checked(const std::filesystem::path& path, std::uint64_t expected_digest);

}  // namespace quso
