#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>

#include "helpers.hpp"
#include "quso/cost_table.hpp"
#include "quso/powerflow.hpp"
#include "quso/util.hpp"

using namespace quso;

namespace {

Scenario triangle_one_generator() {
  PowerGrid g;
  g.num_buses = 3;
  g.reference_bus = 3;
  g.lines = {{1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}};
  Scenario s;
  s.grid = std::move(g);
  s.generators = {1};
  s.capacity_per_generator = 1.0;
  s.total_capacity = 1.0;
  s.load_injection = {0.0, -1.0, 0.0};
  s.line_costs = {1.0, 1.0, 1.0};
  s.load_fraction = 1.0;
  s.seed = 0;
  return s;
}

}  // namespace

TEST_CASE("min/max rescale endpoints") {
  const CostTable t = CostTable::from_raw({4.0, 2.0}, 0);
  CHECK(t.normalized[0] == 1.0);
  CHECK(t.normalized[1] == 0.0);
  CHECK(t.min_index == 1);
  CHECK(t.max_index == 0);
  CHECK_FALSE(t.degenerate);
}

TEST_CASE("degenerate all-equal table normalizes to zero") {
  const CostTable t = CostTable::from_raw({3.0, 3.0, 3.0, 3.0}, 0);
  CHECK(t.degenerate);
  for (double v : t.normalized) CHECK(v == 0.0);
}

TEST_CASE("from_raw rejects non-power-of-two lengths") {
  CHECK_THROWS_AS(CostTable::from_raw({1.0, 2.0, 3.0}, 0), ValidationError);
  CHECK_THROWS_AS(CostTable::from_raw({}, 0), ValidationError);
}

TEST_CASE("triangle single-generator table against the dense oracle") {
  const Scenario s = triangle_one_generator();
  const CostTable t = build_table(s);
  REQUIRE(t.size() == 2);
  CHECK(t.raw[1] == doctest::Approx(4.0 / 3).epsilon(1e-12));
  // serving the load purely from the slack costs the same here: 1/3 + 1/3 + 2/3
  const double off = solve_flow_dense_oracle(s, 0).cost;
  CHECK(t.raw[0] == doctest::Approx(off).epsilon(1e-12));
  CHECK(off == doctest::Approx(4.0 / 3).epsilon(1e-12));
}

TEST_CASE("table entries match the dense oracle per bitstring") {
  Rng rng(31);
  const Scenario s = testing::random_scenario(rng, 18, 8);
  const CostTable t = build_table(s);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double oracle = solve_flow_dense_oracle(s, i).cost;
    CHECK(std::abs(t.raw[i] - oracle) / std::max(1.0, oracle) < 1e-9);
  }
}

TEST_CASE("rescaling preserves ordering") {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> raw(64);
    for (auto& v : raw) v = rng.uniform_double() * 100.0;
    const CostTable t = CostTable::from_raw(raw, 0);
    std::size_t min_i = 0, max_i = 0;
    for (std::size_t i = 1; i < raw.size(); ++i) {
      if (t.normalized[i] < t.normalized[min_i]) min_i = i;
      if (t.normalized[i] > t.normalized[max_i]) max_i = i;
    }
    CHECK(t.raw[min_i] == t.raw[t.min_index]);
    CHECK(t.raw[max_i] == t.raw[t.max_index]);
    for (double v : t.normalized) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(t.normalized[t.min_index] == 0.0);
    CHECK(t.normalized[t.max_index] == 1.0);
  }
}

TEST_CASE("parallel and serial builds are bit-identical") {
  Rng rng(33);
  const Scenario s = testing::random_scenario(rng, 22, 10);
  const CostTable serial = build_table(s, {.threads = 1});
  const CostTable parallel = build_table(s, {.threads = 4});
  REQUIRE(serial.size() == parallel.size());
  CHECK(std::memcmp(serial.raw.data(), parallel.raw.data(), serial.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(serial.normalized.data(), parallel.normalized.data(), serial.size() * sizeof(double)) == 0);
}

TEST_CASE("capacity limit is enforced with the memory need named") {
  Rng rng(34);
  const Scenario s = testing::random_scenario(rng, 12, 6);
  CHECK_THROWS_WITH_AS(build_table(s, {.max_bits = 4}), doctest::Contains("2^6"), CapacityError);
}

TEST_CASE("save/load round-trip is bit-identical") {
  Rng rng(35);
  const Scenario s = testing::random_scenario(rng, 14, 6);
  const CostTable t = build_table(s);
  testing::ScratchDir dir("table");
  const auto path = dir.path() / "t.qct";
  save_table(t, path);

  const CostTable back = load_table(path);
  CHECK(back.num_bits == t.num_bits);
  CHECK(back.scenario_digest == t.scenario_digest);
  CHECK(back.min_index == t.min_index);
  CHECK(back.max_index == t.max_index);
  CHECK(back.degenerate == t.degenerate);
  CHECK(std::memcmp(back.raw.data(), t.raw.data(), t.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(back.normalized.data(), t.normalized.data(), t.size() * sizeof(double)) == 0);

  CHECK_NOTHROW(load_table_checked(path, s.digest()));
}

TEST_CASE("digest mismatch is a stale-cache error") {
  Rng rng(36);
  const Scenario s = testing::random_scenario(rng, 10, 4);
  const CostTable t = build_table(s);
  testing::ScratchDir dir("stale");
  const auto path = dir.path() / "t.qct";
  save_table(t, path);
  CHECK_THROWS_AS(load_table_checked(path, s.digest() ^ 1), StaleCacheError);
}

TEST_CASE("truncated and corrupt files are format errors") {
  Rng rng(37);
  const Scenario s = testing::random_scenario(rng, 10, 4);
  const CostTable t = build_table(s);
  testing::ScratchDir dir("corrupt");
  const auto path = dir.path() / "t.qct";
  save_table(t, path);

  const std::string blob = read_file(path);
  write_file_atomic(dir.path() / "short.qct", std::string_view(blob).substr(0, blob.size() - 9));
  CHECK_THROWS_AS(load_table(dir.path() / "short.qct"), FormatError);

  write_file_atomic(dir.path() / "junk.qct", "not a table at all");
  CHECK_THROWS_AS(load_table(dir.path() / "junk.qct"), FormatError);
}

TEST_CASE("file size is header plus two double arrays") {
  Rng rng(38);
  for (int bits : {1, 4, 6}) {
    const Scenario s = testing::random_scenario(rng, 10, bits);
    const CostTable t = build_table(s);
    testing::ScratchDir dir("size");
    const auto path = dir.path() / "t.qct";
    save_table(t, path);
    CHECK(std::filesystem::file_size(path) == kTableHeaderBytes + 2ull * 8ull * (1ull << bits));
  }
}
