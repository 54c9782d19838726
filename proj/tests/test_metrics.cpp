#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "quso/cost_table.hpp"
#include "quso/metrics.hpp"
#include "quso/util.hpp"

using namespace quso;

TEST_CASE("approximation ratio endpoints and formula") {
  CHECK(approximation_ratio(0.0) == 1.0);
  CHECK(approximation_ratio(1.0) == 0.0);
  CHECK(approximation_ratio(0.25) == 0.75);
  // values within 1e-9 of the boundary are clamped
  CHECK(approximation_ratio(-5e-10) == 1.0);
  CHECK(approximation_ratio(1.0 + 5e-10) == 0.0);
  CHECK_THROWS_AS(approximation_ratio(1.1), DomainError);
  CHECK_THROWS_AS(approximation_ratio(-0.001), DomainError);
}

TEST_CASE("table argmin maps to AR exactly 1 and argmax to exactly 0") {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> raw(128);
    for (auto& v : raw) v = rng.uniform_double() * 50.0;
    const CostTable t = CostTable::from_raw(raw, 0);
    CHECK(approximation_ratio(t.normalized[t.min_index]) == 1.0);
    CHECK(approximation_ratio(t.normalized[t.max_index]) == 0.0);
  }
}

TEST_CASE("success probability is the hit fraction") {
  const std::vector<double> ars{1.0, 0.97, 0.9, 0.95, 0.2};
  CHECK(success_probability(ars, 0.95) == doctest::Approx(3.0 / 5).epsilon(1e-15));
  CHECK(success_probability(ars, 0.0) == 1.0);
  CHECK_THROWS_AS(success_probability({}, 0.5), ValidationError);
}

TEST_CASE("time-to-solution formula and guards") {
  SUBCASE("single level, P = 0.5") {
    const std::vector<std::pair<int, double>> ps{{20, 0.5}};
    const auto tts = time_to_solution(ps);
    REQUIRE(tts.has_value());
    CHECK(*tts == doctest::Approx(20.0 * (std::log(0.01) / std::log(0.5) + 1.0)).epsilon(1e-12));
    CHECK(*tts == doctest::Approx(152.877).epsilon(1e-4));
  }
  SUBCASE("P = 1 contributes the resource itself") {
    const std::vector<std::pair<int, double>> ps{{37, 1.0}};
    CHECK(*time_to_solution(ps) == 37.0);
  }
  SUBCASE("P = 0 levels are skipped") {
    const std::vector<std::pair<int, double>> ps{{10, 0.0}, {20, 0.99}};
    CHECK(*time_to_solution(ps) == doctest::Approx(40.0).epsilon(1e-12));
  }
  SUBCASE("all-zero success is unattained") {
    const std::vector<std::pair<int, double>> ps{{10, 0.0}, {20, 0.0}};
    CHECK_FALSE(time_to_solution(ps).has_value());
  }
  SUBCASE("minimum over levels wins") {
    const std::vector<std::pair<int, double>> ps{{10, 0.9}, {20, 0.5}, {40, 1.0}};
    const double c10 = 10.0 * (std::log(0.01) / std::log(0.1) + 1.0);
    CHECK(*time_to_solution(ps) == doctest::Approx(std::min(c10, 40.0)).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(time_to_solution({}), ValidationError);
    const std::vector<std::pair<int, double>> bad{{10, 1.5}};
    CHECK_THROWS_AS(time_to_solution(bad), ValidationError);
  }
}

TEST_CASE("TTS candidate is monotone non-increasing in success probability") {
  Rng rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const double p1 = 0.01 + 0.97 * rng.uniform_double();
    const double p2 = p1 + (1.0 - p1) * rng.uniform_double();
    const int s = 1 + static_cast<int>(rng.uniform_index(100));
    const std::vector<std::pair<int, double>> low{{s, p1}};
    const std::vector<std::pair<int, double>> high{{s, p2}};
    CHECK(*time_to_solution(high) <= *time_to_solution(low) + 1e-12);
  }
}

TEST_CASE("aggregate basics") {
  SUBCASE("identical values have zero interval") {
    const std::vector<double> v{0.7, 0.7, 0.7, 0.7};
    const Aggregate a = aggregate(v);
    CHECK(a.mean == 0.7);
    CHECK(a.ci95_half_width == 0.0);
    CHECK_FALSE(a.degenerate);
  }
  SUBCASE("two-member group") {
    const std::vector<double> v{0.0, 1.0};
    CHECK(aggregate(v).mean == 0.5);
  }
  SUBCASE("single member is degenerate") {
    const std::vector<double> v{0.3};
    const Aggregate a = aggregate(v);
    CHECK(a.degenerate);
    CHECK(a.ci95_half_width == 0.0);
  }
  SUBCASE("empty input is rejected") { CHECK_THROWS_AS(aggregate({}), ValidationError); }
}

TEST_CASE("10-member interval matches the closed-form t formula") {
  const std::vector<double> v{1.2, 0.8, 1.5, 0.9, 1.1, 1.3, 0.7, 1.0, 1.4, 0.6};
  const Aggregate a = aggregate(v);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= 10.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / 9.0);
  // two-sided 95% Student-t critical value for 9 degrees of freedom
  const double t_crit = 2.2621571627982053;
  const double expected = t_crit * sd / std::sqrt(10.0);
  CHECK(a.mean == doctest::Approx(mean).epsilon(1e-15));
  CHECK(std::abs(a.ci95_half_width - expected) < 1e-12);
  CHECK(a.min == 0.6);
  CHECK(a.max == 1.5);
}

TEST_CASE("records CSV round-trip") {
  std::vector<BenchRecord> records{
      {"qaoa", 12, 0.1, 256, 0, 0.03125, 0.96875},
      {"qaoa", 12, 0.1, 256, 1, 0.0, 1.0},
      {"sa", 4, 0.7, 20, 0, 0.5, 0.5},
  };
  const std::string csv = records_to_csv(records);
  CHECK(csv.starts_with("algorithm,qubits,load,s,sample_index,normalized_cost,ar\n"));
  const auto back = records_from_csv(csv);
  CHECK(back == records);
  CHECK_THROWS_AS(records_from_csv("bogus header\n1,2,3\n"), ParseError);
}

TEST_CASE("round-trip double formatting") {
  for (double v : {0.1, 1.0 / 3.0, 152.87712379549449, 1e-300, 0.0, -2.5, 1024.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.5) == "0.5");
}
