#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "quso/qaoa.hpp"
#include "quso/util.hpp"

using namespace quso;
using testing::dense_qaoa_reference;

namespace {

CostTable two_level_table() { return CostTable::from_raw({0.0, 1.0}, 0); }

CostTable random_table(Rng& rng, int bits) {
  std::vector<double> raw(std::size_t{1} << bits);
  for (auto& v : raw) v = rng.uniform_double() * 10.0;
  return CostTable::from_raw(std::move(raw), 0);
}

}  // namespace

TEST_CASE("ramp schedule endpoints and shape") {
  SUBCASE("p = 1") {
    const RampSchedule s = make_schedule(1);
    CHECK(s.gammas == std::vector<double>{1.0});
    CHECK(s.betas == std::vector<double>{-1.0});
  }
  SUBCASE("p = 4") {
    const RampSchedule s = make_schedule(4);
    CHECK(s.gammas == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK(s.betas == std::vector<double>{-1.0, -0.75, -0.5, -0.25});
  }
  SUBCASE("p = 1024") {
    const RampSchedule s = make_schedule(1024);
    REQUIRE(s.layers() == 1024);
    CHECK(s.gammas.front() == 1.0 / 1024);
    CHECK(s.gammas.back() == 1.0);
    CHECK(s.betas.front() == -1.0);
    CHECK(s.betas.back() == -1.0 / 1024);
    for (int k = 1; k < 1024; ++k) {
      CHECK(s.gammas[static_cast<std::size_t>(k)] > s.gammas[static_cast<std::size_t>(k - 1)]);
      CHECK(std::abs(s.betas[static_cast<std::size_t>(k)]) < std::abs(s.betas[static_cast<std::size_t>(k - 1)]));
    }
  }
  SUBCASE("p = 0 is rejected") { CHECK_THROWS_AS(make_schedule(0), ValidationError); }
}

TEST_CASE("cost phase: gamma = 0 is a bit-exact identity") {
  const CostTable t = two_level_table();
  Statevector s = Statevector::uniform(1);
  const auto before = s.amplitudes;
  apply_cost_phase(s, t, 0.0);
  CHECK(s.amplitudes == before);
}

TEST_CASE("cost phase preserves per-amplitude modulus") {
  Rng rng(41);
  const CostTable t = random_table(rng, 5);
  Statevector s = Statevector::uniform(5);
  const auto before = s.amplitudes;
  apply_cost_phase(s, t, 2.37);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(std::abs(std::abs(s.amplitudes[i]) - std::abs(before[i])) < 1e-15);
}

TEST_CASE("cost phase at gamma = pi flips the unit-cost amplitude") {
  const CostTable t = two_level_table();
  Statevector s = Statevector::uniform(1);
  apply_cost_phase(s, t, std::acos(-1.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(s.amplitudes[0].real() == doctest::Approx(inv_sqrt2).epsilon(1e-14));
  CHECK(std::abs(s.amplitudes[0].imag()) < 1e-15);
  CHECK(s.amplitudes[1].real() == doctest::Approx(-inv_sqrt2).epsilon(1e-14));
  CHECK(std::abs(s.amplitudes[1].imag()) < 1e-12);
}

TEST_CASE("mixer: beta = 0 is the identity") {
  Statevector s = Statevector::basis(3, 5);
  const auto before = s.amplitudes;
  apply_mixer(s, 0.0);
  CHECK(s.amplitudes == before);
}

TEST_CASE("mixer closed forms on one qubit") {
  SUBCASE("beta = pi/2 sends |0> to -i|1>") {
    Statevector s = Statevector::basis(1, 0);
    apply_mixer(s, std::acos(-1.0) / 2);
    CHECK(std::abs(s.amplitudes[0]) < 1e-15);
    CHECK(s.amplitudes[1].real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.amplitudes[1].imag() == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("beta = -1 sends |0> to cos(1)|0> + i sin(1)|1>") {
    Statevector s = Statevector::basis(1, 0);
    apply_mixer(s, -1.0);
    CHECK(s.amplitudes[0].real() == doctest::Approx(std::cos(1.0)).epsilon(1e-14));
    CHECK(s.amplitudes[0].imag() == 0.0);
    CHECK(s.amplitudes[1].real() == 0.0);
    CHECK(s.amplitudes[1].imag() == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
  }
}

TEST_CASE("all-zero schedule leaves the uniform distribution") {
  Rng rng(42);
  const CostTable t = random_table(rng, 4);
  RampSchedule zeros;
  zeros.gammas.assign(6, 0.0);
  zeros.betas.assign(6, 0.0);
  const auto probs = run_qaoa(t, zeros);
  for (double p : probs) CHECK(p == doctest::Approx(1.0 / 16).epsilon(1e-12));
}

TEST_CASE("single-qubit ramp p=1 closed form") {
  // hand-computed: state (1, e^{-i}) / sqrt2, then exp(-i (-1) X);
  // P(0) = |cos1 + sin^2 1 + i sin1 cos1|^2 / 2
  const double c = std::cos(1.0);
  const double s = std::sin(1.0);
  const double re = c + s * s;
  const double im = s * c;
  const double p0_reference = (re * re + im * im) / 2.0;

  const CostTable t = two_level_table();
  const auto probs = run_qaoa(t, make_schedule(1));
  CHECK(probs[0] == doctest::Approx(p0_reference).epsilon(1e-14));
  CHECK(probs[0] == doctest::Approx(0.8825737006171462).epsilon(1e-12));
  CHECK(probs[1] == doctest::Approx(1.0 - 0.8825737006171462).epsilon(1e-10));
}

TEST_CASE("matches the dense Kronecker reference for n <= 3") {
  Rng rng(43);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      const CostTable t = random_table(rng, n);
      RampSchedule schedule;
      const int layers = 1 + static_cast<int>(rng.uniform_index(5));
      for (int k = 0; k < layers; ++k) {
        schedule.gammas.push_back(4.0 * rng.uniform_double() - 2.0);
        schedule.betas.push_back(4.0 * rng.uniform_double() - 2.0);
      }
      Statevector s = Statevector::uniform(n);
      evolve(s, t, schedule);
      const auto reference = dense_qaoa_reference(t, schedule);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s.amplitudes[i] - reference[i]) < 1e-10);
    }
  }
}

TEST_CASE("consecutive cost phases compose additively") {
  Rng rng(44);
  const CostTable t = random_table(rng, 6);
  Statevector a = Statevector::uniform(6);
  apply_cost_phase(a, t, 0.7);
  apply_cost_phase(a, t, 0.9);
  Statevector b = Statevector::uniform(6);
  apply_cost_phase(b, t, 1.6);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.amplitudes[i] - b.amplitudes[i]) < 1e-12);
}

TEST_CASE("mixers compose additively") {
  Rng rng(45);
  Statevector a = Statevector::uniform(5);
  apply_cost_phase(a, random_table(rng, 5), 1.1);  // non-trivial state first
  Statevector b = a;
  apply_mixer(a, 0.4);
  apply_mixer(a, -0.9);
  apply_mixer(b, -0.5);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.amplitudes[i] - b.amplitudes[i]) < 1e-12);
}

TEST_CASE("norm is preserved through deep evolutions") {
  Rng rng(46);
  const CostTable t = random_table(rng, 8);
  Statevector s = Statevector::uniform(8);
  evolve(s, t, make_schedule(1024));
  CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
}

TEST_CASE("threaded and serial evolutions agree bit-exactly") {
  Rng rng(47);
  const CostTable t = random_table(rng, 9);
  Statevector a = Statevector::uniform(9);
  Statevector b = Statevector::uniform(9);
  evolve(a, t, make_schedule(32), 1);
  evolve(b, t, make_schedule(32), 4);
  CHECK(a.amplitudes == b.amplitudes);
}

TEST_CASE("size mismatch is rejected") {
  const CostTable t = two_level_table();
  Statevector s = Statevector::uniform(2);
  CHECK_THROWS_AS(apply_cost_phase(s, t, 1.0), ValidationError);
}

TEST_CASE("sampling: point mass yields identical samples") {
  const std::vector<double> dist{0.0, 1.0, 0.0, 0.0};
  const auto samples = sample_outcomes(dist, 50, 123);
  for (auto s : samples) CHECK(s == 1);
}

TEST_CASE("sampling: uniform two-outcome frequency within 3 sigma") {
  const std::vector<double> dist{0.5, 0.5};
  const int n = 1'000'000;
  const auto samples = sample_outcomes(dist, n, 2718);
  std::size_t ones = 0;
  for (auto s : samples) ones += s;
  const double freq = static_cast<double>(ones) / n;
  CHECK(std::abs(freq - 0.5) < 0.002);  // 3 binomial sigma is ~0.0015
}

TEST_CASE("sampling is deterministic in the seed") {
  const std::vector<double> dist{0.25, 0.25, 0.25, 0.25};
  CHECK(sample_outcomes(dist, 100, 5) == sample_outcomes(dist, 100, 5));
  CHECK(sample_outcomes(dist, 100, 5) != sample_outcomes(dist, 100, 6));
}

TEST_CASE("sampling rejects bad inputs") {
  CHECK_THROWS_AS(sample_outcomes({0.5, 0.5}, 0, 1), ValidationError);
  CHECK_THROWS_AS(sample_outcomes({0.5, 0.4}, 10, 1), ValidationError);   // sums to 0.9
  CHECK_THROWS_AS(sample_outcomes({1.5, -0.5}, 10, 1), ValidationError);  // negative mass
  // tiny deviation within 1e-9 is renormalized, not rejected
  CHECK_NOTHROW(sample_outcomes({0.5 + 2e-10, 0.5}, 10, 1));
}

TEST_CASE("expected cost and success mass") {
  const CostTable t = CostTable::from_raw({0.0, 2.0, 1.0, 2.0}, 0);  // normalized: 0, 1, 0.5, 1
  const std::vector<double> dist{0.4, 0.1, 0.3, 0.2};
  CHECK(expected_cost(dist, t) == doctest::Approx(0.1 + 0.15 + 0.2).epsilon(1e-14));
  CHECK(success_mass(dist, t, 0.95) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(success_mass(dist, t, 0.5) == doctest::Approx(0.7).epsilon(1e-14));
}
