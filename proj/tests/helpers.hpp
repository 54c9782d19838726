#pragma once

// Shared test utilities: random connected grids, scratch directories and a
// dense brute-force QAOA reference built from explicit Kronecker products.

#include <atomic>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

#include "quso/grid.hpp"
#include "quso/qaoa.hpp"
#include "quso/rng.hpp"
#include "quso/scenario.hpp"

namespace quso::testing {

// Random connected grid: random spanning tree plus extra edges, susceptances
// uniform in [0.5, 2.5).
inline PowerGrid random_connected_grid(Rng& rng, int num_buses, double extra_edge_prob = 0.2) {
  PowerGrid grid;
  grid.num_buses = num_buses;
  grid.reference_bus = num_buses;
  std::vector<std::pair<int, int>> edges;
  for (int v = 2; v <= num_buses; ++v) {
    const int u = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(v - 1))) + 1;
    edges.emplace_back(u, v);
  }
  for (int i = 1; i <= num_buses; ++i)
    for (int j = i + 1; j <= num_buses; ++j)
      if (rng.uniform_double() < extra_edge_prob) edges.emplace_back(i, j);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (auto [i, j] : edges) grid.lines.push_back({i, j, 0.5 + 2.0 * rng.uniform_double()});
  return grid;
}

inline Scenario random_scenario(Rng& rng, int num_buses, int num_generators) {
  PowerGrid grid = random_connected_grid(rng, num_buses);
  const double load_fraction = 0.1 + 0.9 * rng.uniform_double();
  return generate_scenario(grid, num_generators, 100.0 + 900.0 * rng.uniform_double(), load_fraction,
                           rng.next_u64());
}

// Unique scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("quso_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// --- dense QAOA reference ----------------------------------------------------
// Builds the full 2^n x 2^n unitaries and multiplies them out; independent of
// the statevector kernels under test.

using CMat = std::vector<std::vector<std::complex<double>>>;
using CVec = std::vector<std::complex<double>>;

inline CMat identity(std::size_t n) {
  CMat m(n, CVec(n, {0.0, 0.0}));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = {1.0, 0.0};
  return m;
}

inline CMat kron(const CMat& a, const CMat& b) {
  const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
  CMat m(ar * br, CVec(ac * bc));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l) m[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return m;
}

inline CVec matvec(const CMat& m, const CVec& v) {
  CVec out(m.size(), {0.0, 0.0});
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

// exp(-i beta X) on qubit q of n, as a dense matrix. Kronecker order: qubit 0
// is the least-significant index bit, so it sits rightmost in the product.
inline CMat x_rotation_on_qubit(int n, int q, double beta) {
  const std::complex<double> c{std::cos(beta), 0.0};
  const std::complex<double> mis{0.0, -std::sin(beta)};
  CMat gate{{c, mis}, {mis, c}};
  CMat m = identity(1);
  for (int k = n - 1; k >= 0; --k) m = kron(m, k == q ? gate : identity(2));
  return m;
}

inline CVec dense_qaoa_reference(const CostTable& table, const RampSchedule& schedule) {
  const int n = table.num_bits;
  const std::size_t dim = std::size_t{1} << n;
  CVec state(dim, std::complex<double>(std::pow(2.0, -0.5 * n), 0.0));
  for (int k = 0; k < schedule.layers(); ++k) {
    const double gamma = schedule.gammas[static_cast<std::size_t>(k)];
    CMat phase(dim, CVec(dim, {0.0, 0.0}));
    for (std::size_t i = 0; i < dim; ++i) {
      const double angle = -gamma * table.normalized[i];
      phase[i][i] = {std::cos(angle), std::sin(angle)};
    }
    state = matvec(phase, state);
    const double beta = schedule.betas[static_cast<std::size_t>(k)];
    for (int q = 0; q < n; ++q) state = matvec(x_rotation_on_qubit(n, q, beta), state);
  }
  return state;
}

}  // namespace quso::testing
