// Verification oracle for the flow solver. Deliberately self-contained: it
// rebuilds the Laplacian and injection from the scenario on every call and
// solves by Gaussian elimination with partial pivoting. No Eigen, no
// factorization reuse, no code shared with FlowSolver.

#include <cmath>
#include <cstdlib>
#include <vector>

#include "quso/powerflow.hpp"
#include "quso/util.hpp"

namespace quso {

namespace {

// Solves a (x) = b in place; a is row-major m x m, destroyed.
std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b, std::size_t m) {
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * m + col]);
    for (std::size_t row = col + 1; row < m; ++row) {
      double v = std::abs(a[row * m + col]);
      if (v > best) {
        best = v;
        pivot = row;
      }
    }
    if (best == 0.0) throw SingularSystemError("singular matrix in dense oracle solve");
    if (pivot != col) {
      for (std::size_t k = col; k < m; ++k) std::swap(a[pivot * m + k], a[col * m + k]);
      std::swap(b[pivot], b[col]);
    }
    const double diag = a[col * m + col];
    for (std::size_t row = col + 1; row < m; ++row) {
      const double factor = a[row * m + col] / diag;
      if (factor == 0.0) continue;
      for (std::size_t k = col; k < m; ++k) a[row * m + k] -= factor * a[col * m + k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<double> x(m, 0.0);
  for (std::size_t row = m; row-- > 0;) {
    double acc = b[row];
    for (std::size_t k = row + 1; k < m; ++k) acc -= a[row * m + k] * x[k];
    x[row] = acc / a[row * m + row];
  }
  return x;
}

}  // namespace

FlowSolution solve_flow_dense_oracle(const Scenario& scenario, std::uint64_t bits,
                                     double imbalance_penalty) {
  const int n = scenario.grid.num_buses;
  const int r = scenario.grid.reference_bus;
  const std::size_t m = static_cast<std::size_t>(n - 1);

  // full injection vector, then drop the reference entry
  std::vector<double> p(scenario.load_injection);
  for (int g = 0; g < scenario.num_generators(); ++g) {
    if ((bits >> g) & 1u)
      p[static_cast<std::size_t>(scenario.generators[static_cast<std::size_t>(g)] - 1)] +=
          scenario.capacity_per_generator;
  }

  std::vector<double> lap(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (const auto& line : scenario.grid.lines) {
    const std::size_t a = static_cast<std::size_t>(line.i - 1);
    const std::size_t b = static_cast<std::size_t>(line.j - 1);
    lap[a * n + a] += line.susceptance;
    lap[b * n + b] += line.susceptance;
    lap[a * n + b] -= line.susceptance;
    lap[b * n + a] -= line.susceptance;
  }

  std::vector<double> reduced(m * m);
  std::vector<double> rhs(m);
  for (int a = 0, ra = 0; a < n; ++a) {
    if (a == r - 1) continue;
    rhs[static_cast<std::size_t>(ra)] = p[static_cast<std::size_t>(a)];
    for (int b = 0, rb = 0; b < n; ++b) {
      if (b == r - 1) continue;
      reduced[static_cast<std::size_t>(ra) * m + rb] = lap[static_cast<std::size_t>(a) * n + b];
      ++rb;
    }
    ++ra;
  }

  auto reduced_theta = gauss_solve(std::move(reduced), std::move(rhs), m);

  FlowSolution out;
  out.theta.assign(static_cast<std::size_t>(n), 0.0);
  for (int a = 0, ra = 0; a < n; ++a) {
    if (a == r - 1) continue;
    out.theta[static_cast<std::size_t>(a)] = reduced_theta[static_cast<std::size_t>(ra++)];
  }

  out.line_flows.resize(scenario.grid.lines.size());
  double cost = 0.0;
  for (std::size_t e = 0; e < scenario.grid.lines.size(); ++e) {
    const auto& line = scenario.grid.lines[e];
    const double flow = line.susceptance * (out.theta[static_cast<std::size_t>(line.i - 1)] -
                                            out.theta[static_cast<std::size_t>(line.j - 1)]);
    out.line_flows[e] = flow;
    cost += scenario.line_costs[e] * std::abs(flow);
  }
  if (imbalance_penalty != 0.0) {
    double net = 0.0;
    for (double v : p) net += v;
    cost += imbalance_penalty * net * net;
  }
  out.cost = cost;
  return out;
}

}  // namespace quso
