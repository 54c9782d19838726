#include "quso/powerflow.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "quso/util.hpp"

namespace quso {

nlohmann::json flow_to_json(const FlowSolution& solution) {
  return {{"theta", solution.theta}, {"line_flows", solution.line_flows}, {"cost", solution.cost}};
}

std::vector<double> reduced_laplacian(const PowerGrid& grid) {
  validate_grid(grid);
  const int n = grid.num_buses;
  const int r = grid.reference_bus;
  const std::size_t m = static_cast<std::size_t>(n - 1);
  std::vector<double> full(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  auto at = [&](int a, int b) -> double& { return full[static_cast<std::size_t>(a) * n + b]; };
  for (const auto& line : grid.lines) {
    const int a = line.i - 1;
    const int b = line.j - 1;
    at(a, a) += line.susceptance;
    at(b, b) += line.susceptance;
    at(a, b) -= line.susceptance;
    at(b, a) -= line.susceptance;
  }
  std::vector<double> reduced(m * m);
  for (int a = 0, ra = 0; a < n; ++a) {
    if (a == r - 1) continue;
    for (int b = 0, rb = 0; b < n; ++b) {
      if (b == r - 1) continue;
      reduced[static_cast<std::size_t>(ra) * m + rb] = at(a, b);
      ++rb;
    }
    ++ra;
  }
  return reduced;
}

struct FlowSolver::Impl {
  Eigen::LLT<Eigen::MatrixXd> llt;
};

FlowSolver::FlowSolver(Scenario scenario, double imbalance_penalty)
    : scenario_(std::move(scenario)), imbalance_penalty_(imbalance_penalty), impl_(std::make_unique<Impl>()) {
  const int n = scenario_.grid.num_buses;
  const std::size_t m = static_cast<std::size_t>(n - 1);
  auto reduced = reduced_laplacian(scenario_.grid);
  Eigen::MatrixXd mat(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = reduced[a * m + b];
  impl_->llt.compute(mat);
  if (impl_->llt.info() != Eigen::Success)
    throw SingularSystemError("reduced Laplacian is not positive definite (disconnected grid?)");
}

FlowSolver::~FlowSolver() = default;
FlowSolver::FlowSolver(FlowSolver&&) noexcept = default;
FlowSolver& FlowSolver::operator=(FlowSolver&&) noexcept = default;

FlowSolution FlowSolver::solve_injection(const std::vector<double>& injection) const {
  const int n = scenario_.grid.num_buses;
  const int r = scenario_.grid.reference_bus;
  if (injection.size() != static_cast<std::size_t>(n))
    throw ValidationError("injection vector length does not match bus count");

  Eigen::VectorXd rhs(n - 1);
  for (int bus = 0, k = 0; bus < n; ++bus) {
    if (bus == r - 1) continue;
    rhs(k++) = injection[static_cast<std::size_t>(bus)];
  }
  Eigen::VectorXd reduced_theta = impl_->llt.solve(rhs);

  FlowSolution out;
  out.theta.assign(static_cast<std::size_t>(n), 0.0);
  for (int bus = 0, k = 0; bus < n; ++bus) {
    if (bus == r - 1) continue;
    out.theta[static_cast<std::size_t>(bus)] = reduced_theta(k++);
  }

  out.line_flows.resize(scenario_.grid.lines.size());
  double cost = 0.0;
  for (std::size_t e = 0; e < scenario_.grid.lines.size(); ++e) {
    const auto& line = scenario_.grid.lines[e];
    const double flow = line.susceptance * (out.theta[static_cast<std::size_t>(line.i - 1)] -
                                            out.theta[static_cast<std::size_t>(line.j - 1)]);
    out.line_flows[e] = flow;
    cost += scenario_.line_costs[e] * std::abs(flow);
  }
  if (imbalance_penalty_ != 0.0) {
    double net = 0.0;
    for (double p : injection) net += p;
    cost += imbalance_penalty_ * net * net;
  }
  out.cost = cost;
  return out;
}

FlowSolution FlowSolver::solve(std::uint64_t bits) const {
  if (scenario_.num_generators() < 64 && (bits >> scenario_.num_generators()) != 0)
    throw ValidationError("bitstring has more bits than generators");
  return solve_injection(injection_vector(scenario_, bits));
}

double FlowSolver::cost(std::uint64_t bits) const { return solve(bits).cost; }

FlowSolution solve_flow(const Scenario& scenario, std::uint64_t bits, double imbalance_penalty) {
  return FlowSolver(scenario, imbalance_penalty).solve(bits);
}

}  // namespace quso
