#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace indeg {

/// minimize 1/2 x'Qx + q'x  subject to  sum(x) = b,  x >= 0.
struct QpProblem {
  Eigen::MatrixXd Q;  ///< symmetric positive definite
  Eigen::VectorXd q;
  double equality_sum = 1.0;
};

struct QpSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  double multiplier = 0.0;     ///< of the equality constraint
  double kkt_residual = 0.0;   ///< max of stationarity, dual and complementarity violations
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::size_t> active_set;  ///< indices held at zero
};

double qp_objective(const QpProblem& p, const Eigen::VectorXd& x);

/// KKT residual of x for the problem, with mu fitted on the positive entries.
double qp_kkt_residual(const QpProblem& p, const Eigen::VectorXd& x, double* multiplier = nullptr);

/// Primal active-set method with the equality constraint always in the
/// working set. `start` must be feasible; defaults to b/m in every entry.
/// Throws NumericalError when Q is not positive definite or malformed.
QpSolution solve_qp(const QpProblem& p, double tol = 1e-9, std::size_t max_iter = 10000,
                    const std::optional<Eigen::VectorXd>& start = std::nullopt);

}  // namespace indeg
