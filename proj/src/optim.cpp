#include "indeg/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "indeg/error.hpp"

namespace indeg {

double qp_objective(const QpProblem& p, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(p.Q * x) + p.q.dot(x);
}

double qp_kkt_residual(const QpProblem& p, const Eigen::VectorXd& x, double* multiplier) {
  const Eigen::VectorXd g = p.Q * x + p.q;
  const Eigen::Index m = x.size();
  // mu is the common gradient value on the support.
  double mu = 0.0;
  Eigen::Index support = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (x[i] > 0.0) {
      mu += g[i];
      ++support;
    }
  }
  mu = support > 0 ? mu / static_cast<double>(support) : g.minCoeff();
  double res = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = g[i] - mu;  // bound multiplier, must be >= 0 where x_i = 0
    res = std::max(res, x[i] > 0.0 ? std::abs(s) : -s);
    res = std::max(res, -x[i]);
  }
  res = std::max(res, std::abs(x.sum() - p.equality_sum) / std::max(1.0, p.equality_sum));
  if (multiplier) *multiplier = mu;
  return res;
}

namespace {

void check_problem(const QpProblem& p) {
  const Eigen::Index m = p.q.size();
  if (m == 0) throw NumericalError("empty QP");
  if (p.Q.rows() != m || p.Q.cols() != m) throw NumericalError("QP dimension mismatch");
  if (!(p.equality_sum > 0.0)) throw NumericalError("QP equality sum must be positive");
  const double scale = std::max(1.0, p.Q.cwiseAbs().maxCoeff());
  if ((p.Q - p.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NumericalError("QP matrix is not symmetric");
  }
}

}  // namespace

QpSolution solve_qp(const QpProblem& p, double tol, std::size_t max_iter,
                    const std::optional<Eigen::VectorXd>& start) {
  check_problem(p);
  const Eigen::Index m = p.q.size();
  const double b = p.equality_sum;

  Eigen::VectorXd x;
  if (start) {
    x = *start;
    if (x.size() != m || x.minCoeff() < 0.0 || std::abs(x.sum() - b) > 1e-9 * std::max(1.0, b)) {
      throw NumericalError("QP warm start is not feasible");
    }
  } else {
    x = Eigen::VectorXd::Constant(m, b / static_cast<double>(m));
  }
  std::vector<char> fixed(static_cast<std::size_t>(m), 0);
  for (Eigen::Index i = 0; i < m; ++i) fixed[i] = x[i] <= 0.0 ? 1 : 0;

  QpSolution sol;
  std::vector<Eigen::Index> free_idx;
  free_idx.reserve(static_cast<std::size_t>(m));
  double mu = 0.0;

  for (sol.iterations = 0; sol.iterations < max_iter; ++sol.iterations) {
    free_idx.clear();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!fixed[i]) free_idx.push_back(i);
    }
    const auto nf = static_cast<Eigen::Index>(free_idx.size());
    if (nf == 0) throw NumericalError("QP working set fixed every variable");

    // Equality-constrained subproblem on the free variables:
    //   Q_FF z - mu 1 = -q_F,  1'z = b.
    Eigen::MatrixXd qff(nf, nf);
    Eigen::VectorXd qf(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      qf[a] = p.q[free_idx[a]];
      for (Eigen::Index c = 0; c < nf; ++c) qff(a, c) = p.Q(free_idx[a], free_idx[c]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(qff);
    if (llt.info() != Eigen::Success) throw NumericalError("QP matrix is not positive definite");
    const Eigen::VectorXd u = llt.solve(-qf);
    const Eigen::VectorXd v = llt.solve(Eigen::VectorXd::Ones(nf));
    mu = (b - u.sum()) / v.sum();
    const Eigen::VectorXd z = u + mu * v;

    // Step from the current free values towards z, stopping at the first bound.
    double step = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index a = 0; a < nf; ++a) {
      const double xi = x[free_idx[a]];
      const double d = z[a] - xi;
      if (z[a] < 0.0 && d < 0.0) {
        const double t = xi / -d;
        if (t < step) {
          step = t;
          blocking = free_idx[a];
        }
      }
    }
    for (Eigen::Index a = 0; a < nf; ++a) {
      const Eigen::Index i = free_idx[a];
      x[i] = blocking < 0 ? z[a] : x[i] + step * (z[a] - x[i]);
      if (x[i] < 0.0) x[i] = 0.0;
    }
    if (blocking >= 0) {
      x[blocking] = 0.0;
      fixed[blocking] = 1;
      // Renormalize the free part so drift never accumulates in sum(x).
      const double s = x.sum();
      if (s > 0.0 && std::abs(s - b) > 1e-14 * b) x *= b / s;
      continue;
    }

    // Subproblem optimum is feasible: release the most violated bound, if any.
    const Eigen::VectorXd g = p.Q * x + p.q;
    Eigen::Index release = -1;
    double worst = -tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (fixed[i] && g[i] - mu < worst) {
        worst = g[i] - mu;
        release = i;
      }
    }
    if (release < 0) {
      sol.converged = true;
      break;
    }
    fixed[release] = 0;
  }

  sol.x = x;
  sol.objective = qp_objective(p, x);
  sol.multiplier = mu;
  const Eigen::VectorXd g = p.Q * x + p.q;
  double res = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = g[i] - mu;
    if (fixed[i]) {
      sol.active_set.push_back(static_cast<std::size_t>(i));
      res = std::max(res, -s);  // bound multiplier must be non-negative
    } else {
      res = std::max(res, std::abs(s));
    }
    res = std::max(res, -x[i]);
  }
  sol.kkt_residual = std::max(res, std::abs(x.sum() - b) / std::max(1.0, b));
  return sol;
}

}  // namespace indeg
