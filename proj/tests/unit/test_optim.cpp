#include <cmath>
#include <numeric>

#include "doctest.h"
#include "indeg/error.hpp"
#include "indeg/optim.hpp"
#include "indeg/rng.hpp"
#include "oracles.hpp"

using namespace indeg;

namespace {

QpProblem random_problem(Rng& rng, Eigen::Index m, double b) {
  Eigen::MatrixXd A(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) A(i, j) = rng.normal();
  QpProblem p;
  p.Q = A.transpose() * A / static_cast<double>(m) + 0.05 * Eigen::MatrixXd::Identity(m, m);
  p.q = Eigen::VectorXd(m);
  for (Eigen::Index i = 0; i < m; ++i) p.q(i) = 2.0 * rng.normal();
  p.equality_sum = b;
  return p;
}

Eigen::VectorXd random_feasible(Rng& rng, Eigen::Index m, double b) {
  Eigen::VectorXd x(m);
  for (Eigen::Index i = 0; i < m; ++i) x(i) = -std::log(rng.uniform_open());
  // sparsify some draws so faces of the simplex are probed too
  if (rng.bernoulli(0.5))
    for (Eigen::Index i = 0; i < m; ++i)
      if (rng.bernoulli(0.5)) x(i) = 0.0;
  if (x.sum() == 0.0) x(0) = 1.0;
  return x * (b / x.sum());
}

void check_invariants(const QpProblem& p, const QpSolution& s) {
  CHECK(std::abs(s.x.sum() - p.equality_sum) <= 1e-9 * std::max(1.0, p.equality_sum));
  CHECK(s.x.minCoeff() >= -1e-12);
  CHECK(s.kkt_residual >= 0.0);
}

}  // namespace

TEST_CASE("hand-solved instances") {
  QpProblem p;
  p.Q = Eigen::MatrixXd::Identity(2, 2);
  p.q = Eigen::Vector2d(-3, 1);
  p.equality_sum = 2;
  auto s = solve_qp(p);
  CHECK(s.converged);
  CHECK(s.x(0) == doctest::Approx(2.0));
  CHECK(s.x(1) == doctest::Approx(0.0));
  CHECK(s.active_set == std::vector<std::size_t>{1});
  CHECK(s.multiplier == doctest::Approx(-1.0));  // Qx + q = mu 1 + s; mu is minus the water level
  check_invariants(p, s);

  p.q = Eigen::Vector2d(-1, -1);
  s = solve_qp(p);
  CHECK(s.x(0) == doctest::Approx(1.0));
  CHECK(s.x(1) == doctest::Approx(1.0));

  p.Q = Eigen::MatrixXd::Identity(4, 4);
  const Eigen::Vector4d c(0.5, 1.5, 0.0, 2.0);
  p.q = -c;
  p.equality_sum = 4.0;
  s = solve_qp(p);
  CHECK((s.x - c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("optimality against random feasible points") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto m = static_cast<Eigen::Index>(2 + rng.below(40));
    const double b = 0.5 + 10.0 * rng.uniform();
    const auto p = random_problem(rng, m, b);
    const auto s = solve_qp(p);
    CHECK(s.converged);
    check_invariants(p, s);
    CHECK(s.kkt_residual <= 1e-8);
    for (int k = 0; k < 1000; ++k) {
      const auto x = random_feasible(rng, m, b);
      CHECK(s.objective <= qp_objective(p, x) + 1e-10 * std::abs(s.objective));
    }
  }
}

TEST_CASE("agreement with the projected-gradient reference") {
  Rng rng(2);
  for (int t = 0; t < 15; ++t) {
    const auto m = static_cast<Eigen::Index>(2 + rng.below(120));
    const double b = 1.0 + 5.0 * rng.uniform();
    const auto p = random_problem(rng, m, b);
    const auto s = solve_qp(p);
    const auto ref = oracle::projected_gradient_qp(p.Q, p.q, b);
    CHECK(std::abs(s.objective - ref.objective) < 1e-6);
    CHECK(s.objective <= ref.objective + 1e-9);
  }
}

TEST_CASE("determinism, warm starts and variable order") {
  Rng rng(3);
  const auto p = random_problem(rng, 30, 3.0);
  const auto a = solve_qp(p);
  const auto b = solve_qp(p);
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);

  const auto warm = solve_qp(p, 1e-9, 10000, random_feasible(rng, 30, 3.0));
  CHECK((warm.x - a.x).cwiseAbs().maxCoeff() < 1e-7);

  // reversing the variables permutes the solution
  Eigen::VectorXi idx(30);
  for (int i = 0; i < 30; ++i) idx(i) = 29 - i;
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(idx);
  QpProblem r;
  r.Q = perm * p.Q * perm.transpose();
  r.q = perm * p.q;
  r.equality_sum = 3.0;
  const auto rs = solve_qp(r);
  CHECK((perm.transpose() * rs.x - a.x).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("errors and iteration cap") {
  QpProblem p;
  p.Q = Eigen::MatrixXd::Identity(3, 3);
  p.Q(2, 2) = -1.0;
  p.q = Eigen::Vector3d::Zero();
  p.equality_sum = 1.0;
  CHECK_THROWS_AS(solve_qp(p), NumericalError);

  p.Q = Eigen::MatrixXd::Identity(3, 3);
  p.q = Eigen::Vector2d::Zero();
  CHECK_THROWS_AS(solve_qp(p), NumericalError);

  Rng rng(5);
  const auto hard = random_problem(rng, 60, 1.0);
  const auto capped = solve_qp(hard, 1e-9, 1);
  if (!capped.converged) {
    check_invariants(hard, capped);
    CHECK(capped.iterations == 1);
  }
  CHECK(qp_kkt_residual(hard, solve_qp(hard).x) <= 1e-8);
}
