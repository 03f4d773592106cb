#include <cmath>
#include <numeric>

#include "doctest.h"
#include "indeg/error.hpp"
#include "indeg/generate.hpp"
#include "indeg/graph.hpp"
#include "indeg/invert.hpp"
#include "indeg/sample.hpp"
#include "oracles.hpp"

using namespace indeg;

namespace {

// P(j' | j) by enumerating every sample: the vertex's in-neighbours are objects 0..j-1.
double enumerated_nr(std::size_t N, std::size_t n, std::size_t j, std::size_t jp) {
  double hit = 0, all = 0;
  oracle::for_each_combination(N, n, [&](const std::vector<std::size_t>& s) {
    all += 1;
    std::size_t k = 0;
    for (auto x : s) k += x < j ? 1 : 0;
    if (k == jp) hit += 1;
  });
  return hit / all;
}

double enumerated_wr(std::size_t N, std::size_t n, std::size_t j, std::size_t jp) {
  double hit = 0, all = 0;
  oracle::for_each_tuple(N, n, [&](const std::vector<std::size_t>& s) {
    all += 1;
    std::size_t k = 0;
    for (auto x : s) k += x < j ? 1 : 0;
    if (k == jp) hit += 1;
  });
  return hit / all;
}

SamplingMatrix identity_matrix(std::size_t m) {
  SamplingMatrix p;
  p.entries = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  p.population = m;
  p.budget = m;
  return p;
}

DegreeCountVector dvec(std::vector<double> v) { return DegreeCountVector(std::move(v)); }

}  // namespace

TEST_CASE("build_ps against enumeration") {
  const auto p = build_ps(MatrixScheme::RVS_NR, 5, 2, 2);
  CHECK(p.entries(1, 2) == doctest::Approx(0.6));
  CHECK(enumerated_nr(5, 2, 2, 1) == doctest::Approx(0.6));

  for (std::size_t N : {5, 7, 9})
    for (std::size_t n = 1; n <= 4; ++n)
      for (auto sch : {MatrixScheme::RVS_NR, MatrixScheme::RES_NR}) {
        const auto P = build_ps(sch, N, n, N - 1);
        CHECK(P.rows() == static_cast<Eigen::Index>(std::min(N - 1, n) + 1));
        for (Eigen::Index j = 0; j < P.cols(); ++j)
          for (Eigen::Index jp = 0; jp < P.rows(); ++jp)
            CHECK(P.entries(jp, j) == doctest::Approx(enumerated_nr(N, n, j, jp)).epsilon(1e-12));
      }

  const auto w = build_ps(MatrixScheme::RVS_WR, 10, 3, 9, WrRows::full);
  CHECK(w.entries(1, 2) == doctest::Approx(0.384));
  CHECK(enumerated_wr(10, 3, 2, 1) == doctest::Approx(0.384));
  CHECK(w.entries(0, 0) == 1.0);
  CHECK(w.entries.col(0).tail(w.rows() - 1).cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index jp = 0; jp < w.rows(); ++jp)
      CHECK(w.entries(jp, j) ==
            doctest::Approx(enumerated_wr(10, 3, static_cast<std::size_t>(j),
                                          static_cast<std::size_t>(jp))).epsilon(1e-12));
}

TEST_CASE("build_ps invariants") {
  oracle::DiscretePowerLaw unused(1.5, 8);  // exercises the oracle header in this unit
  Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    const std::size_t N = 10 + rng.below(5000);
    const std::size_t n = 1 + rng.below(N);
    const std::size_t J = rng.below(std::min<std::size_t>(N, 300));
    for (auto sch : {MatrixScheme::RVS_NR, MatrixScheme::RES_NR, MatrixScheme::RVS_WR,
                     MatrixScheme::RES_WR}) {
      const auto P = build_ps(sch, N, n, J);
      CHECK((P.entries.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
      CHECK(P.entries.minCoeff() >= 0.0);
      CHECK(P.entries.maxCoeff() <= 1.0);
      if (is_without_replacement(sch) && J < n)
        for (Eigen::Index j = 0; j < P.cols(); ++j)
          for (Eigen::Index jp = j + 1; jp < P.rows(); ++jp) CHECK(P.entries(jp, j) == 0.0);
    }
  }
  CHECK_THROWS_AS(build_ps(MatrixScheme::RVS_NR, 5, 6, 2), ConfigError);
  CHECK_THROWS_AS(build_ps(MatrixScheme::RVS_WR, 5, 3, 6), ConfigError);
  CHECK_NOTHROW(build_ps(MatrixScheme::RES_WR, 5, 3, 5));
  // truncation keeps the requested rows
  CHECK(build_ps(MatrixScheme::RVS_WR, 1000, 200, 5, WrRows::truncated, 60).rows() >= 60);
  CHECK(build_ps(MatrixScheme::RVS_WR, 1000, 200, 5, WrRows::full).rows() == 201);
}

TEST_CASE("explicit NR inverse") {
  const auto inv = explicit_inverse_nr(5, 2, 1);
  CHECK(inv(0, 0) == doctest::Approx(1.0));
  CHECK(inv(0, 1) == doctest::Approx(-1.5));
  CHECK(inv(1, 0) == 0.0);
  CHECK(inv(1, 1) == doctest::Approx(2.5));

  const auto big = explicit_inverse_nr(100, 30, 20);
  for (Eigen::Index j = 0; j <= 20; ++j)
    CHECK(big(j, j) == doctest::Approx(oracle::binom(100, j) / oracle::binom(30, j)).epsilon(1e-9));
  const auto P = build_ps(MatrixScheme::RVS_NR, 100, 30, 20);
  const double dev = (big * P.entries - Eigen::MatrixXd::Identity(21, 21)).cwiseAbs().maxCoeff();
  MESSAGE("max deviation " << dev);
  CHECK(dev < 1e-8);

  for (std::size_t N : {20, 50, 120})
    for (std::size_t n = 3; n <= 12; n += 3)
      for (std::size_t J = 0; J < n; ++J) {
        const auto A = explicit_inverse_nr(N, n, J);
        const auto B = build_ps(MatrixScheme::RVS_NR, N, n, J);
        const auto m = static_cast<Eigen::Index>(J + 1);
        CHECK((A * B.entries - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-8);
      }
  CHECK_THROWS_AS(explicit_inverse_nr(10, 3, 3), ConfigError);
}

TEST_CASE("invert_naive") {
  const auto I = identity_matrix(4);
  const auto d = dvec({4, 3, 2, 1});
  CHECK(invert_naive(I, d).estimate.values == d.values);
  CHECK(invert_naive(I, d).log10_condition == doctest::Approx(0.0));

  // rows < cols: refused
  const auto wide = build_ps(MatrixScheme::RVS_NR, 10, 2, 5);
  CHECK_THROWS_AS(invert_naive(wide, d), NumericalError);

  // hopelessly conditioned: refused with advice
  const auto bad = build_ps(MatrixScheme::RVS_WR, 40000, 2992, 185, WrRows::full);
  try {
    invert_naive(bad, dvec({2000, 900}));
    FAIL("expected refusal");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("penalized") != std::string::npos);
  }
}

TEST_CASE("invert_naive is exactly unbiased over all NR samples") {
  // six-vertex cycle: every in-degree is 1, budget 2
  auto cycle = DirectedGraph::from_edges(
      6, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  auto fixtures = std::vector<DirectedGraph>{
      cycle,
      DirectedGraph::from_edges(7, std::vector<Edge>{{0, 1}, {2, 1}, {3, 4}, {5, 6}, {6, 5}, {1, 3}}),
      DirectedGraph::from_edges(8, std::vector<Edge>{{0, 1}, {2, 1}, {3, 4}, {5, 6}, {7, 6}, {4, 7},
                                                     {6, 0}})};
  for (const auto& g : fixtures) {
    const auto truth = in_degree_counts(g);
    const std::size_t J = truth.max_index();
    for (std::size_t n : {2, 3}) {
      if (J >= n) continue;
      for (bool edges : {false, true}) {
        const std::size_t N = edges ? g.edge_count() : g.vertex_count();
        const auto P = build_ps(edges ? MatrixScheme::RES_NR : MatrixScheme::RVS_NR, N, n, J);
        std::vector<double> mean(J + 1, 0.0);
        double count = 0;
        oracle::for_each_combination(N, n, [&](const std::vector<std::size_t>& s) {
          const auto ds = edges ? oracle::sample_counts_from_edges(g, s)
                                : oracle::sample_counts_from_vertices(g, s);
          const auto est = invert_naive(P, dvec(ds)).estimate;
          for (std::size_t j = 0; j <= J; ++j) mean[j] += est.at(j);
          count += 1;
        });
        for (std::size_t j = 0; j <= J; ++j) CHECK(std::abs(mean[j] / count - truth.at(j)) < 1e-9);
      }
    }
  }
}

TEST_CASE("expected sample counts equal P D (Monte Carlo)") {
  GeneratorConfig cfg;
  cfg.target_vertices = 20;
  cfg.expected_edges = 40;
  cfg.seed = 4;
  const auto g = largest_component(generate(cfg));
  const auto truth = in_degree_counts(g);
  const std::size_t J = truth.max_index();
  const std::size_t n = 12;
  const auto P = build_ps(MatrixScheme::RVS_WR, g.vertex_count(), n, J, WrRows::full);
  const Eigen::Map<const Eigen::VectorXd> D(truth.values.data(), static_cast<Eigen::Index>(J + 1));
  const Eigen::VectorXd expect = P.entries * D;

  const int reps = 10000;
  std::vector<double> m1(J + 1, 0.0), m2(J + 1, 0.0), ms(P.rows(), 0.0);
  for (int r = 0; r < reps; ++r) {
    SamplePlan plan;
    plan.scheme = Scheme::RVS;
    plan.vertex_budget = n;
    plan.seed = 9000 + r;
    const auto ds = sample_in_degree_counts(g, sample_rvs(g, plan));
    for (Eigen::Index jp = 0; jp < P.rows(); ++jp) ms[jp] += ds.at(jp) / reps;
    const auto est = invert_naive(P, ds).estimate;
    for (std::size_t j = 0; j <= J; ++j) {
      m1[j] += est.at(j);
      m2[j] += est.at(j) * est.at(j);
    }
  }
  for (Eigen::Index jp = 0; jp < P.rows(); ++jp)
    CHECK(std::abs(ms[jp] - expect(jp)) < 0.05 + 0.05 * expect(jp));
  for (std::size_t j = 0; j <= J; ++j) {
    const double mean = m1[j] / reps;
    const double se = std::sqrt((m2[j] / reps - mean * mean) / reps);
    CHECK(std::abs(mean - truth.at(j)) < 3 * se + 1e-12);
  }
}

TEST_CASE("second differences and weights") {
  const auto d2 = second_diff_operator(2);
  CHECK(d2.rows() == 1);
  CHECK(d2(0, 0) == 1.0);
  CHECK(d2(0, 1) == -2.0);
  CHECK(d2(0, 2) == 1.0);
  const auto d9 = second_diff_operator(9);
  CHECK(d9.rows() == 8);
  CHECK(d9.cols() == 10);
  CHECK((d9 * Eigen::VectorXd::Constant(10, 3.5)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d9 * Eigen::VectorXd::LinSpaced(10, 0, 9)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(second_diff_operator(1), ConfigError);

  const auto c = weight_diagonal(dvec({10, 0, 5}));
  CHECK(c(0) == doctest::Approx(10.5));
  CHECK(c(1) == doctest::Approx(0.5));
  CHECK(c(2) == doctest::Approx(5.5));
  CHECK(weight_diagonal(dvec({20}))(0) == doctest::Approx(21));
  CHECK_THROWS_AS(weight_diagonal(dvec({0, 0})), DataError);
}

TEST_CASE("invert_penalized constraints and limits") {
  GeneratorConfig gc;
  gc.target_vertices = 3000;
  gc.expected_edges = 9000;
  Rng rng(12);
  for (std::uint64_t s = 0; s < 4; ++s) {
    gc.seed = s;
    const auto g = largest_component(generate(gc));
    SamplePlan plan;
    plan.scheme = s % 2 ? Scheme::RES : Scheme::RVS;
    plan.with_replacement = s < 2;
    plan.vertex_budget = g.vertex_count() / 5;
    plan.edge_budget = edge_budget_from_vertex_budget(plan.vertex_budget, g);
    plan.seed = s;
    const auto ds = sample_in_degree_counts(g, run_sample(g, plan)).trimmed();
    const auto P = build_ps(matrix_scheme_for(plan.scheme, plan.with_replacement),
                            samples_vertices(plan.scheme) ? g.vertex_count() : g.edge_count(),
                            plan.budget(), ds.max_index(), WrRows::truncated, ds.size());
    const double nv = static_cast<double>(g.vertex_count());
    for (double lambda : {0.0, 1e-3, 1.0, 1e3}) {
      PenaltyConfig cfg;
      cfg.lambda = lambda;
      const auto r = invert_penalized(P, ds, nv, cfg);
      CHECK(r.converged);
      CHECK(r.estimate.values.size() == static_cast<std::size_t>(P.cols()));
      CHECK(*std::min_element(r.estimate.values.begin(), r.estimate.values.end()) >= -1e-9);
      CHECK(std::abs(r.estimate.total() - nv) < 1e-6 * nv);
    }
    PenaltyConfig huge;
    huge.lambda = 1e12;
    const auto r = invert_penalized(P, ds, nv, huge);
    const Eigen::Map<const Eigen::VectorXd> x(r.estimate.values.data(), P.cols());
    const double rough = (second_diff_operator(static_cast<std::size_t>(P.cols() - 1)) * x).norm();
    MESSAGE("|D2 x| at lambda 1e12: " << rough << " (N_v " << nv << ")");
    CHECK(rough < 1e-3 * nv);

    // ridge between 1e-12 and 1e-8 leaves the solution unchanged
    PenaltyConfig lo, hi;
    lo.lambda = hi.lambda = 1.0;
    lo.ridge = 1e-12;
    hi.ridge = 1e-8;
    const auto a = invert_penalized(P, ds, nv, lo).estimate;
    const auto b = invert_penalized(P, ds, nv, hi).estimate;
    double diff = 0;
    for (std::size_t j = 0; j < a.size(); ++j) diff = std::max(diff, std::abs(a[j] - b[j]));
    CHECK(diff <= 1e-5 * a.max_value());
  }
}

TEST_CASE("invert_penalized with the identity matrix") {
  const auto I = identity_matrix(5);
  PenaltyConfig cfg;
  cfg.lambda = 0.0;
  cfg.ridge = 1e-14;
  const auto feasible = dvec({40, 30, 20, 7, 3});
  const auto r = invert_penalized(I, feasible, 100.0, cfg);
  for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(r.estimate[j] - feasible[j]) < 1e-8);

  // infeasible input goes to the weighted projection: sum fixed, non-negative
  const auto off = invert_penalized(I, dvec({50, 30, 0, 0, 0}), 100.0, cfg);
  CHECK(off.estimate.total() == doctest::Approx(100.0));
  CHECK(off.estimate.values[2] >= 0.0);
}

TEST_CASE("SURE") {
  const auto I = identity_matrix(12);
  std::vector<double> v;
  for (int j = 0; j < 12; ++j) v.push_back(1000.0 * std::exp(-0.2 * j) + 50.0);
  const auto d = dvec(v);
  const double total = d.total();

  PenaltyConfig cfg;
  cfg.lambda_grid = {0.37};
  CHECK(select_lambda_sure(I, d, total, cfg).lambda == 0.37);

  // divergence of the identity map is the dimension
  cfg.sure_perturbations = 20;
  const double div = sure_divergence(I, d, total, 0.0, cfg);
  MESSAGE("identity divergence " << div);
  CHECK(std::abs(div - 12.0) < 1.2);

  cfg.lambda_grid = default_lambda_grid(I, d, 30);
  CHECK(cfg.lambda_grid.size() == 30);
  CHECK(std::is_sorted(cfg.lambda_grid.begin(), cfg.lambda_grid.end()));
  const auto s = select_lambda_sure(I, d, total, cfg);
  CHECK(std::find(cfg.lambda_grid.begin(), cfg.lambda_grid.end(), s.lambda) != cfg.lambda_grid.end());
  CHECK(s.risk.size() == 30);
  const auto best = std::min_element(s.risk.begin(), s.risk.end()) - s.risk.begin();
  CHECK(s.lambda == cfg.lambda_grid[static_cast<std::size_t>(best)]);

  cfg.lambda_grid = {2.0, 1.0};
  CHECK_THROWS_AS(select_lambda_sure(I, d, total, cfg), ConfigError);
  cfg.lambda_grid = {-1.0, 1.0};
  CHECK_THROWS_AS(select_lambda_sure(I, d, total, cfg), ConfigError);
}

TEST_CASE("matrix scheme names") {
  CHECK(matrix_scheme_from_string("rvs-wr") == MatrixScheme::RVS_WR);
  CHECK(matrix_scheme_from_string("RES_NR") == MatrixScheme::RES_NR);
  CHECK_THROWS_AS(matrix_scheme_from_string("rvs"), ConfigError);
  CHECK(matrix_scheme_for(Scheme::RWS1, true) == MatrixScheme::RVS_WR);
  CHECK(matrix_scheme_for(Scheme::RWS3, false) == MatrixScheme::RES_WR);
  CHECK(matrix_scheme_for(Scheme::RES, false) == MatrixScheme::RES_NR);
}
