// Python bindings: thin wrappers over the core library. Graphs cross the
// boundary as (vertex_count, edge array); count vectors as lists of floats.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "indeg/error.hpp"
#include "indeg/estimate.hpp"
#include "indeg/experiment.hpp"
#include "indeg/generate.hpp"
#include "indeg/graph.hpp"
#include "indeg/invert.hpp"
#include "indeg/metrics.hpp"
#include "indeg/optim.hpp"
#include "indeg/sample.hpp"
#include "indeg/tail.hpp"

namespace py = pybind11;
using namespace indeg;

namespace {

using EdgeArray = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 2, Eigen::RowMajor>;

DirectedGraph to_graph(std::size_t vertex_count, const EdgeArray& edges) {
  std::vector<Edge> e;
  e.reserve(static_cast<std::size_t>(edges.rows()));
  for (Eigen::Index i = 0; i < edges.rows(); ++i) {
    if (edges(i, 0) < 0 || edges(i, 1) < 0 || static_cast<std::size_t>(edges(i, 0)) >= vertex_count ||
        static_cast<std::size_t>(edges(i, 1)) >= vertex_count)
      throw DataError("edge endpoint outside 0..vertex_count-1");
    e.push_back({static_cast<VertexId>(edges(i, 0)), static_cast<VertexId>(edges(i, 1))});
  }
  return DirectedGraph::from_edges(vertex_count, e);
}

EdgeArray edge_array(const DirectedGraph& g) {
  EdgeArray out(static_cast<Eigen::Index>(g.edge_count()), 2);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    out(static_cast<Eigen::Index>(e), 0) = g.edge_tail(static_cast<EdgeId>(e));
    out(static_cast<Eigen::Index>(e), 1) = g.edge_head(static_cast<EdgeId>(e));
  }
  return out;
}

py::object optional_vector(const std::optional<DegreeCountVector>& v) {
  return v ? py::cast(v->values) : py::none();
}

}  // namespace

PYBIND11_MODULE(_indeg, m) {
  m.doc() = "In-degree distribution estimation from sampled directed networks";
  m.attr("__version__") = software_version();

  static py::exception<Error> base(m, "IndegError", PyExc_RuntimeError);
  static py::exception<ConfigError> config(m, "ConfigError", base.ptr());
  static py::exception<DataError> data(m, "DataError", base.ptr());
  static py::exception<NumericalError> numerical(m, "NumericalError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config, e.what());
    } catch (const DataError& e) {
      py::set_error(data, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def(
      "generate",
      [](std::size_t vertices, std::size_t edges, double alpha_in, double alpha_out,
         std::uint64_t seed, const std::string& family) {
        GeneratorConfig cfg;
        cfg.target_vertices = vertices;
        cfg.expected_edges = edges;
        cfg.alpha_in = alpha_in;
        cfg.alpha_out = alpha_out;
        cfg.seed = seed;
        cfg.family = graph_family_from_string(family);
        const auto g = generate(cfg);
        return py::make_tuple(g.vertex_count(), edge_array(g));
      },
      py::arg("vertices") = 10000, py::arg("edges") = 30000, py::arg("alpha_in") = 1.5,
      py::arg("alpha_out") = 1.5, py::arg("seed") = 0, py::arg("family") = "power_law",
      "Synthetic graph as (vertex_count, int64 array of shape (E, 2)).");

  m.def(
      "in_degree_counts",
      [](std::size_t vertex_count, const EdgeArray& edges) {
        return in_degree_counts(to_graph(vertex_count, edges)).values;
      },
      py::arg("vertex_count"), py::arg("edges"));

  m.def(
      "sample_counts",
      [](std::size_t vertex_count, const EdgeArray& edges, const std::string& scheme, double p,
         bool with_replacement, double jump_rate, std::uint64_t seed) {
        const auto g = to_graph(vertex_count, edges);
        SamplePlan plan;
        plan.scheme = scheme_from_string(scheme);
        plan.with_replacement = with_replacement;
        plan.vertex_budget = std::clamp<std::size_t>(
            round_half_even(p * static_cast<double>(g.vertex_count())), 1, g.vertex_count());
        plan.edge_budget = edge_budget_from_vertex_budget(plan.vertex_budget, g);
        plan.jump_weight = jump_weight_from_rate(g, plan.scheme, jump_rate);
        plan.seed = seed;
        const auto rec = run_sample(g, plan);
        py::dict out;
        out["counts"] = sample_in_degree_counts(g, rec).values;
        out["vertex_budget"] = plan.vertex_budget;
        out["edge_budget"] = plan.edge_budget;
        out["effective_p"] = rec.effective_p;
        out["jump_count"] = rec.jump_count;
        return out;
      },
      py::arg("vertex_count"), py::arg("edges"), py::arg("scheme") = "rvs", py::arg("p") = 0.2,
      py::arg("with_replacement") = true, py::arg("jump_rate") = 0.0, py::arg("seed") = 0);

  m.def(
      "build_ps",
      [](const std::string& scheme, std::size_t population, std::size_t budget,
         std::size_t max_in_degree, bool full_rows) {
        return build_ps(matrix_scheme_from_string(scheme), population, budget, max_in_degree,
                        full_rows ? WrRows::full : WrRows::truncated)
            .entries;
      },
      py::arg("scheme"), py::arg("population"), py::arg("budget"), py::arg("max_in_degree"),
      py::arg("full_rows") = false);

  m.def("explicit_inverse_nr", &explicit_inverse_nr, py::arg("population"), py::arg("budget"),
        py::arg("max_in_degree"));
  m.def("log10_condition_number", &log10_condition_number, py::arg("matrix"));

  m.def(
      "solve_qp",
      [](const Eigen::MatrixXd& Q, const Eigen::VectorXd& q, double b) {
        const auto s = solve_qp(QpProblem{Q, q, b});
        py::dict out;
        out["x"] = s.x;
        out["objective"] = s.objective;
        out["multiplier"] = s.multiplier;
        out["kkt_residual"] = s.kkt_residual;
        out["iterations"] = s.iterations;
        out["converged"] = s.converged;
        return out;
      },
      py::arg("Q"), py::arg("q"), py::arg("total"));

  m.def(
      "estimate",
      [](const std::vector<double>& counts, const std::string& scheme, std::size_t population,
         std::size_t budget, double vertex_count, std::optional<double> alpha,
         std::size_t perturbations, std::uint64_t seed) {
        EstimateInput in;
        in.d_hat_s = DegreeCountVector(counts);
        in.scheme = matrix_scheme_from_string(scheme);
        in.population = population;
        in.budget = budget;
        in.vertex_count = vertex_count;
        EstimateOptions opt;
        opt.alpha = alpha;
        opt.penalty.sure_perturbations = perturbations;
        opt.penalty.seed = seed;
        const auto e = estimate_all(in, opt);
        py::dict out;
        out["inv_naive"] = optional_vector(e.inv_naive);
        out["inv_penalized"] = optional_vector(e.inv_penalized);
        out["asym"] = optional_vector(e.asym);
        out["line"] = optional_vector(e.line);
        out["stitched"] = optional_vector(e.stitched);
        out["alpha_hat"] = e.alpha_hat ? py::cast(*e.alpha_hat) : py::none();
        out["census"] = e.census;
        out["diagnostics"] = e.diagnostics.dump();
        out["skipped"] = e.skipped.dump();
        return out;
      },
      py::arg("counts"), py::arg("scheme"), py::arg("population"), py::arg("budget"),
      py::arg("vertex_count") = 0.0, py::arg("alpha") = py::none(), py::arg("perturbations") = 20,
      py::arg("seed") = PenaltyConfig{}.seed);

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto cfg = config_from_json(nlohmann::json::parse(config_json));
        py::gil_scoped_release release;
        return run_experiment(cfg).to_json().dump();
      },
      py::arg("config_json"), "Runs an experiment from a JSON config; returns the report as JSON text.");

  m.def(
      "tv_distance",
      [](const std::vector<double>& a, const std::vector<double>& b, std::optional<std::size_t> max_j) {
        const DegreeCountVector va(a), vb(b);
        return max_j ? tv_distance(va, vb, *max_j) : tv_distance(va, vb);
      },
      py::arg("a"), py::arg("b"), py::arg("max_j") = py::none());

  m.def(
      "cs_factor",
      [](const std::string& scheme, double j_prime, double alpha, double population, double budget) {
        return cs_factor(matrix_scheme_from_string(scheme), j_prime, alpha, population, budget);
      },
      py::arg("scheme"), py::arg("j_prime"), py::arg("alpha"), py::arg("population"),
      py::arg("budget"));

  m.def(
      "fit_power_law",
      [](const std::vector<double>& counts, std::optional<std::size_t> j_start) {
        const auto f = fit_power_law(DegreeCountVector(counts), j_start);
        py::dict out;
        out["alpha"] = f.alpha;
        out["amplitude"] = f.amplitude;
        out["j_start"] = f.j_start;
        out["ks_distance"] = f.ks_distance;
        return out;
      },
      py::arg("counts"), py::arg("j_start") = py::none());
}
