// indeg: command line front end (generate, sample, estimate, experiment, metrics).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "indeg/error.hpp"
#include "indeg/estimate.hpp"
#include "indeg/experiment.hpp"
#include "indeg/generate.hpp"
#include "indeg/graph.hpp"
#include "indeg/metrics.hpp"
#include "indeg/sample.hpp"

namespace {

using nlohmann::json;
using namespace indeg;

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kNumerical = 4 };

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

// Splits one CSV line; no quoting is needed for the numeric files handled here.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

// Reads column `name` of a CSV with an index column `index`; empty cells are NaN.
DegreeCountVector read_csv_column(const std::string& path, const std::string& index,
                                  const std::string& name) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  auto find = [&](const std::string& col) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == col) return i;
    }
    throw DataError(path + " has no column '" + col + "'");
  };
  const std::size_t ci = find(index);
  const std::size_t cv = find(name);
  std::vector<double> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() <= std::max(ci, cv)) throw DataError(path + ":" + std::to_string(lineno) + ": short row");
    std::size_t j = 0;
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      std::size_t used = 0;
      j = std::stoul(cells[ci], &used);
      if (used != cells[ci].size()) throw std::invalid_argument("index");
      if (!cells[cv].empty()) {
        v = std::stod(cells[cv], &used);
        if (used != cells[cv].size()) throw std::invalid_argument("value");
      }
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
    if (j >= values.size()) values.resize(j + 1, 0.0);
    values[j] = v;
  }
  return DegreeCountVector(std::move(values));
}

std::size_t env_jobs(std::size_t fallback) {
  const char* s = std::getenv("INDEG_JOBS");
  if (!s || !*s) return fallback;
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != std::string(s).size() || v < 1) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("INDEG_JOBS must be a positive integer");
  }
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string family = "power_law";
  std::size_t vertices = 10000;
  std::size_t edges = 30000;
  double alpha_in = 1.5;
  double alpha_out = 1.5;
  std::uint64_t seed = 1;
  bool largest_component = false;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  GeneratorConfig gc;
  gc.family = graph_family_from_string(a.family);
  gc.target_vertices = a.vertices;
  gc.expected_edges = a.edges;
  gc.alpha_in = a.alpha_in;
  gc.alpha_out = a.alpha_out;
  gc.seed = a.seed;
  GenerationReport gr;
  DirectedGraph g = generate(gc, &gr);
  if (a.largest_component) g = largest_component(g);
  save_edge_list(a.out, g);
  const json side = {{"family", to_string(gc.family)},
                     {"target_vertices", gc.target_vertices},
                     {"expected_edges", gc.expected_edges},
                     {"alpha_in", gc.alpha_in},
                     {"alpha_out", gc.alpha_out},
                     {"alpha_convention", "tail index: D(j) ~ j^-(alpha+1)"},
                     {"seed", gc.seed},
                     {"largest_component", a.largest_component},
                     {"vertices", g.vertex_count()},
                     {"edges", g.edge_count()},
                     {"pairs_capped", gr.pairs_capped},
                     {"rejected_draws", gr.rejected_draws},
                     {"isolated_removed", gr.isolated_removed},
                     {"version", software_version()}};
  write_json(side, a.out + ".json");
  return kOk;
}

// ---------------------------------------------------------------------------

struct SampleArgs {
  std::string graph;
  std::string scheme = "rvs";
  double p = 0.2;
  std::string replacement = "wr";
  double jump_rate = 0.0;
  std::size_t burn_in = 0;
  std::uint64_t seed = 1;
  std::string json_out;
  std::string csv_out;
};

int run_sample_cmd(const SampleArgs& a) {
  if (!(a.p > 0.0 && a.p <= 1.0)) throw ConfigError("--p must lie in (0, 1]");
  if (a.replacement != "wr" && a.replacement != "nr") throw ConfigError("--replacement must be wr or nr");
  const DirectedGraph g = load_edge_list(a.graph);
  SamplePlan plan;
  plan.scheme = scheme_from_string(a.scheme);
  plan.with_replacement = is_walk(plan.scheme) || a.replacement == "wr";
  plan.vertex_budget = std::clamp<std::size_t>(
      round_half_even(a.p * static_cast<double>(g.vertex_count())), 1, g.vertex_count());
  plan.edge_budget = edge_budget_from_vertex_budget(plan.vertex_budget, g);
  plan.jump_weight = jump_weight_from_rate(g, plan.scheme, a.jump_rate);
  plan.burn_in = a.burn_in;
  plan.seed = a.seed;
  const SampleRecord rec = run_sample(g, plan);
  const DegreeCountVector ds = sample_in_degree_counts(g, rec);

  const bool vertices = samples_vertices(plan.scheme);
  json objects = json::array();
  if (vertices) {
    for (VertexId v : rec.sampled_vertices) objects.push_back(g.original_id(v));
  } else {
    for (EdgeId e : rec.sampled_edges) {
      objects.push_back({g.original_id(g.edge_tail(e)), g.original_id(g.edge_head(e))});
    }
  }
  json retained = json::array();
  for (const Edge& e : rec.retained_out_edges) retained.push_back({g.original_id(e.tail), g.original_id(e.head)});
  const json out = {{"scheme", to_string(plan.scheme)},
                    {"replacement", plan.with_replacement ? "wr" : "nr"},
                    {"matrix_scheme", to_string(matrix_scheme_for(plan.scheme, plan.with_replacement))},
                    {"vertex_count", rec.vertex_count},
                    {"edge_count", rec.edge_count},
                    {"population", vertices ? rec.vertex_count : rec.edge_count},
                    {"budget", plan.budget()},
                    {"vertex_budget", plan.vertex_budget},
                    {"edge_budget", plan.edge_budget},
                    {"jump_weight", plan.jump_weight},
                    {"burn_in", plan.burn_in},
                    {"seed", plan.seed},
                    {"effective_p", rec.effective_p},
                    {"jump_count", rec.jump_count},
                    {"iterations", rec.iterations},
                    {"sampled_objects", objects},
                    {"retained_out_edges", retained},
                    {"d_hat_s", ds.values}};
  if (!a.json_out.empty()) write_json(out, a.json_out);
  if (!a.csv_out.empty()) {
    auto csv = open_out(a.csv_out);
    csv << "j_prime,count\n";
    for (std::size_t j = 0; j < ds.size(); ++j) csv << j << ',' << format_number(ds[j]) << '\n';
  }
  if (a.json_out.empty() && a.csv_out.empty()) write_json(out, "-");
  return kOk;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string counts;
  std::string record;
  std::string scheme = "rvs";
  std::string replacement = "wr";
  std::size_t population = 0;
  std::size_t budget = 0;
  double p = 0.0;
  double vertex_count = 0.0;
  std::string tail = "both";
  std::optional<double> alpha;
  double epsilon = 0.1;
  bool normalize = false;
  std::optional<std::size_t> j_start;
  std::optional<std::size_t> max_in_degree;
  std::size_t perturbations = 20;
  std::size_t lambda_points = 30;
  std::uint64_t seed = 0x5eed;
  std::string out;
  std::string report;
};

int run_estimate(const EstimateArgs& a) {
  EstimateInput in;
  if (!a.record.empty()) {
    std::ifstream f(a.record);
    if (!f) throw DataError("cannot open " + a.record);
    json r;
    try {
      f >> r;
      in.scheme = matrix_scheme_from_string(r.at("matrix_scheme").get<std::string>());
      in.population = r.at("population").get<std::size_t>();
      in.budget = r.at("budget").get<std::size_t>();
      in.vertex_count = r.at("vertex_count").get<double>();
      if (a.counts.empty()) in.d_hat_s = DegreeCountVector(r.at("d_hat_s").get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw DataError("malformed sample record " + a.record + ": " + e.what());
    }
  } else {
    if (a.replacement != "wr" && a.replacement != "nr") throw ConfigError("--replacement must be wr or nr");
    const Scheme s = scheme_from_string(a.scheme);
    in.scheme = matrix_scheme_for(s, is_walk(s) || a.replacement == "wr");
  }
  if (!a.counts.empty()) in.d_hat_s = read_csv_column(a.counts, "j_prime", "count");
  if (in.d_hat_s.empty()) throw ConfigError("give --counts or --record");
  if (a.vertex_count > 0.0) in.vertex_count = a.vertex_count;
  if (in.vertex_count <= 0.0) in.vertex_count = in.d_hat_s.total();
  if (a.population > 0) in.population = a.population;
  if (in.population == 0) {
    const bool vertex_matrix = in.scheme == MatrixScheme::RVS_NR || in.scheme == MatrixScheme::RVS_WR;
    if (!vertex_matrix) throw ConfigError("edge schemes need --population (the edge count)");
    in.population = static_cast<std::size_t>(std::llround(in.vertex_count));
  }
  if (a.budget > 0) in.budget = a.budget;
  if (in.budget == 0 && a.p > 0.0) {
    in.budget = std::max<std::size_t>(1, round_half_even(a.p * static_cast<double>(in.population)));
  }
  if (in.budget == 0) throw ConfigError("give --budget or --p");

  EstimateOptions opt;
  if (a.tail != "asym" && a.tail != "line" && a.tail != "both" && a.tail != "none") {
    throw ConfigError("--tail must be asym, line, both or none");
  }
  opt.asym = a.tail == "asym" || a.tail == "both";
  opt.line = a.tail == "line" || a.tail == "both";
  opt.alpha = a.alpha;
  opt.epsilon = a.epsilon;
  opt.normalize = a.normalize;
  opt.j_start = a.j_start;
  opt.max_in_degree = a.max_in_degree;
  opt.penalty.sure_perturbations = a.perturbations;
  opt.penalty.seed = a.seed;
  opt.lambda_points = a.lambda_points;
  const Estimates est = estimate_all(in, opt);

  std::vector<std::string> names{"j", "inv_naive", "inv_penalized"};
  std::vector<const DegreeCountVector*> cols{est.inv_naive ? &*est.inv_naive : nullptr,
                                             est.inv_penalized ? &*est.inv_penalized : nullptr};
  if (opt.asym) {
    names.push_back("asym");
    cols.push_back(est.asym ? &*est.asym : nullptr);
  }
  if (opt.line) {
    names.push_back("line");
    cols.push_back(est.line ? &*est.line : nullptr);
  }
  if (a.out.empty() || a.out == "-") {
    write_estimate_csv(std::cout, names, cols);
  } else {
    auto f = open_out(a.out);
    write_estimate_csv(f, names, cols);
  }
  if (!a.report.empty()) {
    json rep = {{"diagnostics", est.diagnostics},
                {"skipped", est.skipped},
                {"census", est.census},
                {"alpha_hat", est.alpha_hat ? json(*est.alpha_hat) : json(nullptr)},
                {"version", software_version()}};
    auto vec = [](const DegreeCountVector& v) {
      json arr = json::array();
      for (double x : v.values) arr.push_back(std::isnan(x) ? json(nullptr) : json(x));
      return arr;
    };
    if (est.stitched) rep["stitched"] = vec(*est.stitched);
    if (est.stitched_normalized) rep["stitched_normalized"] = vec(*est.stitched_normalized);
    write_json(rep, a.report);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::optional<std::size_t> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::size_t jobs = 1;
  bool jobs_given = false;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = load_config(a.config);
  if (a.replicates) cfg.replicates = *a.replicates;
  if (a.seed) cfg.base_seed = *a.seed;
  if (a.output_dir) cfg.output_dir = *a.output_dir;
  if (a.jobs_given) cfg.jobs = a.jobs;
  cfg.jobs = env_jobs(cfg.jobs);
  const ExperimentReport rep = run_experiment(cfg);
  json summary = {{"replicates", rep.replicates.size()},
                  {"metrics_mean", rep.metrics_mean},
                  {"metrics_of_average", rep.metrics_of_average}};
  if (cfg.output_dir) summary["output_dir"] = cfg.output_dir->string();
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct MetricsArgs {
  std::string csv;
  std::string estimate = "inv_penalized";
  std::string reference = "true";
  std::string reference_csv;
  std::optional<std::size_t> max_j;
  std::size_t from = 0;
  std::optional<double> alpha_hat;
  std::optional<double> alpha_true;
};

int run_metrics(const MetricsArgs& a) {
  json out = json::object();
  if (!a.csv.empty()) {
    const DegreeCountVector est = read_csv_column(a.csv, "j", a.estimate);
    const DegreeCountVector ref =
        read_csv_column(a.reference_csv.empty() ? a.csv : a.reference_csv, "j", a.reference);
    // TV compares the defined head of the estimate.
    std::size_t head = a.max_j ? *a.max_j : std::max(est.size(), ref.size());
    for (std::size_t j = 0; j <= head && j < est.size(); ++j) {
      if (std::isnan(est[j])) {
        head = j == 0 ? 0 : j - 1;
        break;
      }
    }
    if (!std::isnan(est.at(0))) out["tv_distance"] = tv_distance(est, ref, head);
    const auto support = common_positive_support(est, ref, a.from);
    out["log_mse"] = support.empty() ? json(nullptr) : json(log_mse(est, ref, support));
    out["log_mse_support"] = support.size();
  }
  if (a.alpha_hat && a.alpha_true) out["alpha_error"] = alpha_error(*a.alpha_hat, *a.alpha_true);
  if (out.empty()) throw ConfigError("nothing to compare: give --csv or --alpha-hat with --alpha-true");
  std::cout << out.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate in-degree distributions of directed networks from samples"};
  app.require_subcommand(1);
  app.set_version_flag("--version", indeg::software_version());

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Generate a synthetic directed graph");
  gen->add_option("--family", ga.family, "power_law or exponential_in")->capture_default_str();
  gen->add_option("--vertices", ga.vertices, "Target vertex count")->capture_default_str();
  gen->add_option("--edges", ga.edges, "Expected edge count")->capture_default_str();
  gen->add_option("--alpha-in", ga.alpha_in, "In-degree tail index")->capture_default_str();
  gen->add_option("--alpha-out", ga.alpha_out, "Out-degree tail index")->capture_default_str();
  gen->add_option("--seed", ga.seed)->capture_default_str();
  gen->add_flag("--largest-component", ga.largest_component, "Keep only the largest component");
  gen->add_option("-o,--out", ga.out, "Edge list path (a .json sidecar is written next to it)")->required();

  SampleArgs sa;
  auto* smp = app.add_subcommand("sample", "Sample a graph and write the sample in-degree counts");
  smp->add_option("--graph", sa.graph, "Edge list")->required();
  smp->add_option("--scheme", sa.scheme, "rvs, res, rws1, rws2 or rws3")->capture_default_str();
  smp->add_option("--p", sa.p, "Sampling fraction")->capture_default_str();
  smp->add_option("--replacement", sa.replacement, "wr or nr (rvs/res only)")->capture_default_str();
  smp->add_option("--jump-rate", sa.jump_rate, "Target jump rate of the walks")->capture_default_str();
  smp->add_option("--burn-in", sa.burn_in)->capture_default_str();
  smp->add_option("--seed", sa.seed)->capture_default_str();
  smp->add_option("--json", sa.json_out, "Sample record output");
  smp->add_option("--csv", sa.csv_out, "Sample counts output (j_prime,count)");

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Estimate the in-degree distribution from sample counts");
  est->add_option("--counts", ea.counts, "CSV with columns j_prime,count");
  est->add_option("--record", ea.record, "Sample record JSON written by 'sample'");
  est->add_option("--scheme", ea.scheme, "Sampling scheme")->capture_default_str();
  est->add_option("--replacement", ea.replacement, "wr or nr")->capture_default_str();
  est->add_option("--population", ea.population, "N_v or N_e (default: total of the counts)");
  est->add_option("--budget", ea.budget, "n_v or n_e");
  est->add_option("--p", ea.p, "Sampling fraction, used when --budget is absent");
  est->add_option("--vertex-count", ea.vertex_count, "N_v (default: total of the counts)");
  est->add_option("--tail", ea.tail, "asym, line, both or none")->capture_default_str();
  est->add_option("--alpha", ea.alpha, "External tail index for LINE");
  est->add_option("--epsilon", ea.epsilon, "Large-j threshold level")->capture_default_str();
  est->add_flag("--normalize", ea.normalize, "Also report the stitched estimate rescaled to N_v");
  est->add_option("--j-start", ea.j_start, "Power-law fit cutoff (default: KS selection)");
  est->add_option("--max-in-degree", ea.max_in_degree, "Inversion range (default: largest sample in-degree)");
  est->add_option("--perturbations", ea.perturbations, "SURE probe count")->capture_default_str();
  est->add_option("--lambda-points", ea.lambda_points, "SURE grid size")->capture_default_str();
  est->add_option("--seed", ea.seed, "SURE probe seed")->capture_default_str();
  est->add_option("-o,--out", ea.out, "Estimate CSV (default: stdout)");
  est->add_option("--report", ea.report, "JSON report");

  ExperimentArgs xa;
  auto* exp = app.add_subcommand("experiment", "Run a replicated experiment from a JSON config");
  exp->add_option("--config", xa.config, "Experiment config")->required()->check(CLI::ExistingFile);
  exp->add_option("--replicates", xa.replicates);
  exp->add_option("--seed", xa.seed, "Base seed");
  exp->add_option("--output-dir", xa.output_dir);
  auto* jobs_opt = exp->add_option("--jobs", xa.jobs, "Concurrent replicates (INDEG_JOBS overrides)");

  MetricsArgs ma;
  auto* met = app.add_subcommand("metrics", "Compare an estimate column with a reference");
  met->add_option("--csv", ma.csv, "CSV in the experiment schema");
  met->add_option("--estimate", ma.estimate, "Estimate column")->capture_default_str();
  met->add_option("--reference", ma.reference, "Reference column")->capture_default_str();
  met->add_option("--reference-csv", ma.reference_csv, "Reference file (default: same file)");
  met->add_option("--max-j", ma.max_j, "Largest j for the TV distance");
  met->add_option("--from", ma.from, "Smallest j for the log error")->capture_default_str();
  met->add_option("--alpha-hat", ma.alpha_hat);
  met->add_option("--alpha-true", ma.alpha_true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (gen->parsed()) return run_generate(ga);
    if (smp->parsed()) return run_sample_cmd(sa);
    if (est->parsed()) return run_estimate(ea);
    if (exp->parsed()) {
      xa.jobs_given = jobs_opt->count() > 0;
      return run_experiment_cmd(xa);
    }
    if (met->parsed()) return run_metrics(ma);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
