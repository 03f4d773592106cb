#include "indeg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "indeg/error.hpp"
#include "indeg/graph.hpp"
#include "indeg/metrics.hpp"
#include "indeg/rng.hpp"

#ifndef INDEG_VERSION
#define INDEG_VERSION "0.0.0"
#endif

namespace indeg {

using nlohmann::json;

std::string software_version() { return INDEG_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Config <-> JSON

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw ConfigError("unknown key '" + k + "' in " + where);
    }
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_or<T>(j, key, T{});
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.input_path) {
    j["input"] = {{"path", cfg.input_path->string()}};
  } else {
    j["input"] = {{"generator",
                   {{"family", to_string(cfg.generator.family)},
                    {"vertices", cfg.generator.target_vertices},
                    {"edges", cfg.generator.expected_edges},
                    {"alpha_in", cfg.generator.alpha_in},
                    {"alpha_out", cfg.generator.alpha_out}}}};
  }
  j["plan"] = {{"scheme", to_string(cfg.scheme)},
               {"replacement", cfg.with_replacement ? "wr" : "nr"},
               {"jump_rate", cfg.jump_rate},
               {"burn_in", cfg.burn_in}};
  j["p"] = cfg.p;
  j["replicates"] = cfg.replicates;
  j["base_seed"] = cfg.base_seed;
  j["tail_methods"] = cfg.tail_methods;
  j["metrics"] = cfg.metrics;
  const auto& e = cfg.estimate;
  j["estimate"] = {{"naive", e.naive},
                   {"penalized", e.penalized},
                   {"epsilon", e.epsilon},
                   {"alpha", cfg.alpha_from_truth ? json("truth") : opt_json(e.alpha)},
                   {"j_start", opt_json(e.j_start)},
                   {"max_in_degree", opt_json(e.max_in_degree)},
                   {"sure_perturbations", e.penalty.sure_perturbations},
                   {"lambda_points", e.lambda_points},
                   {"lambda_grid", e.penalty.lambda_grid},
                   {"ridge", e.penalty.ridge},
                   {"normalize", e.normalize}};
  j["tv_max_j"] = cfg.tv_max_j;
  j["output_dir"] = cfg.output_dir ? json(cfg.output_dir->string()) : json(nullptr);
  j["jobs"] = cfg.jobs;
  return j;
}

namespace {
void validate(const ExperimentConfig& cfg);
}  // namespace

ExperimentConfig config_from_json(const json& j) {
  check_keys(j, {"input", "plan", "p", "replicates", "base_seed", "tail_methods", "metrics",
                 "estimate", "tv_max_j", "output_dir", "jobs"},
             "config");
  ExperimentConfig cfg;
  if (j.contains("input")) {
    const json& in = j.at("input");
    check_keys(in, {"path", "generator"}, "input");
    if (in.contains("path") == in.contains("generator")) {
      throw ConfigError("input needs exactly one of 'path' or 'generator'");
    }
    if (in.contains("path")) {
      cfg.input_path = get_or<std::string>(in, "path", "");
    } else {
      const json& g = in.at("generator");
      check_keys(g, {"family", "vertices", "edges", "alpha_in", "alpha_out"}, "generator");
      cfg.generator.family = graph_family_from_string(get_or<std::string>(g, "family", "power_law"));
      cfg.generator.target_vertices = get_or<std::size_t>(g, "vertices", cfg.generator.target_vertices);
      cfg.generator.expected_edges = get_or<std::size_t>(g, "edges", cfg.generator.expected_edges);
      cfg.generator.alpha_in = get_or<double>(g, "alpha_in", cfg.generator.alpha_in);
      cfg.generator.alpha_out = get_or<double>(g, "alpha_out", cfg.generator.alpha_out);
    }
  }
  if (j.contains("plan")) {
    const json& pl = j.at("plan");
    check_keys(pl, {"scheme", "replacement", "jump_rate", "burn_in"}, "plan");
    cfg.scheme = scheme_from_string(get_or<std::string>(pl, "scheme", "rvs"));
    const auto rep = get_or<std::string>(pl, "replacement", "wr");
    if (rep != "wr" && rep != "nr") throw ConfigError("replacement must be 'wr' or 'nr'");
    cfg.with_replacement = rep == "wr";
    cfg.jump_rate = get_or<double>(pl, "jump_rate", 0.0);
    cfg.burn_in = get_or<std::size_t>(pl, "burn_in", 0);
  }
  cfg.p = get_or<double>(j, "p", cfg.p);
  cfg.replicates = get_or<std::size_t>(j, "replicates", cfg.replicates);
  cfg.base_seed = get_or<std::uint64_t>(j, "base_seed", cfg.base_seed);
  if (j.contains("tail_methods")) cfg.tail_methods = get_or<std::set<std::string>>(j, "tail_methods", {});
  if (j.contains("metrics")) cfg.metrics = get_or<std::set<std::string>>(j, "metrics", {});
  if (j.contains("estimate")) {
    const json& e = j.at("estimate");
    check_keys(e, {"naive", "penalized", "epsilon", "alpha", "j_start", "max_in_degree",
                   "sure_perturbations", "lambda_points", "lambda_grid", "ridge", "normalize"},
               "estimate");
    auto& o = cfg.estimate;
    o.naive = get_or<bool>(e, "naive", o.naive);
    o.penalized = get_or<bool>(e, "penalized", o.penalized);
    o.epsilon = get_or<double>(e, "epsilon", o.epsilon);
    if (e.contains("alpha") && e.at("alpha").is_string()) {
      if (e.at("alpha").get<std::string>() != "truth") {
        throw ConfigError("estimate.alpha must be a number, null or \"truth\"");
      }
      cfg.alpha_from_truth = true;
    } else {
      o.alpha = get_opt<double>(e, "alpha");
    }
    o.j_start = get_opt<std::size_t>(e, "j_start");
    o.max_in_degree = get_opt<std::size_t>(e, "max_in_degree");
    o.penalty.sure_perturbations = get_or<std::size_t>(e, "sure_perturbations", o.penalty.sure_perturbations);
    o.lambda_points = get_or<std::size_t>(e, "lambda_points", o.lambda_points);
    o.penalty.lambda_grid = get_or<std::vector<double>>(e, "lambda_grid", {});
    o.penalty.ridge = get_or<double>(e, "ridge", 0.0);
    o.normalize = get_or<bool>(e, "normalize", false);
  }
  cfg.tv_max_j = get_or<std::size_t>(j, "tv_max_j", cfg.tv_max_j);
  if (auto od = get_opt<std::string>(j, "output_dir")) cfg.output_dir = *od;
  cfg.jobs = get_or<std::size_t>(j, "jobs", cfg.jobs);

  for (const auto& m : cfg.tail_methods) {
    if (m != "asym" && m != "line") throw ConfigError("unknown tail method '" + m + "'");
  }
  for (const auto& m : cfg.metrics) {
    if (m != "tv_distance" && m != "log_mse" && m != "alpha_error") {
      throw ConfigError("unknown metric '" + m + "'");
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// CSV

void write_estimate_csv(std::ostream& out, const std::vector<std::string>& names,
                        const std::vector<const DegreeCountVector*>& columns) {
  std::size_t rows = 0;
  for (const auto* c : columns) {
    if (c) rows = std::max(rows, c->size());
  }
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (std::size_t j = 0; j < rows; ++j) {
    out << j;
    for (const auto* c : columns) {
      out << ',';
      if (c) out << format_number(c->at(j));
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Experiment

namespace {

void validate(const ExperimentConfig& cfg) {
  if (cfg.replicates == 0) throw ConfigError("replicates must be at least 1");
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
  if (cfg.jobs == 0) throw ConfigError("jobs must be at least 1");
  if (!(cfg.jump_rate >= 0.0 && cfg.jump_rate < 1.0)) throw ConfigError("jump rate must lie in [0, 1)");
  if (!(cfg.estimate.epsilon > 0.0 && cfg.estimate.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
}

const DegreeCountVector* column(const ReplicateResult& r, const std::string& name) {
  const auto& e = r.estimates;
  if (name == "true") return &r.truth;
  if (name == "sample") return &r.sample;
  if (name == "inv_naive") return e.inv_naive ? &*e.inv_naive : nullptr;
  if (name == "inv_penalized") return e.inv_penalized ? &*e.inv_penalized : nullptr;
  if (name == "asym") return e.asym ? &*e.asym : nullptr;
  if (name == "line") return e.line ? &*e.line : nullptr;
  return nullptr;
}

// Metrics of one set of vectors against the truth; `alpha_hat` may be empty.
json compute_metrics(const ExperimentConfig& cfg, const DegreeCountVector& truth,
                     const DegreeCountVector* penalized, const DegreeCountVector* asym,
                     const DegreeCountVector* line, std::optional<double> alpha_hat,
                     std::optional<double> alpha_true, std::size_t j_min) {
  json m = json::object();
  if (cfg.metrics.count("tv_distance") && penalized) {
    m["tv_distance"] = {{"inv_penalized", tv_distance(*penalized, truth, cfg.tv_max_j)}};
  }
  if (cfg.metrics.count("log_mse")) {
    json lm = json::object();
    for (auto [name, v] : {std::pair{"asym", asym}, std::pair{"line", line}}) {
      if (!v) continue;
      const auto support = common_positive_support(*v, truth, j_min);
      lm[name] = support.empty() ? json(nullptr) : json(log_mse(*v, truth, support));
    }
    if (!lm.empty()) m["log_mse"] = lm;
  }
  if (cfg.metrics.count("alpha_error") && alpha_hat && alpha_true) {
    m["alpha_error"] = {{"line", alpha_error(*alpha_hat, *alpha_true)}};
  }
  return m;
}

// Tail index of the realized graph, by the same fitter LINE uses on samples.
std::optional<double> true_alpha(const DegreeCountVector& truth) {
  try {
    return fit_power_law(truth).alpha;
  } catch (const Error&) {
    return std::nullopt;
  }
}

ReplicateResult run_replicate(const ExperimentConfig& cfg, std::size_t r,
                              const DirectedGraph* shared_graph) {
  ReplicateResult res;
  res.index = r;
  res.seed = cfg.base_seed + r;
  DirectedGraph own;
  if (!shared_graph) {
    GeneratorConfig gc = cfg.generator;
    gc.seed = derive_seed(res.seed, 1);
    own = largest_component(generate(gc));
  }
  const DirectedGraph& g = shared_graph ? *shared_graph : own;
  res.vertex_count = g.vertex_count();
  res.edge_count = g.edge_count();
  res.truth = in_degree_counts(g);

  const double nvd = static_cast<double>(g.vertex_count());
  res.vertex_budget = std::clamp<std::size_t>(round_half_even(cfg.p * nvd), 1, g.vertex_count());
  res.edge_budget = edge_budget_from_vertex_budget(res.vertex_budget, g);
  res.jump_weight = jump_weight_from_rate(g, cfg.scheme, cfg.jump_rate);

  SamplePlan plan;
  plan.scheme = cfg.scheme;
  plan.with_replacement = is_walk(cfg.scheme) ? true : cfg.with_replacement;
  plan.vertex_budget = res.vertex_budget;
  plan.edge_budget = res.edge_budget;
  plan.jump_weight = res.jump_weight;
  plan.burn_in = cfg.burn_in;
  plan.seed = derive_seed(res.seed, 2);
  const SampleRecord rec = run_sample(g, plan);
  res.effective_p = rec.effective_p;
  res.jump_count = rec.jump_count;
  res.sample = sample_in_degree_counts(g, rec);

  EstimateInput in;
  in.d_hat_s = res.sample;
  in.scheme = matrix_scheme_for(cfg.scheme, plan.with_replacement);
  const bool vertices = samples_vertices(cfg.scheme);
  in.population = vertices ? g.vertex_count() : g.edge_count();
  in.budget = vertices ? res.vertex_budget : res.edge_budget;
  in.vertex_count = nvd;
  EstimateOptions opt = cfg.estimate;
  opt.asym = cfg.tail_methods.count("asym") > 0;
  opt.line = cfg.tail_methods.count("line") > 0;
  opt.penalty.seed = derive_seed(res.seed, 3);
  const auto alpha_truth = true_alpha(res.truth);
  if (cfg.alpha_from_truth && opt.line && alpha_truth) opt.alpha = alpha_truth;
  res.estimates = estimate_all(in, opt);

  const auto& e = res.estimates;
  const std::size_t j_min = default_j_min(in.fraction() <= 1.0 ? in.fraction() : 1.0, opt.epsilon);
  res.metrics = compute_metrics(cfg, res.truth, e.inv_penalized ? &*e.inv_penalized : nullptr,
                                e.asym ? &*e.asym : nullptr, e.line ? &*e.line : nullptr,
                                e.alpha_hat, alpha_truth, j_min);
  return res;
}

AveragedVectors average_vectors(const std::vector<ReplicateResult>& reps) {
  AveragedVectors avg;
  for (const auto& name : csv_columns()) {
    if (name == "j") continue;
    std::size_t len = 0;
    for (const auto& r : reps) {
      if (const auto* c = column(r, name)) len = std::max(len, c->size());
    }
    DegreeCountVector sum(len);
    std::vector<std::size_t> count(len, 0);
    for (const auto& r : reps) {
      const auto* c = column(r, name);
      if (!c) continue;
      for (std::size_t j = 0; j < len; ++j) {
        const double v = c->at(j);
        if (std::isnan(v)) continue;
        sum[j] += v;
        ++count[j];
      }
    }
    for (std::size_t j = 0; j < len; ++j) {
      sum[j] = count[j] ? sum[j] / static_cast<double>(count[j]) : std::numeric_limits<double>::quiet_NaN();
    }
    avg.names.push_back(name);
    avg.vectors.push_back(std::move(sum));
    avg.defined.push_back(std::move(count));
  }
  return avg;
}

const DegreeCountVector* averaged(const AveragedVectors& a, const std::string& name) {
  for (std::size_t i = 0; i < a.names.size(); ++i) {
    if (a.names[i] == name && !a.vectors[i].empty()) return &a.vectors[i];
  }
  return nullptr;
}

// Mean of every numeric leaf across replicate metric objects.
json mean_metrics(const std::vector<ReplicateResult>& reps) {
  std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> acc;
  for (const auto& r : reps) {
    for (const auto& [metric, by] : r.metrics.items()) {
      for (const auto& [est, v] : by.items()) {
        if (!v.is_number()) continue;
        auto& slot = acc[metric][est];
        slot.first += v.get<double>();
        ++slot.second;
      }
    }
  }
  json out = json::object();
  for (const auto& [metric, by] : acc) {
    for (const auto& [est, s] : by) out[metric][est] = s.first / static_cast<double>(s.second);
  }
  return out;
}

json vector_json(const DegreeCountVector& v) {
  json a = json::array();
  for (double x : v.values) a.push_back(std::isnan(x) ? json(nullptr) : json(x));
  return a;
}

json replicate_json(const ReplicateResult& r) {
  json j = {{"index", r.index},
            {"seed", r.seed},
            {"vertex_count", r.vertex_count},
            {"edge_count", r.edge_count},
            {"vertex_budget", r.vertex_budget},
            {"edge_budget", r.edge_budget},
            {"jump_weight", r.jump_weight},
            {"effective_p", r.effective_p},
            {"jump_count", r.jump_count},
            {"census", r.estimates.census},
            {"alpha_hat", r.estimates.alpha_hat ? json(*r.estimates.alpha_hat) : json(nullptr)},
            {"metrics", r.metrics},
            {"diagnostics", r.estimates.diagnostics},
            {"skipped", r.estimates.skipped}};
  if (r.estimates.stitched) j["stitched"] = vector_json(*r.estimates.stitched);
  if (r.estimates.stitched_normalized) j["stitched_normalized"] = vector_json(*r.estimates.stitched_normalized);
  if (r.error) j["error"] = *r.error;
  return j;
}

[[noreturn]] void rethrow_with_replicate(std::exception_ptr ep, std::size_t r) {
  const std::string prefix = "replicate " + std::to_string(r) + ": ";
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what());
  } catch (const std::exception& e) {
    throw Error(prefix + e.what());
  }
}

void write_outputs(const ExperimentReport& rep, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> names(csv_columns().begin(), csv_columns().end());
  std::vector<std::string> value_names(names.begin() + 1, names.end());
  for (const auto& r : rep.replicates) {
    if (r.error && r.truth.empty()) continue;
    char name[64];
    std::snprintf(name, sizeof name, "replicate_%03zu.csv", r.index);
    std::ofstream out(dir / name);
    std::vector<const DegreeCountVector*> cols;
    for (const auto& n : value_names) cols.push_back(column(r, n));
    write_estimate_csv(out, names, cols);
    if (!out) throw DataError("cannot write " + (dir / name).string());
  }
  {
    std::ofstream out(dir / "average.csv");
    std::vector<const DegreeCountVector*> cols;
    for (const auto& n : value_names) cols.push_back(averaged(rep.average, n));
    write_estimate_csv(out, names, cols);
    if (!out) throw DataError("cannot write average.csv");
  }
  std::ofstream out(dir / "report.json");
  out << rep.to_json().dump(2) << '\n';
  if (!out) throw DataError("cannot write report.json");
}

}  // namespace

json ExperimentReport::to_json() const {
  json j;
  j["provenance"] = provenance;
  j["metrics_mean"] = metrics_mean;
  j["metrics_of_average"] = metrics_of_average;
  json avg = json::object();
  for (std::size_t i = 0; i < average.names.size(); ++i) {
    avg[average.names[i]] = {{"values", vector_json(average.vectors[i])},
                             {"replicates_defined", average.defined[i]}};
  }
  j["average"] = avg;
  j["replicates"] = json::array();
  for (const auto& r : replicates) j["replicates"].push_back(replicate_json(r));
  return j;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentReport rep;
  rep.config = cfg;

  std::optional<DirectedGraph> shared;
  json input_info = json::object();
  if (cfg.input_path) {
    CleaningReport cr;
    const DirectedGraph loaded = load_edge_list(*cfg.input_path, &cr);
    input_info = {{"loaded_vertices", loaded.vertex_count()},
                  {"loaded_edges", loaded.edge_count()},
                  {"lines_read", cr.lines_read},
                  {"self_loops_dropped", cr.self_loops_dropped},
                  {"duplicates_dropped", cr.duplicates_dropped}};
    shared = largest_component(loaded);
    input_info["component_vertices"] = shared->vertex_count();
    input_info["component_edges"] = shared->edge_count();
  }

  const std::size_t n = cfg.replicates;
  rep.replicates.resize(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < n; r = next++) {
      try {
        rep.replicates[r] = run_replicate(cfg, r, shared ? &*shared : nullptr);
      } catch (const std::exception& e) {
        errors[r] = std::current_exception();
        rep.replicates[r].index = r;
        rep.replicates[r].seed = cfg.base_seed + r;
        rep.replicates[r].error = e.what();
      }
    }
  };
  const std::size_t jobs = std::min(cfg.jobs, n);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  std::vector<ReplicateResult> ok;
  for (const auto& r : rep.replicates) {
    if (!r.error) ok.push_back(r);
  }
  rep.average = average_vectors(ok);
  rep.metrics_mean = mean_metrics(ok);
  if (!ok.empty()) {
    std::optional<double> mean_alpha;
    std::size_t with_alpha = 0;
    double alpha_sum = 0.0;
    for (const auto& r : ok) {
      if (r.estimates.alpha_hat) {
        alpha_sum += *r.estimates.alpha_hat;
        ++with_alpha;
      }
    }
    if (with_alpha) mean_alpha = alpha_sum / static_cast<double>(with_alpha);
    std::optional<double> mean_true_alpha;
    std::size_t with_true = 0;
    double true_sum = 0.0;
    for (const auto& r : ok) {
      if (const auto a = true_alpha(r.truth)) {
        true_sum += *a;
        ++with_true;
      }
    }
    if (with_true) mean_true_alpha = true_sum / static_cast<double>(with_true);
    const double p_eff = std::min(1.0, ok.front().estimates.diagnostics.value("fraction", cfg.p));
    rep.metrics_of_average = compute_metrics(
        cfg, *averaged(rep.average, "true"), averaged(rep.average, "inv_penalized"),
        averaged(rep.average, "asym"), averaged(rep.average, "line"), mean_alpha, mean_true_alpha,
        default_j_min(p_eff, cfg.estimate.epsilon));
  }

  rep.provenance = {
      {"software", "indeg"},
      {"version", software_version()},
      {"rng", "xoshiro256** seeded by splitmix64"},
      {"alpha_convention", "tail index: D(j) ~ j^-(alpha+1)"},
      {"seeding", "replicate r uses seed base_seed + r; generator, sampler and SURE probe "
                  "streams are derive_seed(seed, 1), (seed, 2), (seed, 3)"},
      {"config", config_to_json(cfg)},
      {"input", input_info},
      {"replicates_failed", n - ok.size()},
  };

  if (cfg.output_dir) write_outputs(rep, *cfg.output_dir);
  for (std::size_t r = 0; r < n; ++r) {
    if (errors[r]) rethrow_with_replicate(errors[r], r);
  }
  return rep;
}

}  // namespace indeg
