#include "indeg/sample.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "indeg/error.hpp"
#include "indeg/rng.hpp"

namespace indeg {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::RVS: return "rvs";
    case Scheme::RES: return "res";
    case Scheme::RWS1: return "rws1";
    case Scheme::RWS2: return "rws2";
    case Scheme::RWS3: return "rws3";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rvs") return Scheme::RVS;
  if (lower == "res") return Scheme::RES;
  if (lower == "rws1") return Scheme::RWS1;
  if (lower == "rws2") return Scheme::RWS2;
  if (lower == "rws3") return Scheme::RWS3;
  throw ConfigError("unknown sampling scheme '" + s + "'");
}

bool samples_vertices(Scheme s) { return s == Scheme::RVS || s == Scheme::RWS1; }

bool is_walk(Scheme s) { return s == Scheme::RWS1 || s == Scheme::RWS2 || s == Scheme::RWS3; }

void validate_plan(const DirectedGraph& g, const SamplePlan& plan) {
  if (g.vertex_count() == 0 || g.edge_count() == 0) throw DataError("cannot sample an empty graph");
  const std::size_t budget = plan.budget();
  if (budget == 0) throw ConfigError("sampling budget must be positive");
  const bool replace = plan.with_replacement || is_walk(plan.scheme);
  if (!replace) {
    const std::size_t population = samples_vertices(plan.scheme) ? g.vertex_count() : g.edge_count();
    if (budget > population) {
      throw ConfigError("budget exceeds the population for sampling without replacement");
    }
  }
  if (!(plan.jump_weight >= 0.0) || !std::isfinite(plan.jump_weight)) {
    throw ConfigError("jump weight must be finite and non-negative");
  }
}

namespace {

SampleRecord new_record(const DirectedGraph& g, const SamplePlan& plan) {
  SampleRecord rec;
  rec.scheme = plan.scheme;
  rec.with_replacement = plan.with_replacement || is_walk(plan.scheme);
  rec.vertex_count = g.vertex_count();
  rec.edge_count = g.edge_count();
  const std::size_t population = samples_vertices(plan.scheme) ? g.vertex_count() : g.edge_count();
  rec.effective_p = static_cast<double>(plan.budget()) / static_cast<double>(population);
  rec.visit_histogram.assign(population, 0);
  return rec;
}

/// Draw `count` distinct values from 0..population-1 (partial Fisher-Yates).
std::vector<std::uint32_t> draw_distinct(Rng& rng, std::size_t population, std::size_t count) {
  std::vector<std::uint32_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::uint32_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = i + rng.below(population - i);
    std::swap(pool[i], pool[k]);
  }
  pool.resize(count);
  return pool;
}

void retain_vertices(const DirectedGraph& g, SampleRecord& rec) {
  for (VertexId v : rec.sampled_vertices) {
    ++rec.visit_histogram[v];
    for (VertexId u : g.out_neighbors(v)) rec.retained_out_edges.push_back({v, u});
  }
}

void retain_edges(const DirectedGraph& g, SampleRecord& rec) {
  rec.retained_out_edges.reserve(rec.sampled_edges.size());
  for (EdgeId e : rec.sampled_edges) {
    ++rec.visit_histogram[e];
    rec.retained_out_edges.push_back(g.edge(e));
  }
}

/// The undirected multigraph G^i grown by a walk. An edge enters when its
/// tail is first visited and is listed at both endpoints; the stored edge id
/// carries the original direction. Only out-adjacency is read.
class GrowingView {
 public:
  explicit GrowingView(const DirectedGraph& g)
      : g_(g), incident_(g.vertex_count()), visited_(g.vertex_count(), 0) {}

  void visit(VertexId v) {
    if (visited_[v]) return;
    visited_[v] = 1;
    const EdgeId first = g_.first_out_edge(v);
    const auto targets = g_.out_neighbors(v);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const auto e = static_cast<EdgeId>(first + k);
      incident_[v].push_back(e);
      incident_[targets[k]].push_back(e);
    }
  }

  std::size_t degree(VertexId v) const { return incident_[v].size(); }

  EdgeId random_incident(Rng& rng, VertexId v) const {
    return incident_[v][rng.below(incident_[v].size())];
  }

  VertexId other_end(EdgeId e, VertexId v) const {
    const VertexId t = g_.edge_tail(e);
    return t == v ? g_.edge_head(e) : t;
  }

 private:
  const DirectedGraph& g_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<std::uint8_t> visited_;
};

template <typename T>
void drop_burn_in(std::vector<T>& collected, std::size_t burn_in) {
  collected.erase(collected.begin(), collected.begin() + static_cast<std::ptrdiff_t>(burn_in));
}

}  // namespace

SampleRecord sample_rvs(const DirectedGraph& g, const SamplePlan& plan) {
  if (plan.scheme != Scheme::RVS) throw ConfigError("sample_rvs needs an RVS plan");
  validate_plan(g, plan);
  SampleRecord rec = new_record(g, plan);
  Rng rng(plan.seed);
  const std::size_t n = plan.vertex_budget;
  if (plan.with_replacement) {
    rec.sampled_vertices.resize(n);
    for (auto& v : rec.sampled_vertices) v = static_cast<VertexId>(rng.below(g.vertex_count()));
  } else {
    rec.sampled_vertices = draw_distinct(rng, g.vertex_count(), n);
  }
  retain_vertices(g, rec);
  return rec;
}

SampleRecord sample_res(const DirectedGraph& g, const SamplePlan& plan) {
  if (plan.scheme != Scheme::RES) throw ConfigError("sample_res needs an RES plan");
  validate_plan(g, plan);
  SampleRecord rec = new_record(g, plan);
  Rng rng(plan.seed);
  const std::size_t n = plan.edge_budget;
  if (plan.with_replacement) {
    rec.sampled_edges.resize(n);
    for (auto& e : rec.sampled_edges) e = static_cast<EdgeId>(rng.below(g.edge_count()));
  } else {
    rec.sampled_edges = draw_distinct(rng, g.edge_count(), n);
  }
  retain_edges(g, rec);
  return rec;
}

SampleRecord sample_rws1(const DirectedGraph& g, const SamplePlan& plan) {
  if (plan.scheme != Scheme::RWS1) throw ConfigError("sample_rws1 needs an RWS1 plan");
  validate_plan(g, plan);
  SampleRecord rec = new_record(g, plan);
  Rng rng(plan.seed);
  const double w = plan.jump_weight;
  const std::size_t target = plan.burn_in + plan.vertex_budget;
  const std::size_t nv = g.vertex_count();
  GrowingView view(g);

  auto v = static_cast<VertexId>(rng.below(nv));
  std::vector<VertexId> collected;
  collected.reserve(target);
  collected.push_back(v);
  while (collected.size() < target) {
    ++rec.iterations;
    view.visit(v);
    const auto deg_v = static_cast<double>(view.degree(v));
    VertexId u;
    bool forced = false;
    if (deg_v == 0.0 && w == 0.0) {
      // Nowhere to step and no jump weight: restart at a uniform vertex.
      u = static_cast<VertexId>(rng.below(nv));
      forced = true;
      ++rec.jump_count;
    } else if (rng.uniform() < deg_v / (w + deg_v)) {
      u = view.other_end(view.random_incident(rng, v), v);
    } else {
      u = static_cast<VertexId>(rng.below(nv));
      ++rec.jump_count;
    }
    // Metropolis-Hastings correction towards the uniform law on vertices.
    const auto deg_u = static_cast<double>(view.degree(u));
    if (forced || rng.uniform() < (w + deg_v) / (w + deg_u)) v = u;
    collected.push_back(v);
  }
  drop_burn_in(collected, plan.burn_in);
  rec.sampled_vertices = std::move(collected);
  retain_vertices(g, rec);
  return rec;
}

SampleRecord sample_rws2(const DirectedGraph& g, const SamplePlan& plan) {
  if (plan.scheme != Scheme::RWS2) throw ConfigError("sample_rws2 needs an RWS2 plan");
  validate_plan(g, plan);
  SampleRecord rec = new_record(g, plan);
  Rng rng(plan.seed);
  const double step_prob = 1.0 / (1.0 + plan.jump_weight);
  const std::size_t target = plan.burn_in + plan.edge_budget;
  GrowingView view(g);

  auto e = static_cast<EdgeId>(rng.below(g.edge_count()));
  bool jumped = true;
  VertexId arrival = g.edge_head(e);
  std::vector<EdgeId> collected;
  collected.reserve(target);
  collected.push_back(e);
  while (collected.size() < target) {
    ++rec.iterations;
    view.visit(g.edge_tail(e));
    view.visit(g.edge_head(e));
    VertexId v;
    if (jumped) {
      v = rng.below(2) == 0 ? g.edge_tail(e) : g.edge_head(e);
      jumped = false;
    } else {
      v = arrival;
    }
    if (rng.uniform() < step_prob) {
      e = view.random_incident(rng, v);
      arrival = view.other_end(e, v);
    } else {
      e = static_cast<EdgeId>(rng.below(g.edge_count()));
      jumped = true;
      ++rec.jump_count;
    }
    collected.push_back(e);
  }
  drop_burn_in(collected, plan.burn_in);
  rec.sampled_edges = std::move(collected);
  retain_edges(g, rec);
  return rec;
}

SampleRecord sample_rws3(const DirectedGraph& g, const SamplePlan& plan) {
  if (plan.scheme != Scheme::RWS3) throw ConfigError("sample_rws3 needs an RWS3 plan");
  validate_plan(g, plan);
  SampleRecord rec = new_record(g, plan);
  Rng rng(plan.seed);
  const double w = plan.jump_weight;
  const std::size_t target = plan.burn_in + plan.edge_budget;
  const std::size_t max_iterations = 10000 * target;
  const std::size_t nv = g.vertex_count();
  GrowingView view(g);

  auto v = static_cast<VertexId>(rng.below(nv));
  std::vector<EdgeId> collected;
  collected.reserve(target);
  while (collected.size() < target) {
    if (rec.iterations >= max_iterations) {
      throw NumericalError("RWS3 collected " + std::to_string(collected.size()) + " of " +
                           std::to_string(target) + " edges in " +
                           std::to_string(rec.iterations) +
                           " iterations; the jump weight is too large for this graph");
    }
    ++rec.iterations;
    view.visit(v);
    const auto deg = static_cast<double>(view.degree(v));
    if (deg > 0.0 && rng.uniform() < deg / (deg + w)) {
      const EdgeId e = view.random_incident(rng, v);
      collected.push_back(e);
      v = view.other_end(e, v);
    } else {
      v = static_cast<VertexId>(rng.below(nv));
      ++rec.jump_count;
    }
  }
  drop_burn_in(collected, plan.burn_in);
  rec.sampled_edges = std::move(collected);
  retain_edges(g, rec);
  return rec;
}

SampleRecord run_sample(const DirectedGraph& g, const SamplePlan& plan) {
  switch (plan.scheme) {
    case Scheme::RVS: return sample_rvs(g, plan);
    case Scheme::RES: return sample_res(g, plan);
    case Scheme::RWS1: return sample_rws1(g, plan);
    case Scheme::RWS2: return sample_rws2(g, plan);
    case Scheme::RWS3: return sample_rws3(g, plan);
  }
  throw ConfigError("unknown scheme");
}

std::vector<std::uint32_t> sample_in_degrees(const DirectedGraph& g, const SampleRecord& rec) {
  if (rec.vertex_count != g.vertex_count() || rec.edge_count != g.edge_count()) {
    throw DataError("sample record was not produced on this graph");
  }
  std::vector<std::uint32_t> x(g.vertex_count(), 0);
  for (const Edge& e : rec.retained_out_edges) {
    if (e.head >= x.size()) throw DataError("retained edge points outside the graph");
    ++x[e.head];
  }
  return x;
}

DegreeCountVector sample_in_degree_counts(const DirectedGraph& g, const SampleRecord& rec) {
  const auto x = sample_in_degrees(g, rec);
  const std::uint32_t max_x = x.empty() ? 0 : *std::max_element(x.begin(), x.end());
  std::vector<std::size_t> counts(max_x + 1, 0);
  for (std::uint32_t d : x) ++counts[d];
  return DegreeCountVector::from_counts(counts);
}

std::size_t round_half_even(double x) {
  if (!(x >= 0.0)) return 0;
  const double fl = std::floor(x);
  const double diff = x - fl;
  double r = fl;
  if (diff > 0.5 || (diff == 0.5 && std::fmod(fl, 2.0) != 0.0)) r = fl + 1.0;
  return static_cast<std::size_t>(r);
}

std::size_t edge_budget_from_vertex_budget(std::size_t vertex_budget, const DirectedGraph& g) {
  if (g.vertex_count() == 0) throw DataError("empty graph");
  const double ne = static_cast<double>(g.edge_count());
  const std::size_t raw = round_half_even(static_cast<double>(vertex_budget) * ne /
                                          static_cast<double>(g.vertex_count()));
  return std::clamp<std::size_t>(raw, 1, std::max<std::size_t>(g.edge_count(), 1));
}

double jump_weight_from_rate(double mean_degree, Scheme scheme, double target_rate) {
  if (!(target_rate >= 0.0) || target_rate >= 1.0) {
    throw ConfigError("jump rate must lie in [0, 1)");
  }
  switch (scheme) {
    case Scheme::RWS2: return target_rate / (1.0 - target_rate);
    case Scheme::RWS1:
    case Scheme::RWS3: return target_rate * mean_degree / (1.0 - target_rate);
    default: return 0.0;
  }
}

double jump_weight_from_rate(const DirectedGraph& g, Scheme scheme, double target_rate) {
  if (g.vertex_count() == 0) throw DataError("empty graph");
  const double mean_degree =
      2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());
  return jump_weight_from_rate(mean_degree, scheme, target_rate);
}

}  // namespace indeg
