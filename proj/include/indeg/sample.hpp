#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indeg/degree_counts.hpp"
#include "indeg/graph.hpp"

namespace indeg {

enum class Scheme { RVS, RES, RWS1, RWS2, RWS3 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);  // accepts "rvs" or "RVS", etc.

/// True for schemes collecting vertices (RVS, RWS1); false for edge schemes.
bool samples_vertices(Scheme s);
/// Random walks always sample with replacement.
bool is_walk(Scheme s);

struct SamplePlan {
  Scheme scheme = Scheme::RVS;
  bool with_replacement = true;  ///< ignored by walks
  std::size_t vertex_budget = 0; ///< n_v, vertex schemes
  std::size_t edge_budget = 0;   ///< n_e, edge schemes
  double jump_weight = 0.0;      ///< w, walks only
  std::size_t burn_in = 0;       ///< collected objects discarded before the sample starts
  std::uint64_t seed = 0;

  std::size_t budget() const { return samples_vertices(scheme) ? vertex_budget : edge_budget; }
};

/// Everything a sampler retains. Vertex schemes keep the out-edge sets of the
/// sampled vertices (with multiplicity); edge schemes keep the sampled edges.
struct SampleRecord {
  Scheme scheme = Scheme::RVS;
  bool with_replacement = true;
  std::size_t vertex_count = 0;  ///< N_v of the sampled graph
  std::size_t edge_count = 0;    ///< N_e of the sampled graph
  std::vector<VertexId> sampled_vertices;  ///< vertex schemes, in draw order
  std::vector<EdgeId> sampled_edges;       ///< edge schemes, in draw order
  std::vector<Edge> retained_out_edges;
  double effective_p = 0.0;      ///< n_v/N_v or n_e/N_e
  std::size_t jump_count = 0;
  std::size_t iterations = 0;    ///< walk loop iterations (RWS3 counts jump steps too)
  std::vector<std::uint32_t> visit_histogram;  ///< per vertex (RVS/RWS1) or per edge id

  std::size_t sample_size() const {
    return samples_vertices(scheme) ? sampled_vertices.size() : sampled_edges.size();
  }
};

void validate_plan(const DirectedGraph& g, const SamplePlan& plan);

SampleRecord sample_rvs(const DirectedGraph& g, const SamplePlan& plan);
SampleRecord sample_res(const DirectedGraph& g, const SamplePlan& plan);
SampleRecord sample_rws1(const DirectedGraph& g, const SamplePlan& plan);
SampleRecord sample_rws2(const DirectedGraph& g, const SamplePlan& plan);
SampleRecord sample_rws3(const DirectedGraph& g, const SamplePlan& plan);

/// Dispatch on plan.scheme.
SampleRecord run_sample(const DirectedGraph& g, const SamplePlan& plan);

/// X_s(v) for every vertex: retained out-edges pointing at v, with multiplicity.
std::vector<std::uint32_t> sample_in_degrees(const DirectedGraph& g, const SampleRecord& rec);

/// D_s(j') for j' = 0..J', counting all N_v vertices (untouched ones at j' = 0).
DegreeCountVector sample_in_degree_counts(const DirectedGraph& g, const SampleRecord& rec);

/// Round half to even.
std::size_t round_half_even(double x);

/// n_e = round(n_v N_e / N_v), clamped to [1, N_e].
std::size_t edge_budget_from_vertex_budget(std::size_t vertex_budget, const DirectedGraph& g);

/// Jump weight w giving (approximately) the requested share of jump steps.
double jump_weight_from_rate(const DirectedGraph& g, Scheme scheme, double target_rate);
double jump_weight_from_rate(double mean_degree, Scheme scheme, double target_rate);

}  // namespace indeg
