#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "indeg/degree_counts.hpp"

namespace indeg {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  VertexId tail;
  VertexId head;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Statistics gathered while cleaning an edge list into a simple graph.
struct CleaningReport {
  std::size_t lines_read = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

/// Immutable simple directed graph.
///
/// Out-adjacency is stored in CSR form; edge ids are positions in the CSR
/// target array, so edge e runs from edge_tail(e) to edge_head(e). The in-edge
/// index exists only for ground truth and can be withheld (see
/// without_in_index()) to prove a sampler never reads it.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Build from arbitrary edges over vertices 0..vertex_count-1. Self-loops
  /// and duplicates are dropped and counted in `report` when given.
  static DirectedGraph from_edges(std::size_t vertex_count, std::span<const Edge> edges,
                                  CleaningReport* report = nullptr);

  std::size_t vertex_count() const { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t edge_count() const { return out_targets_.size(); }

  std::span<const VertexId> out_neighbors(VertexId v) const {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  std::size_t out_degree(VertexId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
  EdgeId first_out_edge(VertexId v) const { return static_cast<EdgeId>(out_offsets_[v]); }

  VertexId edge_tail(EdgeId e) const { return edge_tails_[e]; }
  VertexId edge_head(EdgeId e) const { return out_targets_[e]; }
  Edge edge(EdgeId e) const { return {edge_tails_[e], out_targets_[e]}; }

  bool has_in_index() const { return !in_offsets_.empty(); }
  /// Throws std::logic_error when the in-index has been withheld.
  std::span<const VertexId> in_neighbors(VertexId v) const;

  /// Original (pre-relabeling) id of vertex v; identity when built directly.
  std::int64_t original_id(VertexId v) const {
    return original_ids_.empty() ? static_cast<std::int64_t>(v) : original_ids_[v];
  }
  const std::vector<std::int64_t>& original_ids() const { return original_ids_; }

  /// Copy with the in-edge index dropped.
  DirectedGraph without_in_index() const;

  /// Replace the side map of original ids (size must equal vertex_count()).
  void set_original_ids(std::vector<std::int64_t> ids);

  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> out_offsets_;
  std::vector<VertexId> out_targets_;
  std::vector<VertexId> edge_tails_;
  std::vector<std::size_t> in_offsets_;
  std::vector<VertexId> in_sources_;
  std::vector<std::int64_t> original_ids_;
};

/// Parse the "u v" per line edge-list format ('#' starts a comment line).
/// Vertex ids are relabeled densely in order of first appearance.
DirectedGraph read_edge_list(std::istream& in, CleaningReport* report = nullptr);
DirectedGraph load_edge_list(const std::filesystem::path& path,
                             CleaningReport* report = nullptr);

/// Write one "u v" line per edge using original ids.
void write_edge_list(std::ostream& out, const DirectedGraph& g);
void save_edge_list(const std::filesystem::path& path, const DirectedGraph& g);

/// Number of in-edges of v (uses the in-index).
std::size_t in_degree(const DirectedGraph& g, VertexId v);

/// D(j) for j = 0..J, J the maximal in-degree.
DegreeCountVector in_degree_counts(const DirectedGraph& g);

/// Subgraph induced by the largest weakly connected component, relabeled
/// densely in increasing old-id order. Ties go to the component holding the
/// smallest vertex id.
DirectedGraph largest_component(const DirectedGraph& g);

/// Induced subgraph on the vertices with keep[v] true, relabeled in order.
DirectedGraph induced_subgraph(const DirectedGraph& g, std::span<const std::uint8_t> keep);

/// Remove vertices that have neither in- nor out-edges.
DirectedGraph drop_isolated(const DirectedGraph& g);

}  // namespace indeg
