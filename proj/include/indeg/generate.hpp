#pragma once

#include <cstdint>
#include <string>

#include "indeg/graph.hpp"

namespace indeg {

enum class GraphFamily { power_law, exponential_in };

std::string to_string(GraphFamily f);
GraphFamily graph_family_from_string(const std::string& s);

struct GeneratorConfig {
  std::size_t target_vertices = 10000;
  std::size_t expected_edges = 30000;
  /// Tail index alpha of D(j) ~ c alpha j^(-alpha-1); the count exponent is alpha + 1.
  double alpha_in = 1.5;
  double alpha_out = 1.5;
  GraphFamily family = GraphFamily::power_law;
  std::uint64_t seed = 0;
};

struct GenerationReport {
  std::size_t pairs_capped = 0;       ///< Chung-Lu pairs whose probability was clipped at 1
  std::size_t rejected_draws = 0;     ///< configuration pairing redraws
  std::size_t isolated_removed = 0;   ///< zero-degree vertices dropped at the end
};

/// Directed Chung-Lu graph with Pareto in- and out-weights.
DirectedGraph generate_power_law(const GeneratorConfig& cfg, GenerationReport* report = nullptr);

/// Geometric in-degrees paired with uniformly drawn sources, rejecting
/// self-loops and duplicate edges.
DirectedGraph generate_exponential_in(const GeneratorConfig& cfg,
                                      GenerationReport* report = nullptr);

/// Dispatch on cfg.family.
DirectedGraph generate(const GeneratorConfig& cfg, GenerationReport* report = nullptr);

}  // namespace indeg
