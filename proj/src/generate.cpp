#include "indeg/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "indeg/error.hpp"
#include "indeg/rng.hpp"

namespace indeg {

std::string to_string(GraphFamily f) {
  return f == GraphFamily::power_law ? "power_law" : "exponential_in";
}

GraphFamily graph_family_from_string(const std::string& s) {
  if (s == "power_law") return GraphFamily::power_law;
  if (s == "exponential_in") return GraphFamily::exponential_in;
  throw ConfigError("unknown graph family '" + s + "'");
}

namespace {

void validate(const GeneratorConfig& cfg) {
  const double n = static_cast<double>(cfg.target_vertices);
  if (cfg.target_vertices < 2) throw ConfigError("generator needs at least two vertices");
  if (cfg.expected_edges == 0) throw ConfigError("expected_edges must be positive");
  if (static_cast<double>(cfg.expected_edges) > n * (n - 1.0)) {
    throw ConfigError("expected_edges exceeds N(N-1)");
  }
}

double pareto(Rng& rng, double alpha) { return std::pow(rng.uniform_open(), -1.0 / alpha); }

DirectedGraph finish(std::size_t n, const std::vector<Edge>& edges, GenerationReport* report) {
  DirectedGraph g = DirectedGraph::from_edges(n, edges);
  DirectedGraph out = drop_isolated(g);
  if (report) report->isolated_removed += g.vertex_count() - out.vertex_count();
  return out;
}

}  // namespace

DirectedGraph generate_power_law(const GeneratorConfig& cfg, GenerationReport* report) {
  validate(cfg);
  if (!(cfg.alpha_in > 0.0) || !(cfg.alpha_out > 0.0)) {
    throw ConfigError("power-law tail indices must be positive");
  }
  const std::size_t n = cfg.target_vertices;
  Rng rng(cfg.seed);
  std::vector<double> out_w(n), in_w(n);
  for (std::size_t v = 0; v < n; ++v) out_w[v] = pareto(rng, cfg.alpha_out);
  for (std::size_t v = 0; v < n; ++v) in_w[v] = pareto(rng, cfg.alpha_in);
  const double out_sum = std::accumulate(out_w.begin(), out_w.end(), 0.0);
  const double in_sum = std::accumulate(in_w.begin(), in_w.end(), 0.0);
  double diag = 0.0;
  for (std::size_t v = 0; v < n; ++v) diag += out_w[v] * in_w[v];
  // Excluding the diagonal removes a share diag/(out_sum*in_sum) of the mass.
  const double normalizer = std::max(0.5, 1.0 - diag / (out_sum * in_sum));
  const double scale = static_cast<double>(cfg.expected_edges) / (out_sum * in_sum * normalizer);

  // Heads visited in decreasing in-weight order so the acceptance bound only
  // decreases along a row (geometric skipping over a sorted row).
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return in_w[a] > in_w[b]; });

  std::vector<Edge> edges;
  edges.reserve(cfg.expected_edges + cfg.expected_edges / 8);
  std::size_t capped = 0;
  for (VertexId u = 0; u < n; ++u) {
    std::size_t i = 0;
    double q = std::min(1.0, out_w[u] * in_w[order[0]] * scale);
    while (i < n && q > 0.0) {
      if (q < 1.0) {
        const std::uint64_t skip = rng.geometric(q);
        if (skip >= n - i) break;
        i += static_cast<std::size_t>(skip);
      } else {
        ++capped;
      }
      const double q_here = std::min(1.0, out_w[u] * in_w[order[i]] * scale);
      if (rng.uniform() < q_here / q && order[i] != u) edges.push_back({u, order[i]});
      q = q_here;
      ++i;
    }
  }
  if (report) report->pairs_capped += capped;
  if (edges.size() * 2 < cfg.expected_edges) {
    throw ConfigError("infeasible configuration: probabilities capped at 1 lose over half of the edges");
  }
  return finish(n, edges, report);
}

DirectedGraph generate_exponential_in(const GeneratorConfig& cfg, GenerationReport* report) {
  validate(cfg);
  const std::size_t n = cfg.target_vertices;
  const double mean = static_cast<double>(cfg.expected_edges) / static_cast<double>(n);
  if (!(mean > 0.0) || mean >= static_cast<double>(n - 1) / 2.0) {
    throw ConfigError("infeasible mean in-degree for the exponential family");
  }
  Rng rng(cfg.seed);
  // Geometric on {0,1,...} with mean q/(1-q).
  const double q = mean / (1.0 + mean);
  std::vector<std::size_t> in_deg(n);
  for (auto& d : in_deg) d = std::min<std::size_t>(rng.geometric(1.0 - q), n - 1);
  const std::size_t total = std::accumulate(in_deg.begin(), in_deg.end(), std::size_t{0});

  std::vector<Edge> edges;
  edges.reserve(total);
  std::unordered_set<std::uint64_t> present;
  present.reserve(total * 2);
  const std::size_t max_attempts = 100 * std::max<std::size_t>(total, 1);
  std::size_t attempts = 0, rejected = 0;
  for (VertexId v = 0; v < n && attempts < max_attempts; ++v) {
    for (std::size_t k = 0; k < in_deg[v] && attempts < max_attempts;) {
      ++attempts;
      const auto u = static_cast<VertexId>(rng.below(n));
      const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
      if (u == v || !present.insert(key).second) {
        ++rejected;
        continue;
      }
      edges.push_back({u, v});
      ++k;
    }
  }
  if (report) report->rejected_draws += rejected;
  if (edges.size() < total) throw ConfigError("configuration pairing exhausted its attempt budget");
  return finish(n, edges, report);
}

DirectedGraph generate(const GeneratorConfig& cfg, GenerationReport* report) {
  return cfg.family == GraphFamily::power_law ? generate_power_law(cfg, report)
                                              : generate_exponential_in(cfg, report);
}

}  // namespace indeg
