#include "indeg/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "indeg/error.hpp"

namespace indeg {

DirectedGraph DirectedGraph::from_edges(std::size_t vertex_count, std::span<const Edge> edges,
                                        CleaningReport* report) {
  std::vector<Edge> clean;
  clean.reserve(edges.size());
  std::size_t loops = 0;
  for (const Edge& e : edges) {
    if (e.tail >= vertex_count || e.head >= vertex_count) {
      throw DataError("edge endpoint out of range");
    }
    if (e.tail == e.head) {
      ++loops;
      continue;
    }
    clean.push_back(e);
  }
  std::sort(clean.begin(), clean.end(), [](const Edge& a, const Edge& b) {
    return a.tail != b.tail ? a.tail < b.tail : a.head < b.head;
  });
  const auto last = std::unique(clean.begin(), clean.end());
  const std::size_t dups = static_cast<std::size_t>(clean.end() - last);
  clean.erase(last, clean.end());
  if (report) {
    report->self_loops_dropped += loops;
    report->duplicates_dropped += dups;
  }
  if (clean.size() > std::numeric_limits<EdgeId>::max() ||
      vertex_count > std::numeric_limits<VertexId>::max()) {
    throw DataError("graph too large for 32-bit ids");
  }

  DirectedGraph g;
  g.out_offsets_.assign(vertex_count + 1, 0);
  g.in_offsets_.assign(vertex_count + 1, 0);
  for (const Edge& e : clean) {
    ++g.out_offsets_[e.tail + 1];
    ++g.in_offsets_[e.head + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  g.out_targets_.resize(clean.size());
  g.edge_tails_.resize(clean.size());
  g.in_sources_.resize(clean.size());
  std::vector<std::size_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  // clean is sorted by tail, so CSR positions follow input order directly.
  for (std::size_t k = 0; k < clean.size(); ++k) {
    g.out_targets_[k] = clean[k].head;
    g.edge_tails_[k] = clean[k].tail;
    g.in_sources_[in_fill[clean[k].head]++] = clean[k].tail;
  }
  return g;
}

std::span<const VertexId> DirectedGraph::in_neighbors(VertexId v) const {
  if (!has_in_index()) throw std::logic_error("in-edge index withheld from this graph");
  return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
}

DirectedGraph DirectedGraph::without_in_index() const {
  DirectedGraph g = *this;
  g.in_offsets_.clear();
  g.in_sources_.clear();
  g.in_offsets_.shrink_to_fit();
  g.in_sources_.shrink_to_fit();
  return g;
}

void DirectedGraph::set_original_ids(std::vector<std::int64_t> ids) {
  if (ids.size() != vertex_count()) throw DataError("original id map has the wrong size");
  original_ids_ = std::move(ids);
}

std::vector<Edge> DirectedGraph::edges() const {
  std::vector<Edge> out(edge_count());
  for (EdgeId e = 0; e < edge_count(); ++e) out[e] = edge(e);
  return out;
}

namespace {

bool parse_id(std::string_view token, std::int64_t& value) {
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && value >= 0;
}

}  // namespace

DirectedGraph read_edge_list(std::istream& in, CleaningReport* report) {
  std::unordered_map<std::int64_t, VertexId> relabel;
  std::vector<std::int64_t> originals;
  std::vector<Edge> edges;
  CleaningReport local;
  std::string line;
  std::size_t line_no = 0;

  auto intern = [&](std::int64_t id) {
    auto [it, inserted] = relabel.try_emplace(id, static_cast<VertexId>(originals.size()));
    if (inserted) originals.push_back(id);
    return it->second;
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#' || line[pos] == '%') continue;
    std::istringstream fields(line);
    std::string a, b;
    std::int64_t u = 0, v = 0;
    if (!(fields >> a >> b) || !parse_id(a, u) || !parse_id(b, v)) {
      throw DataError("malformed edge at line " + std::to_string(line_no) + ": '" + line + "'");
    }
    ++local.lines_read;
    edges.push_back({intern(u), intern(v)});
  }
  if (in.bad()) throw DataError("read error while parsing edge list");

  DirectedGraph g = DirectedGraph::from_edges(originals.size(), edges, &local);
  if (g.edge_count() == 0) throw DataError("edge list yields an empty graph");
  g.set_original_ids(std::move(originals));
  // Vertices whose only edges were self-loops have no edges left.
  g = drop_isolated(g);
  if (report) {
    report->lines_read += local.lines_read;
    report->self_loops_dropped += local.self_loops_dropped;
    report->duplicates_dropped += local.duplicates_dropped;
  }
  return g;
}

DirectedGraph load_edge_list(const std::filesystem::path& path, CleaningReport* report) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path.string() + "'");
  return read_edge_list(in, report);
}

void write_edge_list(std::ostream& out, const DirectedGraph& g) {
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    out << g.original_id(g.edge_tail(e)) << ' ' << g.original_id(g.edge_head(e)) << '\n';
  }
}

void save_edge_list(const std::filesystem::path& path, const DirectedGraph& g) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write edge list '" + path.string() + "'");
  write_edge_list(out, g);
}

std::size_t in_degree(const DirectedGraph& g, VertexId v) {
  if (v >= g.vertex_count()) throw DataError("vertex id out of range");
  return g.in_neighbors(v).size();
}

DegreeCountVector in_degree_counts(const DirectedGraph& g) {
  std::vector<std::size_t> deg(g.vertex_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) ++deg[g.edge_head(e)];
  const std::size_t max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  std::vector<std::size_t> counts(max_deg + 1, 0);
  for (std::size_t d : deg) ++counts[d];
  return DegreeCountVector::from_counts(counts);
}

DirectedGraph induced_subgraph(const DirectedGraph& g, std::span<const std::uint8_t> keep) {
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> new_id(n, 0);
  std::vector<std::int64_t> originals;
  VertexId next = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (keep[v]) {
      new_id[v] = next++;
      originals.push_back(g.original_id(v));
    }
  }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge ed = g.edge(e);
    if (keep[ed.tail] && keep[ed.head]) edges.push_back({new_id[ed.tail], new_id[ed.head]});
  }
  DirectedGraph out = DirectedGraph::from_edges(next, edges);
  out.set_original_ids(std::move(originals));
  return out;
}

DirectedGraph drop_isolated(const DirectedGraph& g) {
  std::vector<std::uint8_t> touched(g.vertex_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    touched[g.edge_tail(e)] = 1;
    touched[g.edge_head(e)] = 1;
  }
  if (std::all_of(touched.begin(), touched.end(), [](std::uint8_t c) { return c != 0; })) return g;
  return induced_subgraph(g, touched);
}

namespace {

struct DisjointSets {
  std::vector<VertexId> parent;
  std::vector<std::uint32_t> size;

  explicit DisjointSets(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), VertexId{0});
  }
  VertexId find(VertexId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

}  // namespace

DirectedGraph largest_component(const DirectedGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return g;
  DisjointSets sets(n);
  for (EdgeId e = 0; e < g.edge_count(); ++e) sets.unite(g.edge_tail(e), g.edge_head(e));
  // Scanning vertices in increasing id order, the first root reaching the
  // maximal size belongs to the component with the smallest minimum id.
  VertexId best_root = sets.find(0);
  for (VertexId v = 1; v < n; ++v) {
    const VertexId r = sets.find(v);
    if (sets.size[r] > sets.size[best_root]) best_root = r;
  }
  if (sets.size[best_root] == n) return g;
  std::vector<std::uint8_t> keep(n);
  for (VertexId v = 0; v < n; ++v) keep[v] = sets.find(v) == best_root ? 1 : 0;
  return induced_subgraph(g, keep);
}

}  // namespace indeg
