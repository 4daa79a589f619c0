// graph.hpp - immutable bounded-degree undirected graphs with dense ids.
//
// Graphs are assembled with a GraphBuilder and frozen into a Graph whose
// adjacency is stored in compressed (CSR) form. Vertex ids run 0..V-1 and
// edge ids 0..E-1 in creation order, so engines can index flat arrays.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace richardson {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  VertexId u;
  VertexId w;

  VertexId other(VertexId v) const { return v == u ? w : u; }
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
};

/// Vertices and edges created by one add_path / add_bridge call, in order
/// of traversal away from the starting vertex.
struct PathSegment {
  std::vector<VertexId> vertices;
  std::vector<EdgeId> edges;

  VertexId back() const { return vertices.back(); }
};

class Graph {
 public:
  Graph() = default;

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t max_degree() const { return max_degree_; }

  std::span<const Incidence> neighbors(VertexId v) const {
    return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }

  std::string_view label(VertexId v) const {
    return v < labels_.size() ? std::string_view(labels_[v]) : std::string_view();
  }

  /// Debug dump: header "vertices=V edges=E", then one "u w edge_id" per line.
  void dump(std::ostream& os) const {
    os << "vertices=" << vertex_count() << " edges=" << edge_count() << '\n';
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      os << edges_[e].u << ' ' << edges_[e].w << ' ' << e << '\n';
    }
  }

 private:
  friend class GraphBuilder;

  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidences_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::size_t max_degree_ = 0;
};

/// Single-owner mutable builder. freeze() hands the data to an immutable
/// Graph; every mutating call afterwards throws.
class GraphBuilder {
 public:
  VertexId add_vertex(std::string label = {}) {
    ensure_open();
    adjacency_.emplace_back();
    labels_.push_back(std::move(label));
    return static_cast<VertexId>(adjacency_.size() - 1);
  }

  EdgeId add_edge(VertexId u, VertexId w) {
    ensure_open();
    check_vertex(u);
    check_vertex(w);
    if (u == w) throw GraphError("self-loop at vertex " + std::to_string(u));
    if (has_edge(u, w)) {
      throw GraphError("duplicate edge " + std::to_string(u) + "-" + std::to_string(w));
    }
    return push_edge(u, w);
  }

  bool has_edge(VertexId u, VertexId w) const {
    check_vertex(u);
    check_vertex(w);
    const auto& small = adjacency_[u].size() <= adjacency_[w].size() ? adjacency_[u] : adjacency_[w];
    const VertexId target = adjacency_[u].size() <= adjacency_[w].size() ? w : u;
    return std::any_of(small.begin(), small.end(),
                       [target](const Incidence& inc) { return inc.neighbor == target; });
  }

  /// Chain of `length` new vertices hanging off `from`; back() is the far end.
  PathSegment add_path(VertexId from, std::int64_t length, std::string_view label_prefix = {}) {
    ensure_open();
    check_vertex(from);
    if (length < 1) throw GraphError("path length must be positive");
    PathSegment seg;
    seg.vertices.reserve(static_cast<std::size_t>(length));
    seg.edges.reserve(static_cast<std::size_t>(length));
    VertexId prev = from;
    for (std::int64_t j = 1; j <= length; ++j) {
      VertexId v = add_vertex(make_label(label_prefix, j));
      seg.edges.push_back(push_edge(prev, v));
      seg.vertices.push_back(v);
      prev = v;
    }
    return seg;
  }

  /// Path of `length` edges from u to w; `vertices` holds the length-1
  /// interior vertices (empty for a direct edge).
  PathSegment add_bridge(VertexId u, VertexId w, std::int64_t length,
                         std::string_view label_prefix = {}) {
    ensure_open();
    check_vertex(u);
    check_vertex(w);
    if (u == w) throw GraphError("self-bridge at vertex " + std::to_string(u));
    if (length < 1) throw GraphError("bridge length must be positive");
    if (length == 1 && has_edge(u, w)) {
      throw GraphError("duplicate edge " + std::to_string(u) + "-" + std::to_string(w));
    }
    PathSegment seg;
    seg.vertices.reserve(static_cast<std::size_t>(length - 1));
    seg.edges.reserve(static_cast<std::size_t>(length));
    VertexId prev = u;
    for (std::int64_t j = 1; j < length; ++j) {
      VertexId v = add_vertex(make_label(label_prefix, j));
      seg.edges.push_back(push_edge(prev, v));
      seg.vertices.push_back(v);
      prev = v;
    }
    seg.edges.push_back(push_edge(prev, w));
    return seg;
  }

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool frozen() const { return frozen_; }

  Graph freeze() {
    ensure_open();
    frozen_ = true;
    Graph g;
    g.offsets_.reserve(adjacency_.size() + 1);
    g.offsets_.push_back(0);
    g.incidences_.reserve(2 * edges_.size());
    for (const auto& list : adjacency_) {
      g.incidences_.insert(g.incidences_.end(), list.begin(), list.end());
      g.offsets_.push_back(g.incidences_.size());
      g.max_degree_ = std::max(g.max_degree_, list.size());
    }
    g.edges_ = std::move(edges_);
    g.labels_ = std::move(labels_);
    adjacency_.clear();
    return g;
  }

 private:
  void ensure_open() const {
    if (frozen_) throw GraphError("builder frozen");
  }
  void check_vertex(VertexId v) const {
    if (v >= adjacency_.size()) throw GraphError("invalid vertex " + std::to_string(v));
  }
  EdgeId push_edge(VertexId u, VertexId w) {
    const auto e = static_cast<EdgeId>(edges_.size());
    edges_.push_back({u, w});
    adjacency_[u].push_back({w, e});
    adjacency_[w].push_back({u, e});
    return e;
  }
  static std::string make_label(std::string_view prefix, std::int64_t j) {
    if (prefix.empty()) return {};
    std::string s(prefix);
    s += ':';
    s += std::to_string(j);
    return s;
  }

  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  bool frozen_ = false;
};

/// Edges with exactly one endpoint in `set`, ascending by id.
inline std::vector<EdgeId> boundary_edges(const Graph& g, std::span<const VertexId> set) {
  std::vector<char> in(g.vertex_count(), 0);
  for (VertexId v : set) {
    if (v >= g.vertex_count()) throw GraphError("invalid vertex " + std::to_string(v));
    in[v] = 1;
  }
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (in[ed.u] != in[ed.w]) out.push_back(e);
  }
  return out;
}

inline bool is_connected(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : g.neighbors(v)) {
      if (!seen[inc.neighbor]) {
        seen[inc.neighbor] = 1;
        ++reached;
        stack.push_back(inc.neighbor);
      }
    }
  }
  return reached == n;
}

/// Adjacency symmetry: every edge appears exactly once in each endpoint's list.
inline bool adjacency_symmetric(const Graph& g) {
  std::vector<int> seen(g.edge_count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (const Incidence& inc : g.neighbors(v)) {
      if (inc.edge >= g.edge_count()) return false;
      const Edge& e = g.edge(inc.edge);
      if (!((e.u == v && e.w == inc.neighbor) || (e.w == v && e.u == inc.neighbor))) return false;
      ++seen[inc.edge];
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 2; });
}

}  // namespace richardson
