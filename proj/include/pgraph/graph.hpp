#pragma once

// Fundamental graphs of periodic graphs: a finite vertex set with potentials
// plus unoriented edges labelled by integer index vectors. The periodic graph
// itself is never materialised; every operation works on this quotient data.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pgraph {

using IndexVector = std::vector<int>;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Vertex {
  std::string id;
  double potential = 0.0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Edge description by vertex id, used when building graphs.
struct EdgeSpec {
  std::string from;
  std::string to;
  IndexVector index;
};

// Stored edge, endpoints as positions in the vertex list. The stored
// orientation is the canonical one; the reverse orientation carries -index.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  IndexVector index;

  bool is_loop() const { return from == to; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct OrientedEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  IndexVector index;
};

// Adds one edge (v1, v2) with index t to a fundamental graph.
struct PerturbationSpec {
  std::string v1;
  std::string v2;
  IndexVector t;
};

inline std::string format_index(const IndexVector& index) {
  std::string out = "(";
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(index[i]);
  }
  return out + ")";
}

class FundamentalGraph {
 public:
  FundamentalGraph() = default;

  // Validating constructor. Vertex order is preserved and defines the
  // row/column order of every fiber matrix built from this graph.
  static FundamentalGraph build(int dimension, std::vector<Vertex> vertices,
                                const std::vector<EdgeSpec>& edges) {
    if (dimension < 1)
      throw GraphError("graph dimension must be >= 1, got " + std::to_string(dimension));
    if (vertices.empty()) throw GraphError("graph has no vertices");

    FundamentalGraph g;
    g.dimension_ = dimension;
    g.vertices_ = std::move(vertices);
    for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
      auto [it, inserted] = g.lookup_.emplace(g.vertices_[i].id, i);
      if (!inserted) throw GraphError("duplicate vertex id '" + g.vertices_[i].id + "'");
    }
    g.edges_.reserve(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& spec = edges[e];
      if (spec.index.size() != static_cast<std::size_t>(dimension))
        throw GraphError("edge " + std::to_string(e) + " index " + format_index(spec.index) +
                         " has length " + std::to_string(spec.index.size()) +
                         ", expected " + std::to_string(dimension));
      g.edges_.push_back(Edge{g.require_vertex(spec.from, "edge endpoint"),
                              g.require_vertex(spec.to, "edge endpoint"), spec.index});
    }
    if (!g.quotient_connected()) throw GraphError("quotient graph is disconnected");
    return g;
  }

  int dimension() const { return dimension_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_vertex(std::string_view id) const { return lookup_.count(std::string(id)) != 0; }

  std::size_t vertex_index(std::string_view id) const { return require_vertex(id, "vertex"); }

  // Number of oriented edges leaving v; loops count twice.
  std::size_t degree(std::size_t v) const {
    if (v >= vertices_.size()) throw GraphError("vertex position out of range");
    std::size_t deg = 0;
    for (const auto& e : edges_) {
      if (e.from == v) ++deg;
      if (e.to == v) ++deg;
    }
    return deg;
  }
  std::size_t degree(std::string_view id) const { return degree(vertex_index(id)); }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (std::size_t v = 0; v < vertices_.size(); ++v) best = std::max(best, degree(v));
    return best;
  }

  // Both orientations of every edge: (u,v,tau) followed by (v,u,-tau).
  std::vector<OrientedEdge> oriented_edges() const {
    std::vector<OrientedEdge> out;
    out.reserve(2 * edges_.size());
    for (const auto& e : edges_) {
      out.push_back({e.from, e.to, e.index});
      IndexVector neg(e.index.size());
      std::transform(e.index.begin(), e.index.end(), neg.begin(), [](int x) { return -x; });
      out.push_back({e.to, e.from, std::move(neg)});
    }
    return out;
  }

  std::vector<EdgeSpec> edge_specs() const {
    std::vector<EdgeSpec> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_)
      out.push_back({vertices_[e.from].id, vertices_[e.to].id, e.index});
    return out;
  }

  // Largest |tau_s| over all edges, per coordinate.
  std::vector<int> index_bandwidth() const {
    std::vector<int> band(static_cast<std::size_t>(dimension_), 0);
    for (const auto& e : edges_)
      for (std::size_t s = 0; s < band.size(); ++s) band[s] = std::max(band[s], std::abs(e.index[s]));
    return band;
  }

  friend bool operator==(const FundamentalGraph& a, const FundamentalGraph& b) {
    return a.dimension_ == b.dimension_ && a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t require_vertex(std::string_view id, const char* what) const {
    auto it = lookup_.find(std::string(id));
    if (it == lookup_.end()) throw GraphError(std::string("unknown ") + what + " '" + std::string(id) + "'");
    return it->second;
  }

  bool quotient_connected() const {
    std::vector<std::size_t> parent(vertices_.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t components = vertices_.size();
    for (const auto& e : edges_) {
      auto a = find(e.from), b = find(e.to);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
    return components == 1;
  }

  int dimension_ = 0;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

// G -> G_t: one extra edge (v1, v2, t), appended last.
inline FundamentalGraph perturb(const FundamentalGraph& g, const PerturbationSpec& p) {
  if (p.t.size() != static_cast<std::size_t>(g.dimension()))
    throw GraphError("perturbation index " + format_index(p.t) + " does not match graph dimension " +
                     std::to_string(g.dimension()));
  if (!g.has_vertex(p.v1)) throw GraphError("unknown perturbation vertex '" + p.v1 + "'");
  if (!g.has_vertex(p.v2)) throw GraphError("unknown perturbation vertex '" + p.v2 + "'");
  auto edges = g.edge_specs();
  edges.push_back({p.v1, p.v2, p.t});
  return FundamentalGraph::build(g.dimension(), g.vertices(), edges);
}

// Inverse of perturb for the structural round trip; the result must stay
// connected.
inline FundamentalGraph remove_edge(const FundamentalGraph& g, std::size_t ordinal) {
  if (ordinal >= g.edge_count())
    throw GraphError("edge ordinal " + std::to_string(ordinal) + " out of range (graph has " +
                     std::to_string(g.edge_count()) + " edges)");
  auto edges = g.edge_specs();
  edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(ordinal));
  return FundamentalGraph::build(g.dimension(), g.vertices(), edges);
}

// G_t -> limit graph of dimension d+1: every edge keeps its index padded with
// a trailing 0, the designated edge gets the new basis vector (0,...,0,1).
inline FundamentalGraph lift_to_limit(const FundamentalGraph& g, std::size_t added_edge) {
  if (added_edge >= g.edge_count())
    throw GraphError("edge ordinal " + std::to_string(added_edge) + " out of range (graph has " +
                     std::to_string(g.edge_count()) + " edges)");
  auto edges = g.edge_specs();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (e == added_edge) {
      edges[e].index.assign(edges[e].index.size(), 0);
      edges[e].index.push_back(1);
    } else {
      edges[e].index.push_back(0);
    }
  }
  return FundamentalGraph::build(g.dimension() + 1, g.vertices(), edges);
}

inline FundamentalGraph lift_to_limit(const FundamentalGraph& g) {
  if (g.edge_count() == 0) throw GraphError("graph has no edges to lift");
  return lift_to_limit(g, g.edge_count() - 1);
}

}  // namespace pgraph
