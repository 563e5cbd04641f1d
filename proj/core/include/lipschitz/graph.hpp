#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lipschitz {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

struct Edge {
  VertexId u;
  VertexId v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
};

// Finite multigraph with a compressed incidence table. Self-loops are stored
// once in the incidence list of their vertex.
class FiniteGraph {
 public:
  FiniteGraph() = default;
  FiniteGraph(int num_vertices, std::vector<Edge> edges, std::vector<int> weight_class = {});

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Incidence> incident(VertexId v) const {
    return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
  }
  int degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  int max_degree() const;
  VertexId other_end(EdgeId e, VertexId v) const {
    return edges_[e].u == v ? edges_[e].v : edges_[e].u;
  }
  bool has_self_loops() const;
  bool is_connected() const;

  // Optional per-edge weight class; empty when the graph carries none.
  const std::vector<int>& weight_class() const { return weight_class_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> weight_class_;
  std::vector<int> offsets_{0};
  std::vector<Incidence> incidences_;
};

constexpr int kUnreachable = -1;

// Multi-source BFS; unreachable vertices get kUnreachable.
std::vector<int> bfs_distances(const FiniteGraph& g, std::span<const VertexId> sources);

// Throws InvalidArgument when u and v lie in different components.
int graph_distance(const FiniteGraph& g, VertexId u, VertexId v);

// Induced subgraph on `vertices` (kept in the given order). edge_map, when
// requested, receives the parent edge id of every kept edge.
FiniteGraph induced_subgraph(const FiniteGraph& g, std::span<const VertexId> vertices,
                             std::vector<EdgeId>* edge_map = nullptr);

// Proper 2-colouring with colour 0 on the lowest vertex of each component,
// or nothing if g has an odd cycle.
std::optional<std::vector<int>> two_coloring(const FiniteGraph& g);

// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(int n = 0) { reset(n); }
  void reset(int n);
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b);
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace lipschitz
