#include "lipschitz/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "lipschitz/errors.hpp"

namespace lipschitz {

FiniteGraph::FiniteGraph(int num_vertices, std::vector<Edge> edges, std::vector<int> weight_class)
    : n_(num_vertices), edges_(std::move(edges)), weight_class_(std::move(weight_class)) {
  if (n_ < 0) throw InvalidArgument("negative vertex count");
  if (!weight_class_.empty() && weight_class_.size() != edges_.size())
    throw InvalidArgument("weight class table does not match edge count");
  std::vector<int> count(n_ + 1, 0);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw InvalidArgument("edge endpoint out of range");
    ++count[e.u + 1];
    if (e.v != e.u) ++count[e.v + 1];
  }
  offsets_.assign(n_ + 1, 0);
  for (int v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + count[v + 1];
  incidences_.resize(offsets_[n_]);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[e];
    incidences_[fill[ed.u]++] = {ed.v, e};
    if (ed.v != ed.u) incidences_[fill[ed.v]++] = {ed.u, e};
  }
}

int FiniteGraph::max_degree() const {
  int d = 0;
  for (VertexId v = 0; v < n_; ++v) d = std::max(d, degree(v));
  return d;
}

bool FiniteGraph::has_self_loops() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.u == e.v; });
}

bool FiniteGraph::is_connected() const {
  if (n_ == 0) return true;
  VertexId s = 0;
  auto d = bfs_distances(*this, std::span<const VertexId>(&s, 1));
  return std::none_of(d.begin(), d.end(), [](int x) { return x == kUnreachable; });
}

std::vector<int> bfs_distances(const FiniteGraph& g, std::span<const VertexId> sources) {
  std::vector<int> dist(g.num_vertices(), kUnreachable);
  std::deque<VertexId> queue;
  for (VertexId s : sources) {
    if (dist[s] == kUnreachable) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (const Incidence& inc : g.incident(v)) {
      if (dist[inc.neighbor] == kUnreachable) {
        dist[inc.neighbor] = dist[v] + 1;
        queue.push_back(inc.neighbor);
      }
    }
  }
  return dist;
}

int graph_distance(const FiniteGraph& g, VertexId u, VertexId v) {
  if (u < 0 || u >= g.num_vertices() || v < 0 || v >= g.num_vertices())
    throw InvalidArgument("vertex out of range");
  auto d = bfs_distances(g, std::span<const VertexId>(&u, 1));
  if (d[v] == kUnreachable)
    throw InvalidArgument("vertices " + std::to_string(u) + " and " + std::to_string(v) +
                          " are disconnected");
  return d[v];
}

FiniteGraph induced_subgraph(const FiniteGraph& g, std::span<const VertexId> vertices,
                             std::vector<EdgeId>* edge_map) {
  std::vector<int> index(g.num_vertices(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (index[vertices[i]] != -1) throw InvalidArgument("duplicate vertex in induced subgraph");
    index[vertices[i]] = static_cast<int>(i);
  }
  std::vector<Edge> edges;
  std::vector<int> classes;
  if (edge_map) edge_map->clear();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (index[ed.u] < 0 || index[ed.v] < 0) continue;
    edges.push_back({index[ed.u], index[ed.v]});
    if (!g.weight_class().empty()) classes.push_back(g.weight_class()[e]);
    if (edge_map) edge_map->push_back(e);
  }
  return FiniteGraph(static_cast<int>(vertices.size()), std::move(edges), std::move(classes));
}

std::optional<std::vector<int>> two_coloring(const FiniteGraph& g) {
  std::vector<int> color(g.num_vertices(), -1);
  std::deque<VertexId> queue;
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      for (const Incidence& inc : g.incident(v)) {
        if (color[inc.neighbor] == -1) {
          color[inc.neighbor] = 1 - color[v];
          queue.push_back(inc.neighbor);
        } else if (color[inc.neighbor] == color[v]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

void DisjointSets::reset(int n) {
  parent_.resize(n);
  size_.assign(n, 1);
  for (int i = 0; i < n; ++i) parent_[i] = i;
}

bool DisjointSets::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

}  // namespace lipschitz
