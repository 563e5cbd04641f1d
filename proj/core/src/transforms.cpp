#include "lipschitz/transforms.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "lipschitz/errors.hpp"

namespace lipschitz {

BipartiteTransform dot_transform(const FiniteGraph& g) {
  const int n = g.num_vertices();
  BipartiteTransform t;
  t.original_vertices = n;
  std::vector<Edge> edges;
  edges.reserve(2 * g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    edges.push_back({g.edge(e).u, n + e});
    edges.push_back({n + e, g.edge(e).v});
    t.source.push_back(e);
  }
  t.graph = FiniteGraph(n + g.num_edges(), std::move(edges));
  t.parity.assign(n, 1);
  t.parity.resize(n + g.num_edges(), 0);
  return t;
}

BipartiteTransform star_triangle_transform(const FiniteGraph& g, const std::vector<Triangle>& triangles) {
  const int n = g.num_vertices();
  std::vector<int> covered(g.num_edges(), 0);
  BipartiteTransform t;
  t.original_vertices = n;
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < triangles.size(); ++k) {
    const Triangle& tri = triangles[k];
    std::map<VertexId, int> incidence;
    for (EdgeId e : tri) {
      if (e < 0 || e >= g.num_edges()) throw InvalidArgument("triangle edge out of range");
      ++covered[e];
      ++incidence[g.edge(e).u];
      ++incidence[g.edge(e).v];
    }
    bool closed = incidence.size() == 3 &&
                  std::all_of(incidence.begin(), incidence.end(), [](const auto& kv) { return kv.second == 2; });
    if (!closed) throw InvalidArgument("triangle " + std::to_string(k) + " is not a closed 3-edge walk");
    const VertexId center = n + static_cast<VertexId>(k);
    for (const auto& kv : incidence) edges.push_back({center, kv.first});
    t.source.push_back(static_cast<int>(k));
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (covered[e] != 1)
      throw InvalidArgument("edge " + std::to_string(e) + " is covered " + std::to_string(covered[e]) +
                            " times by the triangles");
  t.graph = FiniteGraph(n + static_cast<int>(triangles.size()), std::move(edges));
  t.parity.assign(n, 1);
  t.parity.resize(n + triangles.size(), 0);
  return t;
}

std::vector<Triangle> find_triangles(const FiniteGraph& g) {
  std::set<Triangle> found;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ab = g.edge(e);
    if (ab.u == ab.v) continue;
    for (const Incidence& i1 : g.incident(ab.v)) {
      if (i1.edge == e || i1.neighbor == ab.u || i1.neighbor == ab.v) continue;
      for (const Incidence& i2 : g.incident(i1.neighbor)) {
        if (i2.neighbor != ab.u || i2.edge == i1.edge || i2.edge == e) continue;
        Triangle tri{e, i1.edge, i2.edge};
        std::sort(tri.begin(), tri.end());
        found.insert(tri);
      }
    }
  }
  return {found.begin(), found.end()};
}

std::optional<std::vector<Triangle>> triangle_cover(const FiniteGraph& g) {
  std::vector<Triangle> all = find_triangles(g);
  std::vector<std::vector<int>> by_edge(g.num_edges());
  for (std::size_t k = 0; k < all.size(); ++k)
    for (EdgeId e : all[k]) by_edge[e].push_back(static_cast<int>(k));
  bool unique = std::all_of(by_edge.begin(), by_edge.end(), [](const auto& v) { return v.size() == 1; });
  if (unique) return all;

  std::vector<int> color(all.size(), -1);
  for (std::size_t s = 0; s < all.size(); ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::deque<int> queue{static_cast<int>(s)};
    while (!queue.empty()) {
      int k = queue.front();
      queue.pop_front();
      for (EdgeId e : all[k])
        for (int other : by_edge[e]) {
          if (other == k) continue;
          if (color[other] == -1) {
            color[other] = 1 - color[k];
            queue.push_back(other);
          } else if (color[other] == color[k]) {
            return std::nullopt;
          }
        }
    }
  }
  std::vector<Triangle> cover;
  for (std::size_t k = 0; k < all.size(); ++k)
    if (color[k] == 0) cover.push_back(all[k]);
  std::vector<int> count(g.num_edges(), 0);
  for (const Triangle& t : cover)
    for (EdgeId e : t) ++count[e];
  if (!std::all_of(count.begin(), count.end(), [](int c) { return c == 1; })) return std::nullopt;
  return cover;
}

}  // namespace lipschitz
