#include "lipschitz/corpus.hpp"

#include <algorithm>
#include <set>

#include "lipschitz/errors.hpp"

namespace lipschitz {

Domain patch_domain(const LatticePatch& patch) {
  Domain d;
  d.name = patch.kind.name() + " " + to_string(patch.region);
  d.graph = patch.graph;
  d.boundary = patch.boundary;
  for (VertexId v = 0; v < patch.num_vertices(); ++v) d.host_vertex.push_back(v);
  for (EdgeId e = 0; e < patch.num_edges(); ++e) d.host_edge.push_back(e);
  return d;
}

Domain sub_domain(const FiniteGraph& host, const std::vector<VertexId>& host_boundary,
                  const std::vector<VertexId>& vertices, std::string name) {
  Domain d;
  d.name = std::move(name);
  d.graph = induced_subgraph(host, vertices, &d.host_edge);
  d.host_vertex = vertices;
  std::vector<char> inside(host.num_vertices(), 0), on_host_boundary(host.num_vertices(), 0);
  for (VertexId v : vertices) inside[v] = 1;
  for (VertexId v : host_boundary) on_host_boundary[v] = 1;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    VertexId v = vertices[i];
    bool b = on_host_boundary[v];
    for (const Incidence& inc : host.incident(v)) b = b || !inside[inc.neighbor];
    if (b) d.boundary.push_back(static_cast<VertexId>(i));
  }
  if (!d.graph.is_connected()) throw InvalidArgument("sub-domain " + d.name + " is not connected");
  return d;
}

FiniteGraph path_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return FiniteGraph(n, edges);
}

FiniteGraph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return FiniteGraph(n, edges);
}

FiniteGraph two_hexagons() {
  // Hexagon 0-1-2-3-4-5 and hexagon 1-0-6-7-8-9 share edge 0-1.
  return FiniteGraph(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 1}});
}

FiniteGraph doubled_triangle() {
  return FiniteGraph(3, {{0, 1}, {1, 2}, {2, 0}, {0, 1}, {1, 2}, {2, 0}});
}

namespace {

Instance make(std::string name, FiniteGraph g, const char* c, BoundaryCondition xi, std::vector<VertexId> boundary,
              BcShape shape, VertexId focus) {
  EdgeWeight w = EdgeWeight::parse(c);
  Instance in;
  in.name = std::move(name);
  in.rational = w.exact.has_value();
  in.model = Model::uniform(std::move(g), w);
  in.xi = std::move(xi);
  in.boundary = std::move(boundary);
  in.shape = shape;
  in.focus = focus;
  return in;
}

Instance on_patch(std::string name, const char* kind, const char* region, const char* c, BcShape shape) {
  LatticePatch p = build_patch(LatticeKind::parse(kind), parse_region(region));
  BoundaryCondition xi = shape == BcShape::pm1 ? pm1_bc(p.num_vertices(), p.boundary)
                                               : const_bc(p.num_vertices(), p.boundary, 1);
  // Focus: the interior vertex farthest from ∂D, lowest id on ties.
  auto dist = bfs_distances(p.graph, p.boundary);
  VertexId focus = static_cast<VertexId>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  return make(std::move(name), p.graph, c, std::move(xi), p.boundary, shape, focus);
}

}  // namespace

std::vector<Instance> oracle_corpus() {
  std::vector<Instance> out;
  out.push_back(make("path3-c1", path_graph(3), "1", const_bc(3, {0, 2}, 1), {0, 2}, BcShape::const1, 1));
  out.push_back(make("path3-c2", path_graph(3), "2", const_bc(3, {0, 2}, 1), {0, 2}, BcShape::const1, 1));
  out.push_back(make("path5-pm1-c3/2", path_graph(5), "3/2", pm1_bc(5, {0, 4}), {0, 4}, BcShape::pm1, 2));
  out.push_back(make("triangle-c2", cycle_graph(3), "2", const_bc(3, {0}, 1), {0}, BcShape::const1, 1));
  out.push_back(make("hexagon-pm1-c2", cycle_graph(6), "2", pm1_bc(6, {0, 3}), {0, 3}, BcShape::pm1, 1));
  {
    std::vector<VertexId> bd{2, 3, 4, 5, 6, 7, 8, 9};
    out.push_back(make("two-hex-pm1-c3/2", two_hexagons(), "3/2", pm1_bc(10, bd), bd, BcShape::pm1, 0));
  }
  out.push_back(on_patch("honeycomb-L1-pm1-c2", "honeycomb", "L(1)", "2", BcShape::pm1));
  out.push_back(on_patch("honeycomb-L1-one-c1", "honeycomb", "L(1)", "1", BcShape::const1));
  out.push_back(on_patch("honeycomb-L1-pm1-c4", "honeycomb", "L(1)", "4", BcShape::pm1));
  out.push_back(on_patch("honeycomb-R11-pm1-c3/2", "honeycomb", "R(1,1)", "3/2", BcShape::pm1));
  out.push_back(on_patch("square-L2-pm1-c1", "square", "L(2)", "1", BcShape::pm1));
  {
    LatticePatch t = build_patch(kSquare, Torus{1});
    out.push_back(make("square-torus1-root-c2", t.graph, "2", pm1_bc(t.num_vertices(), {0}), {0}, BcShape::pm1, 3));
  }
  out.push_back(make("doubled-triangle-sqrt2", doubled_triangle(), "sqrt2", const_bc(3, {0}, 1), {0},
                     BcShape::const1, 1));
  return out;
}

Instance corpus_instance(const std::string& name) {
  for (auto& in : oracle_corpus())
    if (in.name == name) return in;
  throw InvalidArgument("no corpus instance named " + name);
}

namespace {

NestedPair nested_patches(const char* kind, const char* small_region, const char* large_region) {
  LatticePatch small = build_patch(LatticeKind::parse(kind), parse_region(small_region));
  LatticePatch large = build_patch(LatticeKind::parse(kind), parse_region(large_region));
  NestedPair np;
  np.name = std::string(kind) + " " + small_region + " in " + large_region;
  np.small = patch_domain(small);
  np.large = patch_domain(large);
  np.small.host_vertex = embed_vertices(small, large);
  np.small.host_edge = embed_edges(small, large);
  return np;
}

// A domain and the same domain grown by one graph-distance layer inside host.
NestedPair grown(const std::string& name, const FiniteGraph& host, const std::vector<VertexId>& host_boundary,
                 const std::vector<VertexId>& core) {
  std::set<VertexId> big(core.begin(), core.end());
  for (VertexId v : core)
    for (const Incidence& inc : host.incident(v)) big.insert(inc.neighbor);
  std::vector<VertexId> large_vertices(big.begin(), big.end());
  NestedPair np;
  np.name = name;
  np.large = sub_domain(host, host_boundary, large_vertices, name + " (large)");
  np.small = sub_domain(host, host_boundary, core, name + " (small)");
  // Re-express small.host_vertex in the large domain's ids.
  for (VertexId& v : np.small.host_vertex)
    v = static_cast<VertexId>(std::find(large_vertices.begin(), large_vertices.end(), v) - large_vertices.begin());
  std::vector<EdgeId> large_edge_of_host(host.num_edges(), -1);
  for (std::size_t i = 0; i < np.large.host_edge.size(); ++i) large_edge_of_host[np.large.host_edge[i]] = i;
  for (EdgeId& e : np.small.host_edge) e = large_edge_of_host[e];
  return np;
}

}  // namespace

std::vector<NestedPair> nested_corpus() {
  std::vector<NestedPair> out;
  out.push_back(grown("path3 in path5", path_graph(7), {0, 6}, {2, 3, 4}));
  out.push_back(nested_patches("square", "L(1)", "L(2)"));
  {
    LatticePatch l2 = build_patch(kHoneycomb, parse_region("L(2)"));
    LatticePatch l1 = build_patch(kHoneycomb, parse_region("L(1)"));
    out.push_back(grown("honeycomb L(1) grown by one layer", l2.graph, l2.boundary, embed_vertices(l1, l2)));
  }
  {
    FiniteGraph g = two_hexagons();
    out.push_back(grown("hexagon in two hexagons", g, {}, {0, 1, 2, 3, 4, 5}));
  }
  return out;
}

}  // namespace lipschitz
