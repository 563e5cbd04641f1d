#pragma once

#include <string>
#include <vector>

#include "lipschitz/heights.hpp"
#include "lipschitz/lattice.hpp"

namespace lipschitz {

// A finite domain with its boundary ∂D and, when cut from a host graph, the
// host ids of its vertices and edges.
struct Domain {
  std::string name;
  FiniteGraph graph;
  std::vector<VertexId> boundary;
  std::vector<VertexId> host_vertex;
  std::vector<EdgeId> host_edge;
};

Domain patch_domain(const LatticePatch& patch);
// Subgraph generated by `vertices` (kept in the given order); its boundary is
// the set of vertices with a host edge leaving the set or lying on host_boundary.
Domain sub_domain(const FiniteGraph& host, const std::vector<VertexId>& host_boundary,
                  const std::vector<VertexId>& vertices, std::string name);

FiniteGraph path_graph(int n);
FiniteGraph cycle_graph(int n);
// Two hexagons sharing an edge (10 vertices, 11 edges); the shared edge is 0-1.
FiniteGraph two_hexagons();
// Triangle with every edge doubled, covered by two edge-disjoint triangles.
FiniteGraph doubled_triangle();

enum class BcShape { pm1, const1, custom };

// Oracle-sized model instance.
struct Instance {
  std::string name;
  Model model;
  BoundaryCondition xi;
  std::vector<VertexId> boundary;
  BcShape shape = BcShape::custom;
  VertexId focus = 0;      // vertex for marginal and sampler checks
  bool rational = true;    // exact arithmetic available
};

// The standing corpus used by kernel, symmetry, log-concavity and sampler checks.
std::vector<Instance> oracle_corpus();
// Looks up a corpus instance by name; throws InvalidArgument if absent.
Instance corpus_instance(const std::string& name);

// D ⊆ D' pairs with {±1} on the respective boundaries; small.host_vertex
// gives the position of each small vertex inside large.
struct NestedPair {
  std::string name;
  Domain small;
  Domain large;
};
std::vector<NestedPair> nested_corpus();

}  // namespace lipschitz
