#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lipschitz/graph.hpp"

namespace lipschitz {

// Bipartite graph produced by dotting or the star-triangle transform. The
// original vertices keep their ids 0..n-1 and are odd; inserted vertices
// follow and are even.
struct BipartiteTransform {
  FiniteGraph graph;
  std::vector<int> parity;        // 1 = odd (original), 0 = even (inserted)
  int original_vertices = 0;
  // For every inserted vertex: the edge (dotting) or triangle index (star) it replaces.
  std::vector<int> source;

  // Restriction of a function on the transformed graph to the original vertices.
  template <class T>
  std::vector<T> restrict(const std::vector<T>& values) const {
    return std::vector<T>(values.begin(), values.begin() + original_vertices);
  }
};

// Midpoint of edge e becomes vertex n + e; edge e turns into edges 2e (u side) and 2e+1 (v side).
BipartiteTransform dot_transform(const FiniteGraph& g);

using Triangle = std::array<EdgeId, 3>;

// Triangle k is replaced by a star through vertex n + k. The triangles must be
// edge-disjoint closed 3-walks covering every edge.
BipartiteTransform star_triangle_transform(const FiniteGraph& g, const std::vector<Triangle>& triangles);

// All 3-cycles of g (as edge triples), in lexicographic order.
std::vector<Triangle> find_triangles(const FiniteGraph& g);

// An edge-disjoint family of triangles covering every edge: all triangles
// when every edge lies in exactly one, otherwise one class of a proper
// 2-colouring of the edge-sharing relation. Nothing if no such cover exists.
std::optional<std::vector<Triangle>> triangle_cover(const FiniteGraph& g);

}  // namespace lipschitz
