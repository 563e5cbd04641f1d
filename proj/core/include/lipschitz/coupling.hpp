#pragma once

#include <cstdlib>
#include <vector>

#include "lipschitz/edge_config.hpp"
#include "lipschitz/heights.hpp"
#include "lipschitz/random.hpp"

namespace lipschitz {

EdgeConfig sample_bernoulli(const Model& model, Rng& rng);

// Edges with max(|h(u)|, |h(v)|) >= 3.
EdgeConfig fixed_sign_edges(const FiniteGraph& g, const HeightField& h);

// ω: 1 on fixed-sign edges, B on flat ±1 edges, 0 on {1, -1} edges.
EdgeConfig omega_from(const FiniteGraph& g, const HeightField& h, const EdgeConfig& b);
inline int omega_edge(int hu, int hv, bool b) {
  if (std::abs(hu) >= 3 || std::abs(hv) >= 3) return 1;
  return hu == hv ? (b ? 1 : 0) : 0;
}

// ν with h~ = 2s - h: 0 where {|h~(u)|, |h~(v)|} = {5, 7}, B where both are
// equal and in {5, 7}, 1 otherwise.
EdgeConfig nu_from(const FiniteGraph& g, const HeightField& h, const EdgeConfig& b, int s);

// True when ω contains the fixed-sign edges of |h| and is closed on every
// edge with h(u) h(v) < 0.
bool omega_consistent(const FiniteGraph& g, const HeightField& h, const EdgeConfig& omega);

struct ClusterPartition {
  std::vector<int> cluster_of;  // per vertex, ids 0..count-1 in order of first vertex
  int count = 0;
  std::vector<char> touches;       // per cluster: contains a marked vertex
  std::vector<int> forced_sign;    // per cluster: +1, -1 or 0 (free)
};

// Components of the open subgraph. `marked` (optional, per vertex) sets the
// touches flag.
ClusterPartition clusters(const FiniteGraph& g, const EdgeConfig& open, const std::vector<char>& marked = {});

struct Quotient {
  FiniteGraph graph;
  std::vector<VertexId> vertex_map;  // original vertex -> quotient vertex
};
// Contracts the given edges; every edge is kept (contracted ones become loops),
// so edge ids agree with g.
Quotient quotient_graph(const FiniteGraph& g, const EdgeConfig& contracted);

// Sign admissible at x given |h(x)| and ξ: +1 or -1 when forced, 0 when free.
// Throws InvalidArgument when ξ(x) has no value of that absolute value.
int forced_sign(const BoundaryCondition& xi, VertexId x, int abs_height);

// ω-clusters with per-cluster forced signs. Throws InvalidArgument when ω is
// inconsistent with |h| or a cluster carries conflicting forced signs.
ClusterPartition analyze_signs(const FiniteGraph& g, const HeightField& h, const EdgeConfig& omega,
                               const BoundaryCondition& xi);

// Keeps |h|, sets forced cluster signs and flips a fair coin for each free cluster.
HeightField resample_signs(const FiniteGraph& g, const HeightField& h, const EdgeConfig& omega,
                           const BoundaryCondition& xi, Rng& rng);

}  // namespace lipschitz
