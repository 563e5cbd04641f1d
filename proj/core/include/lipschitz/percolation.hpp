#pragma once

#include <span>
#include <string>
#include <string_view>

#include "lipschitz/edge_config.hpp"
#include "lipschitz/heights.hpp"
#include "lipschitz/lattice.hpp"
#include "lipschitz/quad.hpp"

namespace lipschitz {

enum class EdgeSetTag {
  omega_open,    // ω = 1
  omega_closed,  // ω = 0
  h_omega_leq0,  // both h <= 1, and B = 0 if both equal 1
  h_omega_geq1,  // complement of the above
  h_geqB,        // both h >= s, and B = 1 if both equal s
  E_s,           // both h >= s, and B = 0 if both equal s
  E_abs,         // both |h| >= s, and B = 0 if both |h| equal s
  nu_zero        // ν = 0 for base level s
};

struct EdgeSetKind {
  EdgeSetTag tag = EdgeSetTag::omega_open;
  int s = 0;

  // omega, closed, hw<=0, hw>=1, h>=B<s>, E<s>, Eabs<s>, nu0@<s>
  std::string name() const;
  static EdgeSetKind parse(std::string_view text);
  friend bool operator==(const EdgeSetKind&, const EdgeSetKind&) = default;
};

EdgeConfig edge_set(const FiniteGraph& g, const HeightField& h, const EdgeConfig& b, const EdgeConfig& omega,
                    const EdgeSetKind& kind);

EdgeConfig complement(const EdgeConfig& set);

enum class GraphSide { primal, dual };
enum class Direction { horizontal, vertical };
std::string to_string(GraphSide side);
std::string to_string(Direction direction);

// Path from a source vertex to a target vertex using only edges in `set`; a
// vertex in both sets counts as connected.
bool primal_connected(const FiniteGraph& g, const EdgeConfig& set, std::span<const VertexId> sources,
                      std::span<const VertexId> targets);
// Path on the dual graph through dual edges whose primal edges are in `set`.
bool dual_connected(const LatticePatch& patch, const EdgeConfig& set, std::span<const FaceId> sources,
                    std::span<const FaceId> targets);

// horizontal: left to right; vertical: bottom to top. Primal uses V_side,
// dual uses V*_side.
bool crossing(const Quad& quad, const EdgeConfig& set, Direction direction, GraphSide side);

// Annulus patches only. primal: a cycle in `set` separating the inner faces
// from the outer loop, i.e. no dual path avoiding `set` between them. dual: a
// dual cycle crossing only `set` edges around the inner vertices, i.e. no
// primal path in the complement from the inner vertices to ∂D.
bool circuit(const LatticePatch& annulus, const EdgeConfig& set, GraphSide side);

}  // namespace lipschitz
