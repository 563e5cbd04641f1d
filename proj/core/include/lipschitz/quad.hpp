#pragma once

#include <array>
#include <vector>

#include "lipschitz/lattice.hpp"

namespace lipschitz {

enum class Side { left = 0, bottom = 1, right = 2, top = 3 };

// A simply connected patch bounded by its dual loop, with four marked loop
// faces bl, br, tr, tl in counterclockwise order. Each side is the arc of
// the loop between two consecutive marked faces (endpoints included):
// bottom = bl->br, right = br->tr, top = tr->tl, left = tl->bl.
struct Quad {
  const LatticePatch* patch = nullptr;
  std::array<FaceId, 4> marked{};  // bl, br, tr, tl

  // Indexed by Side.
  std::array<std::vector<FaceId>, 4> dual_vertices;   // V*_side
  std::array<std::vector<int>, 4> crossings;          // indices into patch->loop_crossings (E_side)
  std::array<std::vector<VertexId>, 4> vertices;      // V_side: inner endpoints of E_side

  const std::vector<FaceId>& dual_side(Side s) const { return dual_vertices[static_cast<int>(s)]; }
  const std::vector<VertexId>& side(Side s) const { return vertices[static_cast<int>(s)]; }
};

// The patch must outlive the quad.
Quad make_quad(const LatticePatch& patch, const std::array<FaceId, 4>& marked);
// Quad on the four corner faces of the patch's region.
Quad corner_quad(const LatticePatch& patch);

}  // namespace lipschitz
