#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lipschitz/heights.hpp"
#include "lipschitz/lattice.hpp"

namespace lipschitz {

// Line format (see docs/formats.md):
//   <kind> <region>
//   V <id> <x> <y>
//   E <id> <u> <v> <loop-flag>
//   B <v> <v> ...
void write_patch(std::ostream& os, const LatticePatch& patch);

struct PatchRecord {
  std::string kind;
  std::string region;
  std::vector<Point> positions;
  std::vector<Edge> edges;
  std::vector<int> loop_flags;
  std::vector<VertexId> boundary;
};
PatchRecord read_patch(std::istream& is);

// One "H <vertex> <value>" line per vertex.
void write_heights(std::ostream& os, const HeightField& h);
HeightField read_heights(std::istream& is, int num_vertices);

// One "BC <vertex> <v1,v2,...>" line per constrained vertex.
void write_bc(std::ostream& os, const BoundaryCondition& xi);
BoundaryCondition read_bc(std::istream& is, int num_vertices);

}  // namespace lipschitz
