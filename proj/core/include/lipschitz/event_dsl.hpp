#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lipschitz/percolation.hpp"

namespace lipschitz {

// Textual crossing and circuit events:
//   cross(primal|dual, <edge set>, <region>, horizontal|vertical)
//   circuit(primal|dual, <edge set>, <inner region>, <outer region>)
// e.g. "cross(primal, omega, R(10,1), vertical)", "circuit(dual, E5, L(2), L(6))".
struct EventSpec {
  enum class Type { cross, circuit };
  Type type = Type::cross;
  GraphSide side = GraphSide::primal;
  EdgeSetKind set;
  RegionSpec region;  // simple region for cross, annulus for circuit
  Direction direction = Direction::horizontal;

  std::string to_string() const;
};

EventSpec parse_event(std::string_view text);

// An event placed on a host patch of the same lattice kind: the event's own
// patch is built and embedded into the host once, then evaluated on host
// configurations.
class BoundEvent {
 public:
  BoundEvent(const EventSpec& spec, const LatticePatch& host);
  BoundEvent(const BoundEvent&) = delete;
  BoundEvent& operator=(const BoundEvent&) = delete;

  const EventSpec& spec() const { return spec_; }
  const LatticePatch& patch() const { return patch_; }
  bool holds(const HeightField& h, const EdgeConfig& b, const EdgeConfig& omega) const;

 private:
  EventSpec spec_;
  LatticePatch patch_;
  Quad quad_;
  std::vector<VertexId> vertex_map_;
  std::vector<EdgeId> edge_map_;
};

}  // namespace lipschitz
