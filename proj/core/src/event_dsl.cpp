#include "lipschitz/event_dsl.hpp"

#include <cctype>

#include "lipschitz/errors.hpp"

namespace lipschitz {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Splits on commas at parenthesis depth zero.
std::vector<std::string> split_args(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth < 0) throw InvalidArgument("unbalanced parentheses in event");
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw InvalidArgument("unbalanced parentheses in event");
  out.push_back(trim(s.substr(start)));
  return out;
}

GraphSide parse_side(const std::string& s) {
  if (s == "primal") return GraphSide::primal;
  if (s == "dual") return GraphSide::dual;
  throw InvalidArgument("expected primal or dual, got '" + s + "'");
}

SimpleRegion parse_simple(const std::string& s) {
  RegionSpec r = parse_region(s);
  if (auto* l = std::get_if<Lozenge>(&r)) return *l;
  if (auto* q = std::get_if<Rectangle>(&r)) return *q;
  throw InvalidArgument("expected a lozenge or rectangle, got '" + s + "'");
}

}  // namespace

std::string EventSpec::to_string() const {
  std::string out = type == Type::cross ? "cross(" : "circuit(";
  out += lipschitz::to_string(side) + ", " + set.name() + ", ";
  if (type == Type::cross) {
    out += lipschitz::to_string(region) + ", " + lipschitz::to_string(direction);
  } else {
    const auto& a = std::get<Annulus>(region);
    out += lipschitz::to_string(a.inner) + ", " + lipschitz::to_string(a.outer);
  }
  return out + ")";
}

EventSpec parse_event(std::string_view text) {
  std::string t = trim(text);
  auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') throw InvalidArgument("malformed event '" + t + "'");
  std::string head = trim(std::string_view(t).substr(0, open));
  auto args = split_args(std::string_view(t).substr(open + 1, t.size() - open - 2));
  if (args.size() != 4) throw InvalidArgument("event '" + t + "' needs four arguments");
  EventSpec e;
  e.side = parse_side(args[0]);
  e.set = EdgeSetKind::parse(args[1]);
  if (head == "cross") {
    e.type = EventSpec::Type::cross;
    SimpleRegion r = parse_simple(args[2]);
    e.region = std::visit([](auto x) -> RegionSpec { return x; }, r);
    if (args[3] == "horizontal")
      e.direction = Direction::horizontal;
    else if (args[3] == "vertical")
      e.direction = Direction::vertical;
    else
      throw InvalidArgument("expected horizontal or vertical, got '" + args[3] + "'");
  } else if (head == "circuit") {
    e.type = EventSpec::Type::circuit;
    e.region = Annulus{parse_simple(args[2]), parse_simple(args[3])};
  } else {
    throw InvalidArgument("unknown event '" + head + "'");
  }
  return e;
}

BoundEvent::BoundEvent(const EventSpec& spec, const LatticePatch& host)
    : spec_(spec), patch_(build_patch(host.kind, spec.region)) {
  if (host.torus) throw Unsupported("events on a torus host");
  vertex_map_ = embed_vertices(patch_, host);
  edge_map_ = embed_edges(patch_, host);
  if (spec_.type == EventSpec::Type::cross) quad_ = corner_quad(patch_);
}

bool BoundEvent::holds(const HeightField& h, const EdgeConfig& b, const EdgeConfig& omega) const {
  HeightField hs;
  hs.values.reserve(vertex_map_.size());
  for (VertexId v : vertex_map_) hs.values.push_back(h[v]);
  EdgeConfig bs(patch_.num_edges()), ws(patch_.num_edges());
  for (EdgeId e = 0; e < patch_.num_edges(); ++e) {
    bs.set(e, b[edge_map_[e]]);
    ws.set(e, omega[edge_map_[e]]);
  }
  EdgeConfig set = edge_set(patch_.graph, hs, bs, ws, spec_.set);
  if (spec_.type == EventSpec::Type::cross) return crossing(quad_, set, spec_.direction, spec_.side);
  return circuit(patch_, set, spec_.side);
}

}  // namespace lipschitz
