#include "lipschitz/percolation.hpp"

#include <cstdlib>
#include <deque>

#include "lipschitz/coupling.hpp"
#include "lipschitz/errors.hpp"

namespace lipschitz {

std::string EdgeSetKind::name() const {
  switch (tag) {
    case EdgeSetTag::omega_open: return "omega";
    case EdgeSetTag::omega_closed: return "closed";
    case EdgeSetTag::h_omega_leq0: return "hw<=0";
    case EdgeSetTag::h_omega_geq1: return "hw>=1";
    case EdgeSetTag::h_geqB: return "h>=B" + std::to_string(s);
    case EdgeSetTag::E_s: return "E" + std::to_string(s);
    case EdgeSetTag::E_abs: return "Eabs" + std::to_string(s);
    case EdgeSetTag::nu_zero: return "nu0@" + std::to_string(s);
  }
  return "?";
}

namespace {

int parse_level(std::string_view text, std::string_view whole) {
  if (text.empty()) throw InvalidArgument("missing level in edge set '" + std::string(whole) + "'");
  int s = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw InvalidArgument("bad level in edge set '" + std::string(whole) + "'");
    s = s * 10 + (ch - '0');
    if (s > 1'000'000) throw InvalidArgument("level too large");
  }
  if (s % 2 == 0) throw InvalidArgument("edge set level must be odd and positive");
  return s;
}

}  // namespace

EdgeSetKind EdgeSetKind::parse(std::string_view text) {
  auto starts = [&](std::string_view p) { return text.substr(0, p.size()) == p; };
  if (text == "omega") return {EdgeSetTag::omega_open, 0};
  if (text == "closed") return {EdgeSetTag::omega_closed, 0};
  if (text == "hw<=0") return {EdgeSetTag::h_omega_leq0, 0};
  if (text == "hw>=1") return {EdgeSetTag::h_omega_geq1, 0};
  if (starts("h>=B")) return {EdgeSetTag::h_geqB, parse_level(text.substr(4), text)};
  if (starts("Eabs")) return {EdgeSetTag::E_abs, parse_level(text.substr(4), text)};
  if (starts("nu0@")) return {EdgeSetTag::nu_zero, parse_level(text.substr(4), text)};
  if (starts("E")) return {EdgeSetTag::E_s, parse_level(text.substr(1), text)};
  throw InvalidArgument("unknown edge set '" + std::string(text) + "'");
}

EdgeConfig edge_set(const FiniteGraph& g, const HeightField& h, const EdgeConfig& b, const EdgeConfig& omega,
                    const EdgeSetKind& kind) {
  const int m = g.num_edges();
  if (b.size() != m || omega.size() != m) throw InvalidArgument("edge configuration size mismatch");
  const int s = kind.s;
  bool needs_level = kind.tag == EdgeSetTag::h_geqB || kind.tag == EdgeSetTag::E_s ||
                     kind.tag == EdgeSetTag::E_abs || kind.tag == EdgeSetTag::nu_zero;
  if (needs_level && (s <= 0 || s % 2 == 0)) throw InvalidArgument("edge set level must be odd and positive");
  if (kind.tag == EdgeSetTag::nu_zero) return complement(nu_from(g, h, b, s));
  EdgeConfig out(m);
  for (EdgeId e = 0; e < m; ++e) {
    const int x = h[g.edge(e).u], y = h[g.edge(e).v];
    bool in = false;
    switch (kind.tag) {
      case EdgeSetTag::omega_open: in = omega[e]; break;
      case EdgeSetTag::omega_closed: in = !omega[e]; break;
      case EdgeSetTag::h_omega_leq0: in = x <= 1 && y <= 1 && !(x == 1 && y == 1 && b[e]); break;
      case EdgeSetTag::h_omega_geq1: in = !(x <= 1 && y <= 1 && !(x == 1 && y == 1 && b[e])); break;
      case EdgeSetTag::h_geqB: in = x >= s && y >= s && !(x == s && y == s && !b[e]); break;
      case EdgeSetTag::E_s: in = x >= s && y >= s && !(x == s && y == s && b[e]); break;
      case EdgeSetTag::E_abs: {
        int ax = std::abs(x), ay = std::abs(y);
        in = ax >= s && ay >= s && !(ax == s && ay == s && b[e]);
        break;
      }
      case EdgeSetTag::nu_zero: break;
    }
    out.set(e, in);
  }
  return out;
}

EdgeConfig complement(const EdgeConfig& set) {
  EdgeConfig c(set.size());
  for (int e = 0; e < set.size(); ++e) c.set(e, !set[e]);
  return c;
}

std::string to_string(GraphSide side) { return side == GraphSide::primal ? "primal" : "dual"; }
std::string to_string(Direction d) { return d == Direction::horizontal ? "horizontal" : "vertical"; }

namespace {

template <class Neighbors>
bool search(int n, std::span<const int> sources, std::span<const int> targets, Neighbors&& neighbors) {
  std::vector<char> target(n, 0), seen(n, 0);
  for (int t : targets) target[t] = 1;
  std::deque<int> queue;
  for (int s : sources) {
    if (target[s]) return true;
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    bool found = false;
    neighbors(v, [&](int w) {
      if (found || seen[w]) return;
      if (target[w]) found = true;
      seen[w] = 1;
      queue.push_back(w);
    });
    if (found) return true;
  }
  return false;
}

}  // namespace

bool primal_connected(const FiniteGraph& g, const EdgeConfig& set, std::span<const VertexId> sources,
                      std::span<const VertexId> targets) {
  if (set.size() != g.num_edges()) throw InvalidArgument("edge set does not match the graph");
  return search(g.num_vertices(), sources, targets, [&](int v, auto&& visit) {
    for (const Incidence& inc : g.incident(v))
      if (set[inc.edge]) visit(inc.neighbor);
  });
}

bool dual_connected(const LatticePatch& patch, const EdgeConfig& set, std::span<const FaceId> sources,
                    std::span<const FaceId> targets) {
  if (patch.torus) throw Unsupported("dual connections are not defined on tori");
  if (set.size() != patch.num_edges()) throw InvalidArgument("edge set does not match the patch");
  const FiniteGraph& dual = patch.dual;
  return search(dual.num_vertices(), sources, targets, [&](int f, auto&& visit) {
    for (const Incidence& inc : dual.incident(f))
      if (set[patch.primal_edge(inc.edge)]) visit(inc.neighbor);
  });
}

bool crossing(const Quad& quad, const EdgeConfig& set, Direction direction, GraphSide side) {
  if (!quad.patch) throw InvalidArgument("quad without a patch");
  Side from = direction == Direction::horizontal ? Side::left : Side::bottom;
  Side to = direction == Direction::horizontal ? Side::right : Side::top;
  if (side == GraphSide::primal) return primal_connected(quad.patch->graph, set, quad.side(from), quad.side(to));
  return dual_connected(*quad.patch, set, quad.dual_side(from), quad.dual_side(to));
}

bool circuit(const LatticePatch& annulus, const EdgeConfig& set, GraphSide side) {
  if (annulus.inner_vertices.empty()) throw InvalidArgument("circuit queries need an annulus patch");
  if (set.size() != annulus.num_edges()) throw InvalidArgument("edge set does not match the patch");
  EdgeConfig rest = complement(set);
  if (side == GraphSide::primal) return !dual_connected(annulus, rest, annulus.inner_faces, annulus.loop_faces);
  return !primal_connected(annulus.graph, rest, annulus.inner_vertices, annulus.boundary);
}

}  // namespace lipschitz
