#include <doctest.h>

#include <functional>

#include "helpers.hpp"
#include "lipschitz/coupling.hpp"
#include "lipschitz/errors.hpp"
#include "lipschitz/event_dsl.hpp"
#include "lipschitz/percolation.hpp"
#include "lipschitz/random.hpp"

using namespace lipschitz;
using testing::hf;
using testing::path;

namespace {

bool in_set(const FiniteGraph& g, const HeightField& h, int b, const char* kind) {
  EdgeConfig bb(1, b != 0);
  return edge_set(g, h, bb, omega_from(g, h, bb), EdgeSetKind::parse(kind))[0];
}

// Even-odd rule; points never lie on the polygon in the cases used here.
bool inside(const std::vector<Point>& poly, Point p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point &a = poly[i], &b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

// Reference circuit search: enumerate the simple cycles of the subgraph of `g`
// on the edges in `set` and accept the first whose polygon contains every
// point of `must_in` and none of `must_out`.
bool cycle_search(const FiniteGraph& g, const std::vector<Point>& pos, const EdgeConfig& set,
                  const std::vector<Point>& must_in, const std::vector<Point>& must_out) {
  const int n = g.num_vertices();
  std::vector<char> on_path(n, 0);
  std::vector<VertexId> stack;
  auto accept = [&] {
    std::vector<Point> poly;
    for (VertexId v : stack) poly.push_back(pos[v]);
    for (Point p : must_in)
      if (!inside(poly, p)) return false;
    for (Point p : must_out)
      if (inside(poly, p)) return false;
    return true;
  };
  std::function<bool(VertexId, VertexId, EdgeId)> dfs = [&](VertexId s, VertexId v, EdgeId via) {
    for (const Incidence& inc : g.incident(v)) {
      if (!set[inc.edge] || inc.edge == via) continue;
      VertexId w = inc.neighbor;
      if (w == s && stack.size() >= 3 && accept()) return true;
      if (w <= s || on_path[w]) continue;
      on_path[w] = 1;
      stack.push_back(w);
      if (dfs(s, w, inc.edge)) return true;
      stack.pop_back();
      on_path[w] = 0;
    }
    return false;
  };
  for (VertexId s = 0; s < n; ++s) {
    stack = {s};
    on_path.assign(n, 0);
    on_path[s] = 1;
    if (dfs(s, s, -1)) return true;
  }
  return false;
}

bool primal_reference(const LatticePatch& a, const EdgeConfig& set) {
  std::vector<Point> in;
  for (FaceId f : a.inner_faces) in.push_back(a.face_centers[f]);
  return cycle_search(a.graph, a.positions, set, in, {});
}

bool dual_reference(const LatticePatch& a, const EdgeConfig& set) {
  std::vector<Point> in, out;
  for (VertexId v : a.inner_vertices) in.push_back(a.positions[v]);
  for (VertexId v : a.boundary) out.push_back(a.positions[v]);
  return cycle_search(a.dual, a.face_centers, set, in, out);
}

EdgeConfig random_set(int m, double density, Rng& rng) {
  EdgeConfig s(m);
  for (int e = 0; e < m; ++e) s.set(e, uniform01(rng) < density);
  return s;
}

}  // namespace

TEST_SUITE("percolation") {
  TEST_CASE("edge set membership") {
    FiniteGraph e = path(2);
    CHECK(in_set(e, hf({1, 1}), 0, "hw<=0"));
    CHECK_FALSE(in_set(e, hf({1, 1}), 0, "hw>=1"));
    CHECK(in_set(e, hf({1, 1}), 1, "hw>=1"));
    CHECK(in_set(e, hf({5, 5}), 0, "E5"));
    CHECK_FALSE(in_set(e, hf({5, 5}), 0, "h>=B5"));
    CHECK(in_set(e, hf({5, 5}), 1, "h>=B5"));
    CHECK_FALSE(in_set(e, hf({5, 5}), 1, "E5"));
    CHECK(in_set(e, hf({5, 7}), 1, "E5"));
    CHECK_FALSE(in_set(e, hf({3, 5}), 0, "E5"));
    for (int b : {0, 1}) CHECK(in_set(e, hf({-1, 1}), b, "hw<=0"));
    CHECK(in_set(e, hf({-5, -7}), 1, "Eabs5"));
    CHECK(in_set(e, hf({1, 3}), 0, "omega"));
    CHECK(in_set(e, hf({1, -1}), 1, "closed"));
    CHECK(in_set(e, hf({1, -1}), 1, "nu0@3"));
    CHECK_FALSE(in_set(e, hf({1, 1}), 1, "nu0@3"));
    CHECK_THROWS_AS(EdgeSetKind::parse("E4"), InvalidArgument);
    CHECK_THROWS_AS(EdgeSetKind::parse("bogus"), InvalidArgument);
    for (const char* k : {"omega", "closed", "hw<=0", "hw>=1", "h>=B3", "E5", "Eabs5", "nu0@3"})
      CHECK(EdgeSetKind::parse(k).name() == k);
  }

  TEST_CASE("hw<=0 and hw>=1 are complementary") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    Rng rng = make_stream(11, 0);
    for (int t = 0; t < 50; ++t) {
      HeightField h(p.num_vertices(), 1);
      for (int i = 0; i < 40; ++i) {
        VertexId x = static_cast<VertexId>(uniform_below(rng, p.num_vertices()));
        int k = h[x] + (fair_coin(rng) ? 2 : -2);
        h[x] = k;
        if (!validate_height(p.graph, h)) h[x] = k + (k > h[x] ? -2 : 2);
      }
      if (!validate_height(p.graph, h)) continue;
      EdgeConfig b = random_set(p.num_edges(), 0.5, rng);
      EdgeConfig w = omega_from(p.graph, h, b);
      EdgeConfig lo = edge_set(p.graph, h, b, w, EdgeSetKind::parse("hw<=0"));
      EdgeConfig hi = edge_set(p.graph, h, b, w, EdgeSetKind::parse("hw>=1"));
      CHECK(complement(lo) == hi);
    }
  }

  TEST_CASE("crossings: extremes, monotonicity and quad duality") {
    for (const char* kind : {"honeycomb", "square"}) {
      LatticePatch p = build_patch(LatticeKind::parse(kind), Lozenge{2});
      Quad q = corner_quad(p);
      const int m = p.num_edges();
      for (Direction d : {Direction::horizontal, Direction::vertical}) {
        CHECK(crossing(q, EdgeConfig(m, true), d, GraphSide::primal));
        CHECK(crossing(q, EdgeConfig(m, true), d, GraphSide::dual));
        CHECK_FALSE(crossing(q, EdgeConfig(m, false), d, GraphSide::primal));
      }
      Rng rng = make_stream(5, 0);
      for (int t = 0; t < 300; ++t) {
        EdgeConfig s = random_set(m, 0.5, rng);
        bool h = crossing(q, s, Direction::horizontal, GraphSide::primal);
        CHECK(h != crossing(q, complement(s), Direction::vertical, GraphSide::dual));
        EdgeConfig more = s;
        for (int e = 0; e < m; ++e)
          if (uniform01(rng) < 0.2) more.set(e, true);
        if (h) CHECK(crossing(q, more, Direction::horizontal, GraphSide::primal));
        if (crossing(q, s, Direction::vertical, GraphSide::dual))
          CHECK(crossing(q, more, Direction::vertical, GraphSide::dual));
      }
    }
  }

  TEST_CASE("annulus circuits: extremes") {
    LatticePatch a = build_patch(kHoneycomb, parse_region("A(L(1),L(3))"));
    const int m = a.num_edges();
    CHECK(circuit(a, EdgeConfig(m, true), GraphSide::primal));
    CHECK(circuit(a, EdgeConfig(m, true), GraphSide::dual));
    CHECK_FALSE(circuit(a, EdgeConfig(m, false), GraphSide::primal));
    CHECK_FALSE(circuit(a, EdgeConfig(m, false), GraphSide::dual));
    CHECK_THROWS_AS(circuit(build_patch(kHoneycomb, Lozenge{2}), EdgeConfig(56, true), GraphSide::primal),
                    InvalidArgument);
    CHECK_THROWS_AS(circuit(a, EdgeConfig(3, true), GraphSide::primal), InvalidArgument);
  }

  TEST_CASE("annulus circuits agree with a direct cycle search") {
    LatticePatch tri = build_patch(LatticeKind::parse("triangular"), parse_region("A(L(1),L(2))"));
    const int m = tri.num_edges();
    REQUIRE(m <= 16);
    int primal_hits = 0, dual_hits = 0;
    for (long mask = 0; mask < (1L << m); ++mask) {
      EdgeConfig s(m);
      for (int e = 0; e < m; ++e) s.set(e, (mask >> e) & 1);
      bool p = circuit(tri, s, GraphSide::primal);
      bool d = circuit(tri, s, GraphSide::dual);
      REQUIRE(p == primal_reference(tri, s));
      REQUIRE(d == dual_reference(tri, s));
      primal_hits += p;
      dual_hits += d;
    }
    CHECK(primal_hits > 0);
    CHECK(dual_hits > 0);

    for (const char* kind : {"honeycomb", "square"}) {
      CAPTURE(kind);
      LatticePatch a = build_patch(LatticeKind::parse(kind), parse_region("A(L(1),L(2))"));
      Rng rng = make_stream(9, 0);
      int hits[2] = {0, 0};
      for (int t = 0; t < 600; ++t) {
        EdgeConfig s = random_set(a.num_edges(), t % 2 ? 0.85 : 0.6, rng);
        bool p = circuit(a, s, GraphSide::primal);
        bool d = circuit(a, s, GraphSide::dual);
        REQUIRE(p == primal_reference(a, s));
        REQUIRE(d == dual_reference(a, s));
        hits[0] += p;
        hits[1] += d;
      }
      CHECK(hits[0] > 0);
      CHECK(hits[1] > 0);
    }
  }

  TEST_CASE("event DSL") {
    EventSpec c = parse_event("circuit(dual, E5, L(2), L(6))");
    CHECK(c.type == EventSpec::Type::circuit);
    CHECK(c.side == GraphSide::dual);
    CHECK(c.set == EdgeSetKind::parse("E5"));
    CHECK(parse_event(c.to_string()).to_string() == c.to_string());
    EventSpec x = parse_event("cross(primal, omega, R(10,1), vertical)");
    CHECK(x.type == EventSpec::Type::cross);
    CHECK(x.direction == Direction::vertical);
    CHECK(parse_event(x.to_string()).to_string() == x.to_string());
    for (const char* bad : {"cross(primal, omega, L(2))", "circuit(primal, omega, L(2), T(3))", "cross(sideways, omega, L(2), vertical)",
                            "cross(primal, nope, L(2), vertical)", "ring(primal, omega, L(2), L(3))", "cross(primal, omega, L(2), vertical"})
      CHECK_THROWS_AS(parse_event(bad), InvalidArgument);
  }

  TEST_CASE("bound events evaluate on the host patch") {
    LatticePatch host = build_patch(kHoneycomb, Lozenge{3});
    EventSpec spec = parse_event("circuit(primal, omega, L(1), L(2))");
    BoundEvent ev(spec, host);
    HeightField flat(host.num_vertices(), 1);
    HeightField high(host.num_vertices(), 3);
    EdgeConfig none(host.num_edges(), false);
    CHECK_FALSE(ev.holds(flat, none, omega_from(host.graph, flat, none)));
    CHECK(ev.holds(high, none, omega_from(host.graph, high, none)));
  }
}
