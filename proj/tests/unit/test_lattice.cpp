#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/isomorphism.hpp>

#include "helpers.hpp"
#include "lipschitz/errors.hpp"
#include "lipschitz/lattice.hpp"
#include "lipschitz/quad.hpp"
#include "lipschitz/textio.hpp"
#include "lipschitz/transforms.hpp"

using namespace lipschitz;
using testing::cycle;
using testing::path;

namespace {

using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;

BoostGraph to_boost(const FiniteGraph& g) {
  BoostGraph b(g.num_vertices());
  for (const Edge& e : g.edges()) boost::add_edge(e.u, e.v, b);
  return b;
}

bool isomorphic(const FiniteGraph& a, const FiniteGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  BoostGraph x = to_boost(a), y = to_boost(b);
  return boost::isomorphism(x, y);
}

std::multiset<std::pair<int, int>> edge_multiset(const FiniteGraph& g, const std::vector<VertexId>& tau) {
  std::multiset<std::pair<int, int>> s;
  for (const Edge& e : g.edges()) {
    int u = tau.empty() ? e.u : tau[e.u], v = tau.empty() ? e.v : tau[e.v];
    s.insert({std::min(u, v), std::max(u, v)});
  }
  return s;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("honeycomb rectangle R(n,m) is 2n+1 hexagons wide and 4m+1 rows tall") {
    for (auto [n, m] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}}) {
      LatticePatch p = build_patch(kHoneycomb, Rectangle{n, m});
      std::map<long, int> rows;
      for (FaceId f = 0; f < p.num_faces(); ++f) rows[std::lround(p.face_centers[f].y * 1e6)]++;
      CHECK(static_cast<int>(rows.size()) == 4 * m + 1);
      int widest = 0;
      for (auto [y, count] : rows) widest = std::max(widest, count);
      CHECK(widest == 2 * n + 1);
    }
  }

  TEST_CASE("honeycomb L(2) is bounded by a 4-by-4 dual lozenge walk") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{2});
    CHECK(p.loop_faces.size() == 16);
    CHECK(p.loop_crossings.size() == 16);
    CHECK(p.graph.is_connected());
  }

  TEST_CASE("square torus T(2) is 4-periodic with degree 4") {
    LatticePatch t = build_patch(kSquare, Torus{2});
    CHECK(t.num_vertices() == 16);
    for (VertexId v = 0; v < t.num_vertices(); ++v) CHECK(t.graph.degree(v) == 4);
    CHECK(t.torus);
  }

  TEST_CASE("boundary vertices lie on the outer face and every patch is connected") {
    for (const char* kind : {"honeycomb", "square", "triangular", "square-octagon", "kagome", "rhombille"}) {
      CAPTURE(kind);
      LatticePatch p = build_patch(LatticeKind::parse(kind), Lozenge{2});
      CHECK(p.graph.is_connected());
      REQUIRE_FALSE(p.boundary.empty());
      std::set<VertexId> on_loop;
      for (const BoundaryCrossing& bc : p.loop_crossings) on_loop.insert(bc.inner);
      for (VertexId v : p.boundary) CHECK(on_loop.count(v) == 1);
    }
  }

  TEST_CASE("dual edges pair up with primal edges") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{2});
    CHECK(p.dual.num_edges() == p.num_edges());
    for (EdgeId e = 0; e < p.num_edges(); ++e) CHECK(p.primal_edge(p.dual_edge(e)) == e);
  }

  TEST_CASE("build_patch is deterministic") {
    for (const char* kind : {"honeycomb", "kagome", "dotted-honeycomb"}) {
      std::ostringstream a, b;
      write_patch(a, build_patch(LatticeKind::parse(kind), Lozenge{2}));
      write_patch(b, build_patch(LatticeKind::parse(kind), Lozenge{2}));
      CHECK(a.str() == b.str());
    }
  }

  TEST_CASE("unsupported regions are rejected") {
    CHECK_THROWS_AS(build_patch(kHoneycomb, Lozenge{0}), Error);
    CHECK_THROWS_AS(parse_region("Q(3)"), InvalidArgument);
    CHECK_THROWS_AS(build_patch(kHoneycomb, Annulus{Lozenge{3}, Lozenge{2}}), InvalidArgument);
  }

  TEST_CASE("graph distance") {
    FiniteGraph hex = cycle(6);
    CHECK(graph_distance(hex, 0, 1) == 1);
    CHECK(graph_distance(hex, 0, 3) == 3);
    CHECK(graph_distance(hex, 2, 2) == 0);
    CHECK(graph_distance(hex, 4, 1) == graph_distance(hex, 1, 4));
    FiniteGraph two(2, {});
    CHECK_THROWS_AS(graph_distance(two, 0, 1), InvalidArgument);
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    const Edge& e = p.graph.edge(0);
    CHECK(graph_distance(p.graph, e.u, e.v) == 1);
  }

  TEST_CASE("dotting") {
    BipartiteTransform tri = dot_transform(cycle(3));
    CHECK(isomorphic(tri.graph, cycle(6)));
    BipartiteTransform p2 = dot_transform(path(3));
    CHECK(isomorphic(p2.graph, path(5)));
    BipartiteTransform one = dot_transform(path(2));
    CHECK(isomorphic(one.graph, path(3)));
    CHECK(one.parity == std::vector<int>{1, 1, 0});
    // |V'| = |V| + |E| and |E'| = 2|E|; odd vertices at distance two are the old neighbours.
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    BipartiteTransform d = dot_transform(p.graph);
    CHECK(d.graph.num_vertices() == p.num_vertices() + p.num_edges());
    CHECK(d.graph.num_edges() == 2 * p.num_edges());
    CHECK(two_coloring(d.graph).has_value());
    for (const Edge& e : p.graph.edges()) CHECK(graph_distance(d.graph, e.u, e.v) == 2);
    CHECK(d.restrict(std::vector<int>(d.graph.num_vertices(), 7)).size() == static_cast<std::size_t>(p.num_vertices()));
  }

  TEST_CASE("star-triangle transform") {
    FiniteGraph tri = cycle(3);
    BipartiteTransform star = star_triangle_transform(tri, find_triangles(tri));
    FiniteGraph k13(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(isomorphic(star.graph, k13));
    CHECK(star.parity == std::vector<int>{1, 1, 1, 0});
    CHECK_THROWS_AS(star_triangle_transform(tri, {}), InvalidArgument);
    CHECK_THROWS_AS(star_triangle_transform(path(3), {Triangle{0, 1, 0}}), InvalidArgument);
  }

  TEST_CASE("star-triangle of kagome is dotted honeycomb, of triangular is honeycomb") {
    for (int n : {1, 2}) {
      LatticePatch kag = build_patch(LatticeKind::parse("kagome"), Torus{n});
      auto cover = triangle_cover(kag.graph);
      REQUIRE(cover.has_value());
      BipartiteTransform t = star_triangle_transform(kag.graph, *cover);
      CHECK(isomorphic(t.graph, build_patch(LatticeKind::parse("dotted-honeycomb"), Torus{n}).graph));
      auto colours = two_coloring(t.graph);
      REQUIRE(colours.has_value());
      for (VertexId v = t.original_vertices; v < t.graph.num_vertices(); ++v) CHECK(t.graph.degree(v) == 3);
    }
    for (int n : {2, 3}) {
      LatticePatch tri = build_patch(LatticeKind::parse("triangular"), Torus{n});
      auto cover = triangle_cover(tri.graph);
      REQUIRE(cover.has_value());
      BipartiteTransform t = star_triangle_transform(tri.graph, *cover);
      CHECK(isomorphic(t.graph, build_patch(kHoneycomb, Torus{n}).graph));
    }
  }

  TEST_CASE("quads") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    Quad q = corner_quad(p);
    for (Side s : {Side::left, Side::bottom, Side::right, Side::top}) {
      CHECK_FALSE(q.side(s).empty());
      CHECK_FALSE(q.dual_side(s).empty());
    }
    auto c = p.corner_faces();
    CHECK_THROWS_AS(make_quad(p, {c[0], c[0], c[2], c[3]}), InvalidArgument);
    CHECK_THROWS_AS(make_quad(p, {c[3], c[2], c[1], c[0]}), InvalidArgument);
    FaceId off_loop = -1;
    for (FaceId f = 0; f < p.num_faces(); ++f)
      if (!p.face_on_loop[f]) off_loop = f;
    if (off_loop >= 0) CHECK_THROWS_AS(make_quad(p, {off_loop, c[1], c[2], c[3]}), InvalidArgument);
  }

  TEST_CASE("reflections are involutive automorphisms preserving the boundary") {
    for (const char* kind : {"honeycomb", "square", "triangular", "kagome"}) {
      for (RegionSpec r : {RegionSpec{Lozenge{2}}, RegionSpec{Rectangle{2, 1}}}) {
        LatticePatch p = build_patch(LatticeKind::parse(kind), r);
        for (Axis a : p.axes) {
          CAPTURE(kind);
          CAPTURE(to_string(a));
          std::vector<VertexId> tau = reflect(p, a);
          for (VertexId v = 0; v < p.num_vertices(); ++v) CHECK(tau[tau[v]] == v);
          CHECK(edge_multiset(p.graph, tau) == edge_multiset(p.graph, {}));
          for (VertexId v : p.boundary) CHECK(p.on_boundary[tau[v]]);
        }
      }
    }
    LatticePatch hex = build_patch(kHoneycomb, Lozenge{2});
    CHECK_FALSE(hex.axes.empty());
  }

  TEST_CASE("square rectangle: the horizontal reflection mirrors rows") {
    LatticePatch p = build_patch(kSquare, Rectangle{2, 2});
    REQUIRE(p.has_axis(Axis::horizontal));
    std::vector<VertexId> tau = reflect(p, Axis::horizontal);
    double cy = 0;
    for (const Point& x : p.positions) cy += x.y;
    cy /= p.num_vertices();
    for (VertexId v = 0; v < p.num_vertices(); ++v) {
      CHECK(p.positions[tau[v]].x == doctest::Approx(p.positions[v].x));
      CHECK(p.positions[tau[v]].y == doctest::Approx(2 * cy - p.positions[v].y));
    }
    CHECK_THROWS_AS(reflect(build_patch(kSquare, Torus{2}), Axis::horizontal), Error);
  }
}
