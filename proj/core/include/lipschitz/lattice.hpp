#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lipschitz/graph.hpp"

namespace lipschitz {

using FaceId = std::int32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

enum class LatticeFamily { honeycomb, square, triangular, square_octagon, kagome, rhombille };

// dotted: every edge subdivided by a midpoint vertex.
// wye: every triangle of the base triangulation replaced by a star.
enum class Decoration { none, dotted, wye };

struct LatticeKind {
  LatticeFamily family = LatticeFamily::honeycomb;
  Decoration decoration = Decoration::none;

  std::string name() const;
  static LatticeKind parse(std::string_view name);
  bool square_family() const {
    return family == LatticeFamily::square || family == LatticeFamily::square_octagon;
  }
  friend bool operator==(const LatticeKind&, const LatticeKind&) = default;
};

inline constexpr LatticeKind kHoneycomb{LatticeFamily::honeycomb, Decoration::none};
inline constexpr LatticeKind kSquare{LatticeFamily::square, Decoration::none};

// Regions are sets of lattice faces selected by the position of the face
// midpoint (closed shapes); the patch is the set of vertices all of whose
// incident faces are selected.
//
// Lozenge(n): midpoints center + s*a1 + t*a2 with |s|,|t| <= n.
// Rectangle(n, m): |x - cx| <= n*|a1|, |y - cy| <= m*(vertical period).
struct Lozenge {
  int n = 1;
  Point center{};
};
struct Rectangle {
  int n = 1;
  int m = 1;
  Point center{};
};
using SimpleRegion = std::variant<Lozenge, Rectangle>;
struct Annulus {
  SimpleRegion inner;
  SimpleRegion outer;
};
// 2N periods in each lattice direction, opposite sides identified.
struct Torus {
  int n = 1;
};
using RegionSpec = std::variant<Lozenge, Rectangle, Annulus, Torus>;

std::string to_string(const RegionSpec& region);
std::string to_string(const SimpleRegion& region);
// Accepts L(n), L(n;cx,cy), R(n,m), R(n,m;cx,cy), A(<simple>,<simple>), T(N).
RegionSpec parse_region(std::string_view text);

enum class Axis { horizontal, vertical, diagonal, antidiagonal };
std::string to_string(Axis axis);
Axis parse_axis(std::string_view text);

// An edge of the infinite lattice leaving the patch: from `inner` (in D) to
// a vertex outside. Its dual edge joins the two faces `right` -> `left`,
// which are consecutive on the bounding dual loop.
struct BoundaryCrossing {
  VertexId inner;
  Point outer;
  FaceId right;
  FaceId left;
};

struct LatticePatch {
  LatticeKind kind;
  RegionSpec region;
  FiniteGraph graph;
  std::vector<Point> positions;
  // 1 on original vertices and 0 on inserted ones for decorated kinds; empty otherwise.
  std::vector<int> parity;

  // ∂D: vertices of D with a lattice edge leaving D. Sorted.
  std::vector<VertexId> boundary;
  std::vector<char> on_boundary;

  // Dual: one dual vertex per face touching D. Dual edge e crosses primal
  // edge e; it is stored as (left face, right face) of the primal edge
  // oriented u -> v.
  std::vector<Point> face_centers;
  FiniteGraph dual;
  // Bounding dual loop in counterclockwise order; crossing k goes from
  // loop_faces[k] to loop_faces[k + 1].
  std::vector<FaceId> loop_faces;
  std::vector<BoundaryCrossing> loop_crossings;
  std::vector<char> face_on_loop;

  Point period1;
  Point period2;
  Point vertical_period;
  // Corner points of the region shape (bl, br, tr, tl); unused on tori.
  std::array<Point, 4> corner_points{};
  bool torus = false;

  // Annulus data, empty otherwise: faces (dual ids) selected by the inner
  // region, and the vertices of the inner patch.
  std::vector<FaceId> inner_faces;
  std::vector<VertexId> inner_vertices;

  std::vector<Axis> axes;
  std::vector<std::vector<VertexId>> axis_maps;

  int num_vertices() const { return graph.num_vertices(); }
  int num_edges() const { return graph.num_edges(); }
  int num_faces() const { return static_cast<int>(face_centers.size()); }

  EdgeId dual_edge(EdgeId e) const { return e; }
  EdgeId primal_edge(EdgeId dual_e) const { return dual_e; }

  // Vertex whose position is within tol of p, or -1.
  VertexId vertex_at(Point p, double tol = 1e-6) const;
  FaceId face_at(Point p, double tol = 1e-6) const;
  // Vertex of D closest to the region centre (lowest id on ties).
  VertexId center_vertex() const;
  // Loop faces nearest to the four region corners: bl, br, tr, tl.
  std::array<FaceId, 4> corner_faces() const;
  bool has_axis(Axis axis) const;
};

LatticePatch build_patch(LatticeKind kind, const RegionSpec& region);

// Involutive automorphism of the patch for a declared axis.
std::vector<VertexId> reflect(const LatticePatch& patch, Axis axis);

// For a sub-patch built with the same lattice kind and a region contained in
// the host region: host vertex id for every sub-patch vertex.
std::vector<VertexId> embed_vertices(const LatticePatch& sub, const LatticePatch& host);
// Host edge id for every sub-patch edge.
std::vector<EdgeId> embed_edges(const LatticePatch& sub, const LatticePatch& host);

}  // namespace lipschitz
