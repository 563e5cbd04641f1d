#include "lipschitz/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "lipschitz/errors.hpp"

namespace lipschitz {

namespace {

constexpr double kEps = 1e-7;
constexpr int kMargin = 4;

Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
double norm(Point a) { return std::hypot(a.x, a.y); }

struct CellVertex {
  Point offset;
  int parity;
};
// Joins vertex s of cell (i, j) to vertex t of cell (i + di, j + dj).
struct CellEdge {
  int s, t, di, dj;
};
struct CellCorner {
  int s, di, dj;
};
struct UnitCell {
  Point a1, a2, vertical;
  std::vector<CellVertex> vertices;
  std::vector<CellEdge> edges;
  std::vector<std::array<CellCorner, 3>> triangles;
  bool decorated = false;

  Point cell_origin(int i, int j) const { return double(i) * a1 + double(j) * a2; }
  Point position(int i, int j, int s) const { return cell_origin(i, j) + vertices[s].offset; }
  // Coordinates of p in the (a1, a2) basis.
  Point lattice_coords(Point p) const {
    double det = a1.x * a2.y - a1.y * a2.x;
    return {(p.x * a2.y - p.y * a2.x) / det, (a1.x * p.y - a1.y * p.x) / det};
  }
};

UnitCell base_cell(LatticeFamily family) {
  const double r3 = std::sqrt(3.0);
  UnitCell c;
  switch (family) {
    case LatticeFamily::honeycomb:
      // Pointy-top hexagons of side 1/3 centred on the lattice points.
      c.a1 = {1.0 / r3, 0.0};
      c.a2 = {1.0 / (2.0 * r3), 0.5};
      c.vertical = {0.0, 1.0};
      c.vertices = {{{0.0, 1.0 / 3.0}, 1}, {{0.0, -1.0 / 3.0}, 1}};
      c.edges = {{0, 1, 0, 1}, {0, 1, -1, 1}, {0, 1, -1, 2}};
      break;
    case LatticeFamily::square:
      c.a1 = {1.0, 0.0};
      c.a2 = {0.0, 1.0};
      c.vertical = c.a2;
      c.vertices = {{{0.5, 0.5}, 1}};
      c.edges = {{0, 0, 1, 0}, {0, 0, 0, 1}};
      break;
    case LatticeFamily::triangular:
      c.a1 = {1.0, 0.0};
      c.a2 = {0.5, r3 / 2.0};
      c.vertical = {0.0, r3};
      c.vertices = {{{-0.5, -r3 / 6.0}, 1}};
      c.edges = {{0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, -1, 1}};
      c.triangles = {{{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
      break;
    case LatticeFamily::square_octagon: {
      // Octagons on the integer points, tilted squares on the half-integer ones.
      const double d = 1.0 / (2.0 + std::sqrt(2.0));
      c.a1 = {1.0, 0.0};
      c.a2 = {0.0, 1.0};
      c.vertical = c.a2;
      c.vertices = {{{0.5 + d, 0.5}, 1}, {{0.5, 0.5 + d}, 1}, {{0.5 - d, 0.5}, 1}, {{0.5, 0.5 - d}, 1}};
      c.edges = {{0, 1, 0, 0}, {1, 2, 0, 0}, {2, 3, 0, 0}, {3, 0, 0, 0}, {0, 2, 1, 0}, {1, 3, 0, 1}};
      break;
    }
    case LatticeFamily::kagome:
      // Midpoints of the triangular lattice edges; hexagons on its vertices.
      c.a1 = {1.0, 0.0};
      c.a2 = {0.5, r3 / 2.0};
      c.vertical = {0.0, r3};
      c.vertices = {{{0.5, 0.0}, 1}, {{0.25, r3 / 4.0}, 1}, {{0.75, r3 / 4.0}, 1}};
      c.edges = {{0, 1, 0, 0}, {1, 2, 0, 0}, {2, 0, 0, 0}, {2, 1, 1, 0}, {1, 0, -1, 1}, {2, 0, 0, 1}};
      c.triangles = {{{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}}, {{{2, 0, 0}, {1, 1, 0}, {0, 0, 1}}}};
      break;
    case LatticeFamily::rhombille: {
      // Degree-6 vertices on the triangular lattice, degree-3 vertices at the
      // triangle centroids; shifted so that a rhombus is centred at the origin.
      c.a1 = {1.0, 0.0};
      c.a2 = {0.5, r3 / 2.0};
      c.vertical = {0.0, r3};
      Point shift{-0.5, 0.0};
      Point up = (1.0 / 3.0) * (c.a1 + c.a2);
      c.vertices = {{shift, 1}, {up + shift, 1}, {2.0 * up + shift, 1}};
      c.edges = {{1, 0, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}, {2, 0, 1, 0}, {2, 0, 0, 1}, {2, 0, 1, 1}};
      break;
    }
  }
  return c;
}

UnitCell dotted_cell(const UnitCell& base) {
  UnitCell c = base;
  c.decorated = true;
  c.edges.clear();
  c.triangles.clear();
  for (const CellEdge& e : base.edges) {
    Point a = base.position(0, 0, e.s);
    Point b = base.position(e.di, e.dj, e.t);
    int mid = static_cast<int>(c.vertices.size());
    c.vertices.push_back({0.5 * (a + b), 0});
    c.edges.push_back({e.s, mid, 0, 0});
    c.edges.push_back({mid, e.t, e.di, e.dj});
  }
  return c;
}

UnitCell wye_cell(const UnitCell& base, std::string_view name) {
  if (base.triangles.empty())
    throw Unsupported("lattice '" + std::string(name) + "' has no triangle cover for the star-triangle transform");
  // Every edge class must be a side of exactly one triangle class.
  std::vector<int> covered(base.edges.size(), 0);
  for (const auto& tri : base.triangles) {
    for (int k = 0; k < 3; ++k) {
      const CellCorner& p = tri[k];
      const CellCorner& q = tri[(k + 1) % 3];
      bool found = false;
      for (std::size_t e = 0; e < base.edges.size(); ++e) {
        const CellEdge& ed = base.edges[e];
        bool fwd = ed.s == p.s && ed.t == q.s && ed.di == q.di - p.di && ed.dj == q.dj - p.dj;
        bool bwd = ed.s == q.s && ed.t == p.s && ed.di == p.di - q.di && ed.dj == p.dj - q.dj;
        if (fwd || bwd) {
          ++covered[e];
          found = true;
          break;
        }
      }
      if (!found) throw InvalidArgument("triangle side is not a lattice edge");
    }
  }
  for (int k : covered)
    if (k != 1) throw InvalidArgument("triangle cover does not cover every edge exactly once");
  UnitCell c = base;
  c.decorated = true;
  c.edges.clear();
  c.triangles.clear();
  for (const auto& tri : base.triangles) {
    Point centroid{};
    for (const CellCorner& q : tri) centroid = centroid + (1.0 / 3.0) * base.position(q.di, q.dj, q.s);
    int center = static_cast<int>(c.vertices.size());
    c.vertices.push_back({centroid, 0});
    for (const CellCorner& q : tri) c.edges.push_back({center, q.s, q.di, q.dj});
  }
  return c;
}

UnitCell make_cell(LatticeKind kind) {
  UnitCell base = base_cell(kind.family);
  switch (kind.decoration) {
    case Decoration::none: return base;
    case Decoration::dotted: return dotted_cell(base);
    case Decoration::wye: return wye_cell(base, kind.name());
  }
  return base;
}

// A rectangular block of cells of the infinite lattice with its planar
// rotation system and traced faces. Faces that pass through a vertex missing
// some of its lattice edges are marked invalid.
struct Chunk {
  int i0 = 0, j0 = 0, width = 0, height = 0, per_cell = 0;
  std::vector<Point> pos;
  std::vector<Edge> edges;
  std::vector<char> complete;
  std::vector<std::vector<int>> rotation;  // outgoing half-edges, counterclockwise
  std::vector<int> rotation_index;
  std::vector<int> face_of;  // left face of each half-edge
  std::vector<char> face_valid;
  std::vector<Point> face_center;

  int id(int i, int j, int s) const {
    if (i < i0 || i >= i0 + width || j < j0 || j >= j0 + height) return -1;
    return ((j - j0) * width + (i - i0)) * per_cell + s;
  }
  int tail(int h) const { return h % 2 == 0 ? edges[h / 2].u : edges[h / 2].v; }
  int head(int h) const { return h % 2 == 0 ? edges[h / 2].v : edges[h / 2].u; }
  int num_vertices() const { return static_cast<int>(pos.size()); }
};

Chunk make_chunk(const UnitCell& cell, int i0, int i1, int j0, int j1) {
  Chunk ch;
  ch.i0 = i0;
  ch.j0 = j0;
  ch.width = i1 - i0 + 1;
  ch.height = j1 - j0 + 1;
  ch.per_cell = static_cast<int>(cell.vertices.size());
  const int n = ch.width * ch.height * ch.per_cell;
  ch.pos.resize(n);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      for (int s = 0; s < ch.per_cell; ++s) ch.pos[ch.id(i, j, s)] = cell.position(i, j, s);

  std::vector<int> expected(ch.per_cell, 0);
  for (const CellEdge& e : cell.edges) {
    ++expected[e.s];
    ++expected[e.t];
  }
  std::vector<int> degree(n, 0);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      for (const CellEdge& e : cell.edges) {
        int a = ch.id(i, j, e.s);
        int b = ch.id(i + e.di, j + e.dj, e.t);
        if (b < 0) continue;
        ch.edges.push_back({a, b});
        ++degree[a];
        ++degree[b];
      }
  ch.complete.resize(n);
  for (int v = 0; v < n; ++v) ch.complete[v] = degree[v] == expected[v % ch.per_cell];

  const int halves = 2 * static_cast<int>(ch.edges.size());
  ch.rotation.assign(n, {});
  for (int h = 0; h < halves; ++h) ch.rotation[ch.tail(h)].push_back(h);
  ch.rotation_index.assign(halves, -1);
  for (int v = 0; v < n; ++v) {
    auto angle = [&](int h) {
      Point d = ch.pos[ch.head(h)] - ch.pos[v];
      return std::atan2(d.y, d.x);
    };
    auto& rot = ch.rotation[v];
    std::sort(rot.begin(), rot.end(), [&](int a, int b) { return angle(a) < angle(b); });
    for (std::size_t k = 0; k < rot.size(); ++k) ch.rotation_index[rot[k]] = static_cast<int>(k);
  }

  ch.face_of.assign(halves, -1);
  for (int start = 0; start < halves; ++start) {
    if (ch.face_of[start] != -1) continue;
    const int face = static_cast<int>(ch.face_valid.size());
    bool valid = true;
    Point sum{};
    int count = 0;
    int cur = start;
    do {
      ch.face_of[cur] = face;
      int v = ch.tail(cur);
      valid = valid && ch.complete[v];
      sum = sum + ch.pos[v];
      ++count;
      // Turn to the next edge clockwise from the reverse half-edge: keeps
      // the face on the left.
      int b = ch.head(cur);
      const auto& rot = ch.rotation[b];
      int r = ch.rotation_index[cur ^ 1];
      cur = rot[(r + static_cast<int>(rot.size()) - 1) % rot.size()];
    } while (cur != start);
    ch.face_valid.push_back(valid);
    ch.face_center.push_back((1.0 / count) * sum);
  }
  return ch;
}

struct Shape {
  std::function<bool(Point)> contains;
  std::array<Point, 4> corners;
  Point center;
};

Shape make_shape(const UnitCell& cell, const SimpleRegion& region) {
  Shape shape;
  if (const auto* lz = std::get_if<Lozenge>(&region)) {
    if (lz->n <= 0) throw InvalidArgument("lozenge size must be positive");
    const double n = lz->n;
    const Point c = lz->center;
    shape.center = c;
    shape.contains = [&cell, n, c](Point p) {
      Point st = cell.lattice_coords(p - c);
      return std::abs(st.x) <= n + kEps && std::abs(st.y) <= n + kEps;
    };
    shape.corners = {c + (-n) * cell.a1 + (-n) * cell.a2,
                     c + n * cell.a1 + (-n) * cell.a2, c + n * cell.a1 + n * cell.a2,
                     c + (-n) * cell.a1 + n * cell.a2};
  } else {
    const auto& rc = std::get<Rectangle>(region);
    if (rc.n <= 0 || rc.m <= 0) throw InvalidArgument("rectangle sizes must be positive");
    const double w = rc.n * norm(cell.a1);
    const double h = rc.m * norm(cell.vertical);
    const Point c = rc.center;
    shape.center = c;
    shape.contains = [w, h, c](Point p) {
      return std::abs(p.x - c.x) <= w + kEps && std::abs(p.y - c.y) <= h + kEps;
    };
    shape.corners = {Point{c.x - w, c.y - h}, Point{c.x + w, c.y - h}, Point{c.x + w, c.y + h},
                     Point{c.x - w, c.y + h}};
  }
  return shape;
}

Chunk chunk_for(const UnitCell& cell, const std::array<Point, 4>& corners) {
  double smin = 1e300, smax = -1e300, tmin = 1e300, tmax = -1e300;
  for (const Point& p : corners) {
    Point st = cell.lattice_coords(p);
    smin = std::min(smin, st.x);
    smax = std::max(smax, st.x);
    tmin = std::min(tmin, st.y);
    tmax = std::max(tmax, st.y);
  }
  return make_chunk(cell, static_cast<int>(std::floor(smin)) - kMargin,
                    static_cast<int>(std::ceil(smax)) + kMargin,
                    static_cast<int>(std::floor(tmin)) - kMargin,
                    static_cast<int>(std::ceil(tmax)) + kMargin);
}

std::vector<char> select_faces(const Chunk& ch, const Shape& shape) {
  std::vector<char> in(ch.face_valid.size(), 0);
  for (std::size_t f = 0; f < in.size(); ++f)
    in[f] = ch.face_valid[f] && shape.contains(ch.face_center[f]);
  return in;
}

std::vector<char> select_vertices(const Chunk& ch, const std::vector<char>& face_in) {
  std::vector<char> in(ch.num_vertices(), 0);
  for (int v = 0; v < ch.num_vertices(); ++v) {
    if (!ch.complete[v]) continue;
    bool all = true;
    for (int h : ch.rotation[v]) all = all && face_in[ch.face_of[h]];
    in[v] = all;
  }
  return in;
}

bool row_major_less(Point a, Point b) {
  long long ay = std::llround(a.y * 1e6), by = std::llround(b.y * 1e6);
  if (ay != by) return ay < by;
  return std::llround(a.x * 1e6) < std::llround(b.x * 1e6);
}

// Linear map of the reflection for `axis` (about the origin), in Cartesian form.
std::array<double, 4> axis_matrix(const UnitCell& cell, Axis axis) {
  switch (axis) {
    case Axis::horizontal: return {1, 0, 0, -1};
    case Axis::vertical: return {-1, 0, 0, 1};
    case Axis::diagonal:
    case Axis::antidiagonal: {
      // In lattice coordinates (s, t) -> (-t, -s) or (t, s).
      double sign = axis == Axis::diagonal ? -1.0 : 1.0;
      Point ia = cell.lattice_coords({1, 0});
      Point ib = cell.lattice_coords({0, 1});
      // Image of the unit vectors.
      Point ex = sign * (ia.y * cell.a1 + ia.x * cell.a2);
      Point ey = sign * (ib.y * cell.a1 + ib.x * cell.a2);
      return {ex.x, ey.x, ex.y, ey.y};
    }
  }
  return {1, 0, 0, 1};
}

class PositionIndex {
 public:
  explicit PositionIndex(const std::vector<Point>& pts) : pts_(pts) {
    for (std::size_t k = 0; k < pts.size(); ++k) cells_[key(pts[k])].push_back(static_cast<int>(k));
  }
  int find(Point p, double tol) const {
    auto [kx, ky] = key(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find({kx + dx, ky + dy});
        if (it == cells_.end()) continue;
        for (int k : it->second)
          if (norm(pts_[k] - p) <= tol) return k;
      }
    return -1;
  }

 private:
  static std::pair<long long, long long> key(Point p) {
    return {std::llround(p.x * 1e3), std::llround(p.y * 1e3)};
  }
  const std::vector<Point>& pts_;
  std::map<std::pair<long long, long long>, std::vector<int>> cells_;
};

std::vector<VertexId> compute_axis_map(const LatticePatch& patch, const UnitCell& cell, Axis axis,
                                       Point center) {
  auto m = axis_matrix(cell, axis);
  PositionIndex index(patch.positions);
  std::vector<VertexId> map(patch.num_vertices(), -1);
  for (VertexId v = 0; v < patch.num_vertices(); ++v) {
    Point d = patch.positions[v] - center;
    Point img = center + Point{m[0] * d.x + m[1] * d.y, m[2] * d.x + m[3] * d.y};
    map[v] = index.find(img, 1e-6);
    if (map[v] < 0) return {};
  }
  std::map<std::pair<int, int>, int> edge_count;
  for (const Edge& e : patch.graph.edges()) ++edge_count[std::minmax(e.u, e.v)];
  for (const Edge& e : patch.graph.edges()) {
    auto it = edge_count.find(std::minmax(map[e.u], map[e.v]));
    if (it == edge_count.end()) return {};
  }
  for (VertexId v = 0; v < patch.num_vertices(); ++v)
    if (map[map[v]] != v) return {};
  return map;
}

LatticePatch assemble(LatticeKind kind, const UnitCell& cell, const Chunk& ch,
                      const std::vector<char>& face_in, const Shape& shape, RegionSpec region) {
  LatticePatch patch;
  patch.kind = kind;
  patch.region = std::move(region);
  patch.period1 = cell.a1;
  patch.period2 = cell.a2;
  patch.vertical_period = cell.vertical;
  patch.corner_points = shape.corners;

  std::vector<char> in_d = select_vertices(ch, face_in);
  std::vector<int> members;
  for (int v = 0; v < ch.num_vertices(); ++v)
    if (in_d[v]) members.push_back(v);
  if (members.empty()) throw InvalidArgument("region " + to_string(patch.region) + " contains no vertex");
  std::sort(members.begin(), members.end(),
            [&](int a, int b) { return row_major_less(ch.pos[a], ch.pos[b]); });
  std::vector<int> new_id(ch.num_vertices(), -1);
  for (std::size_t k = 0; k < members.size(); ++k) new_id[members[k]] = static_cast<int>(k);

  patch.positions.reserve(members.size());
  for (int v : members) {
    patch.positions.push_back(ch.pos[v]);
    if (cell.decorated) patch.parity.push_back(cell.vertices[v % ch.per_cell].parity);
  }

  // Interior edges, each with the chunk half-edge running from its lower to its higher new id.
  struct Tmp {
    int a, b, half;
  };
  std::vector<Tmp> interior;
  std::vector<int> crossing_halves;
  for (int e = 0; e < static_cast<int>(ch.edges.size()); ++e) {
    int u = ch.edges[e].u, v = ch.edges[e].v;
    if (in_d[u] && in_d[v]) {
      int a = new_id[u], b = new_id[v];
      interior.push_back({std::min(a, b), std::max(a, b), a < b ? 2 * e : 2 * e + 1});
    } else if (in_d[u] != in_d[v]) {
      crossing_halves.push_back(in_d[u] ? 2 * e : 2 * e + 1);
    }
  }
  std::sort(interior.begin(), interior.end(), [](const Tmp& x, const Tmp& y) {
    return std::tie(x.a, x.b, x.half) < std::tie(y.a, y.b, y.half);
  });
  std::vector<Edge> edges;
  for (const Tmp& t : interior) edges.push_back({t.a, t.b});
  patch.graph = FiniteGraph(static_cast<int>(members.size()), std::move(edges));
  if (!patch.graph.is_connected())
    throw Unsupported("region " + to_string(patch.region) + " yields a disconnected patch");

  // Dual vertices: faces touching D.
  std::vector<int> faces;
  std::vector<char> seen(ch.face_valid.size(), 0);
  for (int v : members)
    for (int h : ch.rotation[v]) {
      int f = ch.face_of[h];
      if (!seen[f]) {
        seen[f] = 1;
        faces.push_back(f);
      }
    }
  std::sort(faces.begin(), faces.end(),
            [&](int a, int b) { return row_major_less(ch.face_center[a], ch.face_center[b]); });
  std::vector<int> face_id(ch.face_valid.size(), -1);
  for (std::size_t k = 0; k < faces.size(); ++k) {
    face_id[faces[k]] = static_cast<int>(k);
    patch.face_centers.push_back(ch.face_center[faces[k]]);
  }
  std::vector<Edge> dual_edges;
  for (const Tmp& t : interior)
    dual_edges.push_back({face_id[ch.face_of[t.half]], face_id[ch.face_of[t.half ^ 1]]});
  patch.dual = FiniteGraph(static_cast<int>(faces.size()), std::move(dual_edges));

  // Bounding loop.
  patch.on_boundary.assign(members.size(), 0);
  std::vector<int> succ(faces.size(), -1);
  std::vector<int> step_of(faces.size(), -1);
  for (int h : crossing_halves) {
    BoundaryCrossing c{new_id[ch.tail(h)], ch.pos[ch.head(h)], face_id[ch.face_of[h ^ 1]],
                       face_id[ch.face_of[h]]};
    patch.on_boundary[c.inner] = 1;
    if (succ[c.right] != -1)
      throw Unsupported("region " + to_string(patch.region) + " has a non-simple boundary loop");
    succ[c.right] = c.left;
    step_of[c.right] = static_cast<int>(patch.loop_crossings.size());
    patch.loop_crossings.push_back(c);
  }
  std::vector<BoundaryCrossing> ordered;
  int start = -1;
  for (std::size_t f = 0; f < faces.size(); ++f)
    if (succ[f] != -1) {
      start = static_cast<int>(f);
      break;
    }
  if (start >= 0) {
    int f = start;
    do {
      patch.loop_faces.push_back(f);
      ordered.push_back(patch.loop_crossings[step_of[f]]);
      f = succ[f];
      if (f < 0) throw Unsupported("boundary loop of " + to_string(patch.region) + " is not closed");
    } while (f != start && patch.loop_faces.size() <= faces.size());
    if (f != start || ordered.size() != patch.loop_crossings.size())
      throw Unsupported("boundary loop of " + to_string(patch.region) + " is not a single cycle");
  }
  patch.loop_crossings = std::move(ordered);
  patch.face_on_loop.assign(faces.size(), 0);
  for (int f : patch.loop_faces) patch.face_on_loop[f] = 1;
  for (VertexId v = 0; v < patch.num_vertices(); ++v)
    if (patch.on_boundary[v]) patch.boundary.push_back(v);

  std::vector<Axis> candidates;
  if (std::holds_alternative<Lozenge>(patch.region)) candidates = {Axis::diagonal, Axis::antidiagonal};
  if (std::holds_alternative<Rectangle>(patch.region)) candidates = {Axis::horizontal, Axis::vertical};
  for (Axis a : candidates) {
    auto map = compute_axis_map(patch, cell, a, shape.center);
    if (map.empty()) continue;
    patch.axes.push_back(a);
    patch.axis_maps.push_back(std::move(map));
  }
  return patch;
}

LatticePatch build_torus(LatticeKind kind, const UnitCell& cell, const Torus& torus) {
  if (torus.n <= 0) throw InvalidArgument("torus size must be positive");
  const int L = 2 * torus.n;
  const int S = static_cast<int>(cell.vertices.size());
  auto id = [&](int i, int j, int s) {
    i = ((i % L) + L) % L;
    j = ((j % L) + L) % L;
    return (j * L + i) * S + s;
  };
  LatticePatch patch;
  patch.kind = kind;
  patch.region = torus;
  patch.torus = true;
  patch.period1 = cell.a1;
  patch.period2 = cell.a2;
  patch.vertical_period = cell.vertical;
  patch.positions.resize(L * L * S);
  for (int j = 0; j < L; ++j)
    for (int i = 0; i < L; ++i)
      for (int s = 0; s < S; ++s) {
        patch.positions[id(i, j, s)] = cell.position(i, j, s);
        if (cell.decorated) patch.parity.push_back(cell.vertices[s].parity);
      }
  std::vector<Edge> edges;
  for (int j = 0; j < L; ++j)
    for (int i = 0; i < L; ++i)
      for (const CellEdge& e : cell.edges) edges.push_back({id(i, j, e.s), id(i + e.di, j + e.dj, e.t)});
  patch.graph = FiniteGraph(L * L * S, std::move(edges));
  if (patch.graph.has_self_loops()) throw Unsupported("torus too small for this lattice");
  patch.on_boundary.assign(patch.num_vertices(), 0);
  return patch;
}

const char* family_name(LatticeFamily f) {
  switch (f) {
    case LatticeFamily::honeycomb: return "honeycomb";
    case LatticeFamily::square: return "square";
    case LatticeFamily::triangular: return "triangular";
    case LatticeFamily::square_octagon: return "square-octagon";
    case LatticeFamily::kagome: return "kagome";
    case LatticeFamily::rhombille: return "rhombille";
  }
  return "?";
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string center_suffix(Point c) {
  if (c.x == 0.0 && c.y == 0.0) return "";
  return ";" + format_number(c.x) + "," + format_number(c.y);
}

}  // namespace

std::string LatticeKind::name() const {
  std::string base = family_name(family);
  switch (decoration) {
    case Decoration::none: return base;
    case Decoration::dotted: return "dotted-" + base;
    case Decoration::wye: return "wye-" + base;
  }
  return base;
}

LatticeKind LatticeKind::parse(std::string_view name) {
  LatticeKind kind;
  std::string_view rest = name;
  if (rest.starts_with("dotted-")) {
    kind.decoration = Decoration::dotted;
    rest.remove_prefix(7);
  } else if (rest.starts_with("wye-")) {
    kind.decoration = Decoration::wye;
    rest.remove_prefix(4);
  }
  for (LatticeFamily f : {LatticeFamily::honeycomb, LatticeFamily::square, LatticeFamily::triangular,
                          LatticeFamily::square_octagon, LatticeFamily::kagome, LatticeFamily::rhombille}) {
    if (rest == family_name(f)) {
      kind.family = f;
      return kind;
    }
  }
  throw InvalidArgument("unknown lattice kind '" + std::string(name) + "'");
}

std::string to_string(const SimpleRegion& region) {
  if (const auto* lz = std::get_if<Lozenge>(&region))
    return "L(" + std::to_string(lz->n) + center_suffix(lz->center) + ")";
  const auto& r = std::get<Rectangle>(region);
  return "R(" + std::to_string(r.n) + "," + std::to_string(r.m) + center_suffix(r.center) + ")";
}

std::string to_string(const RegionSpec& region) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Lozenge> || std::is_same_v<T, Rectangle>) {
          return to_string(SimpleRegion(r));
        } else if constexpr (std::is_same_v<T, Annulus>) {
          return "A(" + to_string(r.inner) + "," + to_string(r.outer) + ")";
        } else {
          return "T(" + std::to_string(r.n) + ")";
        }
      },
      region);
}

namespace {

struct RegionParser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail() const {
    throw InvalidArgument("cannot parse region '" + std::string(text) + "'");
  }
  void skip() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }
  void expect(char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) fail();
    ++pos;
  }
  bool accept(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  double number() {
    skip();
    std::size_t end = pos;
    while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '.' ||
                                 text[end] == '-' || text[end] == '+' || text[end] == 'e'))
      ++end;
    if (end == pos) fail();
    double v = std::stod(std::string(text.substr(pos, end - pos)));
    pos = end;
    return v;
  }
  int integer() {
    double v = number();
    if (v != std::floor(v)) fail();
    return static_cast<int>(v);
  }
  Point center() {
    Point c{};
    if (accept(';')) {
      c.x = number();
      expect(',');
      c.y = number();
    }
    return c;
  }
  SimpleRegion simple() {
    RegionSpec r = any();
    if (auto* lz = std::get_if<Lozenge>(&r)) return *lz;
    if (auto* rc = std::get_if<Rectangle>(&r)) return *rc;
    fail();
  }
  RegionSpec any() {
    skip();
    if (pos >= text.size()) fail();
    char tag = text[pos++];
    expect('(');
    RegionSpec out;
    switch (tag) {
      case 'L': {
        Lozenge lz;
        lz.n = integer();
        lz.center = center();
        out = lz;
        break;
      }
      case 'R': {
        Rectangle rc;
        rc.n = integer();
        expect(',');
        rc.m = integer();
        rc.center = center();
        out = rc;
        break;
      }
      case 'A': {
        Annulus an;
        an.inner = simple();
        expect(',');
        an.outer = simple();
        out = an;
        break;
      }
      case 'T': out = Torus{integer()}; break;
      default: fail();
    }
    expect(')');
    return out;
  }
};

}  // namespace

RegionSpec parse_region(std::string_view text) {
  RegionParser p{text};
  RegionSpec r = p.any();
  p.skip();
  if (p.pos != text.size()) p.fail();
  return r;
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::horizontal: return "horizontal";
    case Axis::vertical: return "vertical";
    case Axis::diagonal: return "diagonal";
    case Axis::antidiagonal: return "antidiagonal";
  }
  return "?";
}

Axis parse_axis(std::string_view text) {
  for (Axis a : {Axis::horizontal, Axis::vertical, Axis::diagonal, Axis::antidiagonal})
    if (text == to_string(a)) return a;
  throw InvalidArgument("unknown axis '" + std::string(text) + "'");
}

VertexId LatticePatch::vertex_at(Point p, double tol) const {
  for (VertexId v = 0; v < num_vertices(); ++v)
    if (norm(positions[v] - p) <= tol) return v;
  return -1;
}

FaceId LatticePatch::face_at(Point p, double tol) const {
  for (FaceId f = 0; f < num_faces(); ++f)
    if (norm(face_centers[f] - p) <= tol) return f;
  return -1;
}

VertexId LatticePatch::center_vertex() const {
  Point c{};
  if (const auto* lz = std::get_if<Lozenge>(&region)) c = lz->center;
  if (const auto* rc = std::get_if<Rectangle>(&region)) c = rc->center;
  if (const auto* an = std::get_if<Annulus>(&region))
    c = std::visit([](const auto& r) { return r.center; }, an->outer);
  VertexId best = 0;
  double best_d = 1e300;
  for (VertexId v = 0; v < num_vertices(); ++v) {
    double d = norm(positions[v] - c);
    if (d < best_d - 1e-9) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

std::array<FaceId, 4> LatticePatch::corner_faces() const {
  if (torus || loop_faces.empty()) throw Unsupported("patch has no bounding loop");
  std::array<FaceId, 4> out{};
  for (int k = 0; k < 4; ++k) {
    double best = 1e300;
    for (FaceId f : loop_faces) {
      double d = norm(face_centers[f] - corner_points[k]);
      if (d < best - 1e-9) {
        best = d;
        out[k] = f;
      }
    }
  }
  return out;
}

bool LatticePatch::has_axis(Axis axis) const {
  return std::find(axes.begin(), axes.end(), axis) != axes.end();
}

LatticePatch build_patch(LatticeKind kind, const RegionSpec& region) {
  const UnitCell cell = make_cell(kind);
  if (const auto* torus = std::get_if<Torus>(&region)) return build_torus(kind, cell, *torus);
  if (const auto* an = std::get_if<Annulus>(&region)) {
    Shape outer = make_shape(cell, an->outer);
    Shape inner = make_shape(cell, an->inner);
    Chunk ch = chunk_for(cell, outer.corners);
    std::vector<char> outer_faces = select_faces(ch, outer);
    std::vector<char> inner_faces = select_faces(ch, inner);
    for (std::size_t f = 0; f < inner_faces.size(); ++f)
      if (inner_faces[f] && !outer_faces[f])
        throw InvalidArgument("annulus inner region is not inside the outer region");
    LatticePatch patch = assemble(kind, cell, ch, outer_faces, outer, region);
    std::vector<char> inner_d = select_vertices(ch, inner_faces);
    PositionIndex index(patch.positions);
    std::vector<char> face_mark(patch.num_faces(), 0);
    for (int v = 0; v < ch.num_vertices(); ++v) {
      if (!inner_d[v]) continue;
      VertexId id = index.find(ch.pos[v], 1e-6);
      if (id < 0 || patch.on_boundary[id])
        throw InvalidArgument("annulus " + to_string(region) + " is degenerate: inner region touches the boundary");
      patch.inner_vertices.push_back(id);
    }
    if (patch.inner_vertices.empty()) throw InvalidArgument("annulus inner region contains no vertex");
    std::sort(patch.inner_vertices.begin(), patch.inner_vertices.end());
    PositionIndex face_index(patch.face_centers);
    for (int v = 0; v < ch.num_vertices(); ++v) {
      if (!inner_d[v]) continue;
      for (int h : ch.rotation[v]) {
        FaceId f = face_index.find(ch.face_center[ch.face_of[h]], 1e-6);
        if (f < 0) throw InvalidArgument("annulus inner face outside the outer patch");
        face_mark[f] = 1;
      }
    }
    for (FaceId f = 0; f < patch.num_faces(); ++f)
      if (face_mark[f]) patch.inner_faces.push_back(f);
    return patch;
  }
  SimpleRegion simple = std::holds_alternative<Lozenge>(region) ? SimpleRegion(std::get<Lozenge>(region))
                                                                 : SimpleRegion(std::get<Rectangle>(region));
  Shape shape = make_shape(cell, simple);
  Chunk ch = chunk_for(cell, shape.corners);
  return assemble(kind, cell, ch, select_faces(ch, shape), shape, region);
}

std::vector<VertexId> reflect(const LatticePatch& patch, Axis axis) {
  for (std::size_t k = 0; k < patch.axes.size(); ++k)
    if (patch.axes[k] == axis) return patch.axis_maps[k];
  throw Unsupported("axis " + to_string(axis) + " is not a symmetry of " + patch.kind.name() + " " +
                    to_string(patch.region));
}

std::vector<VertexId> embed_vertices(const LatticePatch& sub, const LatticePatch& host) {
  if (!(sub.kind == host.kind)) throw InvalidArgument("embedding across lattice kinds");
  PositionIndex index(host.positions);
  std::vector<VertexId> map(sub.num_vertices());
  for (VertexId v = 0; v < sub.num_vertices(); ++v) {
    map[v] = index.find(sub.positions[v], 1e-6);
    if (map[v] < 0) throw InvalidArgument("sub-patch vertex outside the host patch");
  }
  return map;
}

std::vector<EdgeId> embed_edges(const LatticePatch& sub, const LatticePatch& host) {
  auto vmap = embed_vertices(sub, host);
  std::map<std::pair<int, int>, EdgeId> lookup;
  for (EdgeId e = 0; e < host.num_edges(); ++e) {
    const Edge& ed = host.graph.edge(e);
    lookup.emplace(std::minmax(ed.u, ed.v), e);
  }
  std::vector<EdgeId> out(sub.num_edges());
  for (EdgeId e = 0; e < sub.num_edges(); ++e) {
    const Edge& ed = sub.graph.edge(e);
    auto it = lookup.find(std::minmax(vmap[ed.u], vmap[ed.v]));
    if (it == lookup.end()) throw InvalidArgument("sub-patch edge missing from the host patch");
    out[e] = it->second;
  }
  return out;
}

}  // namespace lipschitz
