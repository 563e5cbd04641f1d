#include "lipschitz/textio.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "lipschitz/errors.hpp"

namespace lipschitz {

namespace {

std::string fixed(double x) {
  char buf[48];
  // Avoid "-0.000000000" so that mirrored coordinates print identically.
  if (std::abs(x) < 5e-10) x = 0.0;
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

std::vector<std::string> content_lines(std::istream& is) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(line);
  }
  return out;
}

[[noreturn]] void bad_line(const std::string& line) { throw InvalidArgument("malformed line: '" + line + "'"); }

}  // namespace

void write_patch(std::ostream& os, const LatticePatch& patch) {
  os << patch.kind.name() << ' ' << to_string(patch.region) << '\n';
  for (VertexId v = 0; v < patch.num_vertices(); ++v)
    os << "V " << v << ' ' << fixed(patch.positions[v].x) << ' ' << fixed(patch.positions[v].y) << '\n';
  for (EdgeId e = 0; e < patch.num_edges(); ++e) {
    const Edge& ed = patch.graph.edge(e);
    int flag = 0;
    if (!patch.torus) {
      const Edge& d = patch.dual.edge(patch.dual_edge(e));
      flag = patch.face_on_loop[d.u] && patch.face_on_loop[d.v];
    }
    os << "E " << e << ' ' << ed.u << ' ' << ed.v << ' ' << flag << '\n';
  }
  os << 'B';
  for (VertexId v : patch.boundary) os << ' ' << v;
  os << '\n';
}

PatchRecord read_patch(std::istream& is) {
  auto lines = content_lines(is);
  if (lines.empty()) throw InvalidArgument("empty patch file");
  PatchRecord r;
  {
    std::istringstream head(lines[0]);
    if (!(head >> r.kind >> r.region)) bad_line(lines[0]);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream in(lines[i]);
    std::string tag;
    in >> tag;
    if (tag == "V") {
      int id;
      Point p;
      if (!(in >> id >> p.x >> p.y) || id != static_cast<int>(r.positions.size())) bad_line(lines[i]);
      r.positions.push_back(p);
    } else if (tag == "E") {
      int id, flag;
      Edge e;
      if (!(in >> id >> e.u >> e.v >> flag) || id != static_cast<int>(r.edges.size())) bad_line(lines[i]);
      r.edges.push_back(e);
      r.loop_flags.push_back(flag);
    } else if (tag == "B") {
      VertexId v;
      while (in >> v) r.boundary.push_back(v);
    } else {
      bad_line(lines[i]);
    }
  }
  return r;
}

void write_heights(std::ostream& os, const HeightField& h) {
  for (VertexId v = 0; v < h.size(); ++v) os << "H " << v << ' ' << h[v] << '\n';
}

HeightField read_heights(std::istream& is, int num_vertices) {
  HeightField h(num_vertices, 0);
  std::vector<char> seen(num_vertices, 0);
  for (const auto& line : content_lines(is)) {
    std::istringstream in(line);
    std::string tag;
    int v, value;
    if (!(in >> tag >> v >> value) || tag != "H" || v < 0 || v >= num_vertices) bad_line(line);
    if (value % 2 == 0) throw InvalidArgument("even height at vertex " + std::to_string(v));
    h[v] = value;
    seen[v] = 1;
  }
  for (VertexId v = 0; v < num_vertices; ++v)
    if (!seen[v]) throw InvalidArgument("height missing for vertex " + std::to_string(v));
  return h;
}

void write_bc(std::ostream& os, const BoundaryCondition& xi) {
  for (VertexId v = 0; v < xi.num_vertices(); ++v) {
    if (!xi.constrained(v)) continue;
    os << "BC " << v << ' ';
    const auto& vals = xi.values(v);
    for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << vals[i];
    os << '\n';
  }
}

BoundaryCondition read_bc(std::istream& is, int num_vertices) {
  BoundaryCondition xi(num_vertices);
  for (const auto& line : content_lines(is)) {
    std::istringstream in(line);
    std::string tag, list;
    int v;
    if (!(in >> tag >> v >> list) || tag != "BC" || v < 0 || v >= num_vertices) bad_line(line);
    ValueSet values;
    std::istringstream items(list);
    std::string item;
    while (std::getline(items, item, ',')) {
      try {
        values.push_back(std::stoi(item));
      } catch (const std::exception&) {
        bad_line(line);
      }
    }
    xi.set(v, values);
  }
  return xi;
}

}  // namespace lipschitz
