#include "lipschitz/coupling.hpp"

#include <cstdlib>

#include "lipschitz/errors.hpp"

namespace lipschitz {

int EdgeConfig::count() const {
  int n = 0;
  for (auto b : bits) n += b != 0;
  return n;
}

std::string EdgeConfig::to_string() const {
  std::string s(bits.size(), '0');
  for (std::size_t e = 0; e < bits.size(); ++e)
    if (bits[e]) s[e] = '1';
  return s;
}

EdgeConfig EdgeConfig::parse(std::string_view text) {
  EdgeConfig c(static_cast<int>(text.size()));
  for (std::size_t e = 0; e < text.size(); ++e) {
    if (text[e] != '0' && text[e] != '1') throw InvalidArgument("edge configuration must be a bitstring");
    c.set(static_cast<int>(e), text[e] == '1');
  }
  return c;
}

EdgeConfig sample_bernoulli(const Model& model, Rng& rng) {
  EdgeConfig b(model.num_edges());
  for (EdgeId e = 0; e < model.num_edges(); ++e) {
    double p = 1.0 - 1.0 / model.c(e);
    // One draw per edge even when p = 0 keeps streams aligned across weights.
    double u = uniform01(rng);
    b.set(e, u < p);
  }
  return b;
}

EdgeConfig fixed_sign_edges(const FiniteGraph& g, const HeightField& h) {
  EdgeConfig fix(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    fix.set(e, std::max(std::abs(h[ed.u]), std::abs(h[ed.v])) >= 3);
  }
  return fix;
}

EdgeConfig omega_from(const FiniteGraph& g, const HeightField& h, const EdgeConfig& b) {
  if (b.size() != g.num_edges()) throw InvalidArgument("B does not match the edge set");
  EdgeConfig w(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    w.set(e, omega_edge(h[ed.u], h[ed.v], b[e]));
  }
  return w;
}

EdgeConfig nu_from(const FiniteGraph& g, const HeightField& h, const EdgeConfig& b, int s) {
  if (s % 2 == 0) throw InvalidArgument("base level must be odd");
  EdgeConfig nu(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    int a = std::abs(2 * s - h[ed.u]);
    int c = std::abs(2 * s - h[ed.v]);
    bool value;
    if ((a == 5 && c == 7) || (a == 7 && c == 5))
      value = false;
    else if (a == c && (a == 5 || a == 7))
      value = b[e];
    else
      value = true;
    nu.set(e, value);
  }
  return nu;
}

bool omega_consistent(const FiniteGraph& g, const HeightField& h, const EdgeConfig& omega) {
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    int a = h[ed.u], b = h[ed.v];
    if (std::max(std::abs(a), std::abs(b)) >= 3 && !omega[e]) return false;
    if (a * b < 0 && omega[e]) return false;
  }
  return true;
}

ClusterPartition clusters(const FiniteGraph& g, const EdgeConfig& open, const std::vector<char>& marked) {
  DisjointSets sets(g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (open[e]) sets.unite(g.edge(e).u, g.edge(e).v);
  ClusterPartition p;
  p.cluster_of.assign(g.num_vertices(), -1);
  std::vector<int> id_of_root(g.num_vertices(), -1);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    int r = sets.find(v);
    if (id_of_root[r] < 0) id_of_root[r] = p.count++;
    p.cluster_of[v] = id_of_root[r];
  }
  p.touches.assign(p.count, 0);
  p.forced_sign.assign(p.count, 0);
  if (!marked.empty())
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      if (marked[v]) p.touches[p.cluster_of[v]] = 1;
  return p;
}

Quotient quotient_graph(const FiniteGraph& g, const EdgeConfig& contracted) {
  ClusterPartition p = clusters(g, contracted);
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) edges.push_back({p.cluster_of[e.u], p.cluster_of[e.v]});
  return {FiniteGraph(p.count, std::move(edges), g.weight_class()), std::move(p.cluster_of)};
}

int forced_sign(const BoundaryCondition& xi, VertexId x, int abs_height) {
  if (!xi.constrained(x)) return 0;
  bool plus = xi.allows(x, abs_height), minus = xi.allows(x, -abs_height);
  if (plus && minus) return 0;
  if (plus) return 1;
  if (minus) return -1;
  throw InvalidArgument("boundary condition excludes |h| at vertex " + std::to_string(x));
}

ClusterPartition analyze_signs(const FiniteGraph& g, const HeightField& h, const EdgeConfig& omega,
                               const BoundaryCondition& xi) {
  if (!omega_consistent(g, h, omega)) throw InvalidArgument("ω is inconsistent with |h|");
  ClusterPartition p = clusters(g, omega);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    int s = forced_sign(xi, v, std::abs(h[v]));
    if (s == 0) continue;
    int& f = p.forced_sign[p.cluster_of[v]];
    if (f != 0 && f != s) throw InvalidArgument("conflicting forced signs within one cluster");
    f = s;
    p.touches[p.cluster_of[v]] = 1;
  }
  return p;
}

HeightField resample_signs(const FiniteGraph& g, const HeightField& h, const EdgeConfig& omega,
                           const BoundaryCondition& xi, Rng& rng) {
  ClusterPartition p = analyze_signs(g, h, omega, xi);
  std::vector<int> sign(p.count);
  for (int c = 0; c < p.count; ++c) sign[c] = p.forced_sign[c] != 0 ? p.forced_sign[c] : (fair_coin(rng) ? 1 : -1);
  HeightField out = h;
  for (VertexId v = 0; v < g.num_vertices(); ++v) out[v] = sign[p.cluster_of[v]] * std::abs(h[v]);
  return out;
}

}  // namespace lipschitz
