#include "lipschitz/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "lipschitz/corpus.hpp"
#include "lipschitz/coupling.hpp"
#include "lipschitz/mcmc.hpp"
#include "lipschitz/oracle.hpp"
#include "lipschitz/transforms.hpp"

namespace lipschitz {

int VerifyReport::failures() const {
  int n = 0;
  for (const auto& c : checks) n += !c.pass;
  return n;
}

std::vector<CheckResult> VerifyReport::group(const std::string& name) const {
  std::vector<CheckResult> out;
  for (const auto& c : checks)
    if (c.group == name) out.push_back(c);
  return out;
}

const std::vector<std::string>& verify_groups() {
  static const std::vector<std::string> groups{"identities", "inequalities", "kernels",
                                               "duality",    "monotonicity", "structure"};
  return groups;
}

void print_report(std::ostream& os, const VerifyReport& report) {
  for (const auto& c : report.checks) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", c.discrepancy);
    os << (c.pass ? "PASS " : "FAIL ") << c.group << '/' << c.name << "  discrepancy=" << buf;
    if (!c.detail.empty()) os << "  " << c.detail;
    os << '\n';
  }
  os << (report.ok() ? "verify: all " : "verify: ") << report.checks.size() - report.failures() << '/'
     << report.checks.size() << " checks passed\n";
}

SubsetCount quad_duality_exhaustive(const Quad& quad, Direction direction) {
  const int m = quad.patch->num_edges();
  if (m > 26) throw CapExceeded("exhaustive duality check on more than 26 edges");
  Direction other = direction == Direction::horizontal ? Direction::vertical : Direction::horizontal;
  SubsetCount r;
  EdgeConfig set(m), rest(m);
  for (long long mask = 0; mask < (1LL << m); ++mask) {
    for (int e = 0; e < m; ++e) {
      set.set(e, (mask >> e) & 1);
      rest.set(e, !((mask >> e) & 1));
    }
    bool primal = crossing(quad, set, direction, GraphSide::primal);
    bool dual = crossing(quad, rest, other, GraphSide::dual);
    ++r.subsets;
    r.violations += primal == dual;
  }
  return r;
}

SubsetCount primal_implies_dual_exhaustive(const Quad& quad) {
  const int m = quad.patch->num_edges();
  if (m > 26) throw CapExceeded("exhaustive duality check on more than 26 edges");
  SubsetCount r;
  EdgeConfig set(m);
  for (long long mask = 0; mask < (1LL << m); ++mask) {
    for (int e = 0; e < m; ++e) set.set(e, (mask >> e) & 1);
    ++r.subsets;
    if (crossing(quad, set, Direction::horizontal, GraphSide::primal) &&
        !crossing(quad, set, Direction::horizontal, GraphSide::dual))
      ++r.violations;
  }
  return r;
}

namespace {

struct Outcome {
  double discrepancy = 0.0;
  bool pass = true;
  std::string detail;
};

class Recorder {
 public:
  Recorder(VerifyReport& report, std::string group, const VerifyOptions& options)
      : report_(report), group_(std::move(group)), on_check_(options.on_check) {}
  void add(const std::string& name, const Outcome& o) { add(name, o.pass, o.discrepancy, o.detail); }
  void add(const std::string& name, bool pass, double discrepancy, const std::string& detail = {}) {
    report_.checks.push_back({group_, name, pass, discrepancy, detail});
    if (on_check_) on_check_(report_.checks.back());
  }
  // Records a failure instead of propagating a library exception.
  template <class F>
  void guarded(const std::string& name, F&& f) {
    try {
      add(name, f());
    } catch (const std::exception& e) {
      add(name, false, 1.0, std::string("error: ") + e.what());
    }
  }

 private:
  VerifyReport& report_;
  std::string group_;
  std::function<void(const CheckResult&)> on_check_;
};

template <class Real>
bool tv_ok(const Real& tv) {
  if constexpr (std::is_same_v<Real, Rational>)
    return tv == 0;
  else
    return tv <= 1e-10;
}

template <class Real>
const char* mode() {
  return std::is_same_v<Real, Rational> ? "exact" : "float";
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

HeightField restrict_to(const HeightField& h, const std::vector<VertexId>& vs) {
  HeightField out;
  out.values.reserve(vs.size());
  for (VertexId v : vs) out.values.push_back(h[v]);
  return out;
}

EdgeConfig restrict_to(const EdgeConfig& b, const std::vector<EdgeId>& es) {
  EdgeConfig out(static_cast<int>(es.size()));
  for (std::size_t i = 0; i < es.size(); ++i) out.set(static_cast<int>(i), b[es[i]]);
  return out;
}

HeightField abs_field(const HeightField& h) {
  HeightField out = h;
  for (int& x : out.values) x = std::abs(x);
  return out;
}

BoundaryCondition lift(const BoundaryCondition& xi, int n) {
  BoundaryCondition out(n);
  for (VertexId v = 0; v < xi.num_vertices(); ++v)
    if (xi.constrained(v)) out.set(v, xi.values(v));
  return out;
}

std::vector<VertexId> ball(const FiniteGraph& g, VertexId x, int r) {
  VertexId src[1] = {x};
  auto d = bfs_distances(g, src);
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (d[v] != kUnreachable && d[v] <= r) out.push_back(v);
  return out;
}

Model sub_model(const Model& host, const FiniteGraph& sub, const std::vector<EdgeId>& edge_map) {
  std::vector<EdgeWeight> w;
  for (EdgeId e : edge_map) w.push_back(host.weight(e));
  return Model(sub, std::move(w));
}

// Distinct values of every vertex over a distribution's support.
template <class Config, class Real, class Value>
std::vector<std::vector<int>> value_ranges(const ExactDistribution<Config, Real>& d, int n, Value&& value) {
  std::vector<std::set<int>> s(n);
  for (const auto& c : d.configs)
    for (VertexId x = 0; x < n; ++x) s[x].insert(value(c, x));
  std::vector<std::vector<int>> out;
  for (auto& v : s) out.emplace_back(v.begin(), v.end());
  return out;
}

template <class Config>
std::vector<Event<Config>> limited_family(const std::vector<Event<Config>>& base, std::size_t derived) {
  return depth_two_family(base, derived);
}

// ---------------------------------------------------------------- identities

template <class Real>
Outcome dotting_identity(const FiniteGraph& g, const BoundaryCondition& xi, const EnumerationOptions& opts) {
  Model m = Model::uniform(g, EdgeWeight::parse("2"));
  auto heights = enumerate_heights<Real>(m, xi, opts);
  BipartiteTransform t = dot_transform(g);
  auto homs = enumerate_homomorphisms<Real>(t.graph, t.parity, lift(xi, t.graph.num_vertices()), opts);
  auto restricted = push_forward(homs, [&](const HeightField& f) { return HeightField(t.restrict(f.values)); });
  Real tv = tv_distance(heights, restricted);
  return {to_double(tv), tv_ok(tv),
          fmt("%s, %d heights, %d homomorphisms", mode<Real>(), heights.size(), homs.size())};
}

// Star-triangle coupling at c = sqrt(2), plus the per-configuration identities
// W(h) = sqrt2^m 2^{#flat triangles} and #homomorphisms above h = 2^{#flat triangles}.
Outcome star_triangle_identity(const FiniteGraph& g, const BoundaryCondition& xi, const EnumerationOptions& opts) {
  auto cover = triangle_cover(g);
  if (!cover) throw InvalidArgument("graph has no triangle cover");
  Model m = Model::uniform(g, EdgeWeight::parse("sqrt2"));
  auto heights = enumerate_heights<double>(m, xi, opts);
  BipartiteTransform t = star_triangle_transform(g, *cover);
  auto homs = enumerate_homomorphisms<double>(t.graph, t.parity, lift(xi, t.graph.num_vertices()), opts);
  auto restricted = push_forward(homs, [&](const HeightField& f) { return HeightField(t.restrict(f.values)); });
  double tv = tv_distance(heights, restricted);
  const int tri = static_cast<int>(cover->size());
  long long bad_weight = 0, bad_count = 0;
  for (int i = 0; i < heights.size(); ++i) {
    const HeightField& h = heights.configs[i];
    int flat_tri = 0;
    for (const Triangle& tr : *cover) {
      bool flat = true;
      for (EdgeId e : tr) flat = flat && h[g.edge(e).u] == h[g.edge(e).v];
      flat_tri += flat;
    }
    if (flat_edge_count(g, h) != tri + 2 * flat_tri) ++bad_weight;
    double count = restricted.probability(h) * homs.partition;
    if (std::abs(count - std::ldexp(1.0, flat_tri)) > 1e-6) ++bad_count;
  }
  bool pass = tv <= 1e-10 && bad_weight == 0 && bad_count == 0;
  return {tv, pass,
          fmt("float, %d triangles, %d heights, weight identity failures %lld, count identity failures %lld", tri,
              heights.size(), bad_weight, bad_count)};
}

// Doubled-edge triangle under the star transform of both edge copies versus
// the single-edge model at c = 2.
Outcome rhombille_chain(const EnumerationOptions& opts) {
  FiniteGraph doubled = doubled_triangle();
  std::vector<Triangle> cover{Triangle{0, 1, 2}, Triangle{3, 4, 5}};
  BipartiteTransform t = star_triangle_transform(doubled, cover);
  BoundaryCondition xi = const_bc(3, {0}, 1);
  auto homs = enumerate_homomorphisms<Rational>(t.graph, t.parity, lift(xi, t.graph.num_vertices()), opts);
  auto restricted = push_forward(homs, [&](const HeightField& f) { return HeightField(t.restrict(f.values)); });
  Model single = Model::uniform(cycle_graph(3), EdgeWeight::parse("2"));
  auto heights = enumerate_heights<Rational>(single, xi, opts);
  Rational tv = tv_distance(heights, restricted);
  return {to_double(tv), tv == 0, fmt("exact, %d heights", heights.size())};
}

// ω given |h| = H against FK with E_fix(H) forced open and the sign-forced
// vertices wired.
template <class Real>
Outcome edwards_sokal(const Instance& in, const EnumerationOptions& opts) {
  const FiniteGraph& g = in.model.graph();
  auto joint = enumerate_joint<Real>(in.model, in.xi, opts);
  auto p = bernoulli_p<Real>(in.model);
  std::map<std::vector<int>, std::vector<std::pair<EdgeConfig, Real>>> by_abs;
  for (int i = 0; i < joint.size(); ++i) {
    const auto& c = joint.configs[i];
    by_abs[abs_field(c.h).values].emplace_back(omega_from(g, c.h, c.b), joint.probs[i]);
  }
  Real worst = 0;
  int classes = 0, skipped = 0;
  for (auto& [values, items] : by_abs) {
    auto cond = EdgeDistribution<Real>::from_weights(std::move(items));
    HeightField H(values);
    EdgeConfig fix = fixed_sign_edges(g, H);
    std::vector<char> forced(fix.bits.begin(), fix.bits.end());
    std::vector<VertexId> wired;
    int sign = 0;
    bool mixed = false;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (!in.xi.constrained(v)) continue;
      int s = forced_sign(in.xi, v, H[v]);
      if (s == 0) continue;
      wired.push_back(v);
      mixed = mixed || (sign != 0 && s != sign);
      sign = s;
    }
    if (mixed) {
      ++skipped;
      continue;
    }
    auto fk = enumerate_fk<Real>(g, p, forced, wired, opts);
    Real tv = tv_distance(cond, fk);
    if (worst < tv) worst = tv;
    ++classes;
  }
  return {to_double(worst), tv_ok(worst) && classes > 0,
          fmt("%s, %d absolute-height classes, %d skipped", mode<Real>(), classes, skipped)};
}

// FK with F forced open and F re-randomised by Bernoulli(p), against FK on the
// quotient graph with F contracted.
template <class Real>
Outcome contraction(const Instance& in, const EnumerationOptions& opts) {
  const FiniteGraph& g = in.model.graph();
  auto p = bernoulli_p<Real>(in.model);
  auto heights = enumerate_heights<Real>(in.model, in.xi, opts);
  std::set<EdgeConfig> sets;
  for (const auto& h : heights.configs) {
    EdgeConfig f = fixed_sign_edges(g, h);
    if (f.count() > 0 && f.count() <= 14) sets.insert(f);
    if (sets.size() >= 6) break;
  }
  EdgeConfig first(g.num_edges());
  first.set(0, true);
  sets.insert(first);
  Real worst = 0;
  for (const EdgeConfig& f : sets) {
    std::vector<char> forced(f.bits.begin(), f.bits.end());
    auto a = enumerate_fk<Real>(g, p, forced, {}, opts);
    std::vector<EdgeId> fe;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (f[e]) fe.push_back(e);
    std::vector<std::pair<EdgeConfig, Real>> items;
    for (int i = 0; i < a.size(); ++i)
      for (long long mask = 0; mask < (1LL << fe.size()); ++mask) {
        EdgeConfig c = a.configs[i];
        Real w = a.probs[i];
        for (std::size_t k = 0; k < fe.size(); ++k) {
          bool open = (mask >> k) & 1;
          c.set(fe[k], open);
          w *= open ? p[fe[k]] : Real(1) - p[fe[k]];
        }
        items.emplace_back(std::move(c), w);
      }
    auto rerandomised = EdgeDistribution<Real>::from_weights(std::move(items));
    Quotient q = quotient_graph(g, f);
    auto b = enumerate_fk<Real>(q.graph, p, {}, {}, opts);
    Real tv = tv_distance(rerandomised, b);
    if (worst < tv) worst = tv;
  }
  return {to_double(worst), tv_ok(worst), fmt("%s, %d contracted sets", mode<Real>(), static_cast<int>(sets.size()))};
}

// Conditional law of h on the subgraph generated by V given h on A = V' \ (V \ ∂V)
// against a fresh enumeration with those values as boundary condition.
template <class Real>
Outcome spatial_markov(const Model& model, const BoundaryCondition& xi, const std::vector<VertexId>& V,
                       const EnumerationOptions& opts) {
  const FiniteGraph& g = model.graph();
  std::vector<char> inside(g.num_vertices(), 0), boundary(g.num_vertices(), 0);
  for (VertexId v : V) inside[v] = 1;
  for (VertexId v : V)
    for (const Incidence& inc : g.incident(v)) boundary[v] |= !inside[inc.neighbor];
  std::vector<VertexId> A;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (!inside[v] || boundary[v]) A.push_back(v);
  std::vector<EdgeId> edge_map;
  FiniteGraph sub = induced_subgraph(g, V, &edge_map);
  Model m = sub_model(model, sub, edge_map);

  auto d = enumerate_heights<Real>(model, xi, opts);
  std::map<std::vector<int>, std::vector<std::pair<HeightField, Real>>> groups;
  for (int i = 0; i < d.size(); ++i)
    groups[restrict_to(d.configs[i], A).values].emplace_back(restrict_to(d.configs[i], V), d.probs[i]);
  Real worst = 0;
  for (auto& [key, items] : groups) {
    auto cond = HeightDistribution<Real>::from_weights(std::move(items));
    const HeightField& any = cond.configs[0];
    BoundaryCondition alpha(static_cast<int>(V.size()));
    for (std::size_t i = 0; i < V.size(); ++i) {
      if (boundary[V[i]])
        alpha.set(static_cast<VertexId>(i), any[static_cast<VertexId>(i)]);
      else if (xi.constrained(V[i]))
        alpha.set(static_cast<VertexId>(i), xi.values(V[i]));
    }
    Real tv = tv_distance(cond, enumerate_heights<Real>(m, alpha, opts));
    if (worst < tv) worst = tv;
  }
  return {to_double(worst), tv_ok(worst),
          fmt("%s, %d outer configurations, |V| = %d", mode<Real>(), static_cast<int>(groups.size()),
              static_cast<int>(V.size()))};
}

// Given (h, B) off V and ω = 0 on the cut edges, (h, B) on V is the joint law
// on V with {±1} appended at the cut endpoints.
template <class Real>
Outcome smp_with_percolation(const Model& model, const BoundaryCondition& xi, const std::vector<VertexId>& V,
                             const EnumerationOptions& opts) {
  const FiniteGraph& g = model.graph();
  std::vector<char> inside(g.num_vertices(), 0), endpoint(g.num_vertices(), 0);
  for (VertexId v : V) inside[v] = 1;
  std::vector<VertexId> outside;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (!inside[v]) outside.push_back(v);
  std::vector<EdgeId> cut, outer;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (inside[ed.u] != inside[ed.v]) {
      cut.push_back(e);
      endpoint[inside[ed.u] ? ed.u : ed.v] = 1;
    } else if (!inside[ed.u]) {
      outer.push_back(e);
    }
  }
  std::vector<EdgeId> edge_map;
  FiniteGraph sub = induced_subgraph(g, V, &edge_map);
  Model m = sub_model(model, sub, edge_map);
  BoundaryCondition alpha(static_cast<int>(V.size()));
  for (std::size_t i = 0; i < V.size(); ++i) {
    VertexId v = V[i];
    if (endpoint[v]) {
      ValueSet s;
      for (int k : {-1, 1})
        if (!xi.constrained(v) || xi.allows(v, k)) s.push_back(k);
      alpha.set(static_cast<VertexId>(i), s);
    } else if (xi.constrained(v)) {
      alpha.set(static_cast<VertexId>(i), xi.values(v));
    }
  }
  auto target = enumerate_joint<Real>(m, alpha, opts);

  auto joint = enumerate_joint<Real>(model, xi, opts);
  std::map<std::pair<std::vector<int>, EdgeConfig>, std::vector<std::pair<JointConfig, Real>>> groups;
  for (int i = 0; i < joint.size(); ++i) {
    const auto& c = joint.configs[i];
    bool closed = true;
    for (EdgeId e : cut) closed = closed && omega_edge(c.h[g.edge(e).u], c.h[g.edge(e).v], c.b[e]) == 0;
    if (!closed) continue;
    groups[{restrict_to(c.h, outside).values, restrict_to(c.b, outer)}].emplace_back(
        JointConfig{restrict_to(c.h, V), restrict_to(c.b, edge_map)}, joint.probs[i]);
  }
  Real worst = 0;
  for (auto& [key, items] : groups) {
    Real tv = tv_distance(JointDistribution<Real>::from_weights(std::move(items)), target);
    if (worst < tv) worst = tv;
  }
  return {to_double(worst), tv_ok(worst) && !groups.empty(),
          fmt("%s, %d outer configurations, %d cut edges", mode<Real>(), static_cast<int>(groups.size()),
              static_cast<int>(cut.size()))};
}

template <class F>
Outcome dispatch(bool rational, F&& f) {
  return rational ? f(Rational{}) : f(0.0);
}

Instance nested_instance(const NestedPair& np, const char* c) {
  Instance in;
  in.name = np.name;
  EdgeWeight w = EdgeWeight::parse(c);
  in.rational = w.exact.has_value();
  in.model = Model::uniform(np.large.graph, w);
  in.xi = pm1_bc(np.large.graph.num_vertices(), np.large.boundary);
  in.boundary = np.large.boundary;
  in.shape = BcShape::pm1;
  return in;
}

void identities(VerifyReport& report, const VerifyOptions& options, const EnumerationOptions& opts) {
  Recorder r(report, "identities", options);
  LatticePatch l1 = build_patch(kHoneycomb, parse_region("L(1)"));
  r.guarded("dotting triangle", [&] { return dotting_identity<Rational>(cycle_graph(3), const_bc(3, {0}, 1), opts); });
  r.guarded("dotting path3", [&] { return dotting_identity<Rational>(path_graph(3), const_bc(3, {0, 2}, 1), opts); });
  r.guarded("dotting hexagon", [&] { return dotting_identity<Rational>(cycle_graph(6), pm1_bc(6, {0, 3}), opts); });
  r.guarded("dotting honeycomb L(1)", [&] {
    return dotting_identity<Rational>(l1.graph, pm1_bc(l1.num_vertices(), l1.boundary), opts);
  });
  r.guarded("star-triangle single triangle",
            [&] { return star_triangle_identity(cycle_graph(3), const_bc(3, {0}, 1), opts); });
  r.guarded("star-triangle kagome T(1)", [&] {
    LatticePatch k = build_patch(LatticeKind::parse("kagome"), Torus{1});
    return star_triangle_identity(k.graph, const_bc(k.num_vertices(), {0}, 1), opts);
  });
  r.guarded("rhombille chain doubled triangle", [&] { return rhombille_chain(opts); });

  for (const char* name : {"path3-c2", "triangle-c2", "hexagon-pm1-c2", "two-hex-pm1-c3/2", "honeycomb-L1-pm1-c2",
                           "square-torus1-root-c2"}) {
    Instance in = corpus_instance(name);
    r.guarded(std::string("edwards-sokal ") + name, [&] {
      return dispatch(in.rational, [&](auto tag) { return edwards_sokal<decltype(tag)>(in, opts); });
    });
  }
  for (const char* name : {"triangle-c2", "hexagon-pm1-c2", "two-hex-pm1-c3/2", "honeycomb-L1-pm1-c2",
                           "square-torus1-root-c2"}) {
    Instance in = corpus_instance(name);
    r.guarded(std::string("contraction ") + name, [&] {
      return dispatch(in.rational, [&](auto tag) { return contraction<decltype(tag)>(in, opts); });
    });
  }
  for (const NestedPair& np : nested_corpus()) {
    Instance in = nested_instance(np, "3/2");
    r.guarded("smp " + np.name,
              [&] { return spatial_markov<Rational>(in.model, in.xi, np.small.host_vertex, opts); });
  }
  {
    Instance in = corpus_instance("honeycomb-L1-pm1-c2");
    auto V = ball(in.model.graph(), in.focus, 1);
    r.guarded("smp honeycomb L(1) ball", [&] { return spatial_markov<Rational>(in.model, in.xi, V, opts); });
    r.guarded("smp-percolation honeycomb L(1) ball",
              [&] { return smp_with_percolation<Rational>(in.model, in.xi, V, opts); });
  }
  {
    Instance in = corpus_instance("two-hex-pm1-c3/2");
    r.guarded("smp-percolation two hexagons", [&] {
      return smp_with_percolation<Rational>(in.model, in.xi, {0, 1, 2, 3, 4, 5}, opts);
    });
  }
  {
    Instance in = corpus_instance("path5-pm1-c3/2");
    r.guarded("smp-percolation path5", [&] { return smp_with_percolation<Rational>(in.model, in.xi, {1, 2, 3}, opts); });
  }
  {
    Instance in = corpus_instance("square-torus1-root-c2");
    r.guarded("smp-percolation square torus", [&] {
      return smp_with_percolation<Rational>(in.model, in.xi, {1, 2, 3}, opts);
    });
  }
  for (const NestedPair& np : nested_corpus()) {
    if (np.large.graph.num_edges() > 12) continue;
    Instance in = nested_instance(np, "2");
    r.guarded("smp-percolation " + np.name,
              [&] { return smp_with_percolation<Rational>(in.model, in.xi, np.small.host_vertex, opts); });
  }
}

// -------------------------------------------------------------- inequalities

using HeightEvents = std::vector<Event<HeightField>>;
using JointEvents = std::vector<Event<JointConfig>>;

template <class Real>
HeightEvents height_thresholds(const HeightDistribution<Real>& d, bool absolute) {
  int n = d.configs.empty() ? 0 : d.configs[0].size();
  auto value = [absolute](const HeightField& h, VertexId x) { return absolute ? std::abs(h[x]) : h[x]; };
  return threshold_events<HeightField>(value_ranges(d, n, value), value, absolute ? "|h|" : "h");
}

template <class Real>
Outcome fkg_heights(const Model& model, const BoundaryCondition& xi, bool absolute, const EnumerationOptions& opts) {
  auto d = enumerate_heights<Real>(model, xi, opts);
  auto events = limited_family(height_thresholds(d, absolute), 300);
  FkgReport rep = check_fkg(d, events);
  return {rep.ok() ? 0.0 : -rep.min_gap, rep.ok(),
          fmt("%lld pairs, %zu violations, min gap %.3g", rep.pairs, rep.violations.size(), rep.min_gap)};
}

JointEvents joint_base_events(const JointDistribution<Rational>& d, const FiniteGraph& g, bool minus_b) {
  int n = g.num_vertices();
  auto value = [](const JointConfig& c, VertexId x) { return c.h[x]; };
  JointEvents ev = threshold_events<JointConfig>(value_ranges(d, n, value), value, "h");
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (minus_b)
      ev.push_back({"B" + std::to_string(e) + "=0", [e](const JointConfig& c) { return !c.b[e]; }});
    else
      ev.push_back({"B" + std::to_string(e) + "=1", [e](const JointConfig& c) { return c.b[e]; }});
  }
  return ev;
}

// FKG for increasing events of (h, B) and of (h, -B), including quad crossings
// of {hω ≥ 1} and {h ≥_B s} (increasing in (h, B)) and of E_s (increasing in (h, -B)).
Outcome fkg_joint(const LatticePatch& patch, const char* c, const EnumerationOptions& opts) {
  Model m = Model::uniform(patch.graph, EdgeWeight::parse(c));
  BoundaryCondition xi = pm1_bc(patch.num_vertices(), patch.boundary);
  auto d = enumerate_joint<Rational>(m, xi, opts);
  auto quad = std::make_shared<Quad>(corner_quad(patch));
  const FiniteGraph& g = patch.graph;
  auto cross = [quad, &g](EdgeSetKind kind, Direction dir) {
    return [quad, &g, kind, dir](const JointConfig& c) {
      EdgeConfig omega = omega_from(g, c.h, c.b);
      return crossing(*quad, edge_set(g, c.h, c.b, omega, kind), dir, GraphSide::primal);
    };
  };
  JointEvents plus = joint_base_events(d, g, false);
  JointEvents minus = joint_base_events(d, g, true);
  for (Direction dir : {Direction::horizontal, Direction::vertical}) {
    for (const char* k : {"hw>=1", "h>=B1", "h>=B3"})
      plus.push_back({std::string("cross ") + k + " " + to_string(dir), cross(EdgeSetKind::parse(k), dir)});
    for (const char* k : {"E1", "E3"})
      minus.push_back({std::string("cross ") + k + " " + to_string(dir), cross(EdgeSetKind::parse(k), dir)});
  }
  FkgReport a = check_fkg(d, limited_family(plus, 200));
  FkgReport b = check_fkg(d, limited_family(minus, 200));
  bool ok = a.ok() && b.ok();
  return {ok ? 0.0 : -std::min(a.min_gap, b.min_gap), ok,
          fmt("(h,B): %lld pairs, %zu violations; (h,-B): %lld pairs, %zu violations", a.pairs, a.violations.size(),
              b.pairs, b.violations.size())};
}

// CBC over every ordered pair of an interval-valued family.
Outcome cbc_interval(const Model& model, const std::vector<BoundaryCondition>& family, const EnumerationOptions& opts) {
  std::vector<HeightDistribution<Rational>> dists;
  for (const auto& xi : family) dists.push_back(enumerate_heights<Rational>(model, xi, opts));
  HeightEvents events;
  for (const auto& d : dists)
    for (auto& e : height_thresholds(d, false)) events.push_back(e);
  std::map<std::string, Event<HeightField>> unique;
  for (auto& e : events) unique.emplace(e.name, e);
  HeightEvents base;
  for (auto& [name, e] : unique) base.push_back(e);
  auto family_events = limited_family(base, 200);
  int pairs = 0, violations = 0;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (i == j || !interval_order_leq(family[i], family[j])) continue;
      ++pairs;
      violations += check_dominance(dists[i], dists[j], family_events).violations();
    }
  return {static_cast<double>(violations), violations == 0 && pairs > 0,
          fmt("%d ordered pairs, %zu events, %d violations", pairs, family_events.size(), violations)};
}

const std::vector<ValueSet>& abs_value_sets() {
  static const std::vector<ValueSet> sets{
      plus_minus_range(1, 1), odd_range(1, 1), odd_range(-1, 3), odd_range(1, 3),
      plus_minus_range(1, 3), plus_minus_range(3, 3), odd_range(3, 3), plus_minus_range(3, 5)};
  return sets;
}

// Absolute-value conditions on Δ: every set constant on Δ, then every
// ordered pair (i, j) alternating along Δ. Inadmissible ones are dropped.
std::vector<BoundaryCondition> abs_family(const FiniteGraph& g, const std::vector<VertexId>& delta, bool pairs) {
  const auto& sets = abs_value_sets();
  std::vector<BoundaryCondition> out;
  auto push = [&](std::size_t i, std::size_t j) {
    BoundaryCondition xi(g.num_vertices());
    for (std::size_t k = 0; k < delta.size(); ++k) xi.set(delta[k], k % 2 == 0 ? sets[i] : sets[j]);
    if (is_admissible(g, xi)) out.push_back(xi);
  };
  for (std::size_t i = 0; i < sets.size(); ++i) push(i, i);
  if (pairs)
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = 0; j < sets.size(); ++j)
        if (i != j) push(i, j);
  return out;
}

// FKG-|h| and CBC-|h| over an absolute-value family; with `joint`, events of
// (|h|, ω) instead of |h|.
Outcome abs_monotonicity(const Model& model, const std::vector<BoundaryCondition>& family, bool joint,
                         const EnumerationOptions& opts) {
  const FiniteGraph& g = model.graph();
  int n = g.num_vertices();
  long long fkg_pairs = 0, fkg_viol = 0, cbc_pairs = 0, cbc_viol = 0;
  double worst = 0;
  if (!joint) {
    std::vector<HeightDistribution<Rational>> dists;
    std::map<std::string, Event<HeightField>> unique;
    for (const auto& xi : family) {
      dists.push_back(enumerate_heights<Rational>(model, xi, opts));
      for (auto& e : height_thresholds(dists.back(), true)) unique.emplace(e.name, e);
    }
    HeightEvents base;
    for (auto& [name, e] : unique) base.push_back(e);
    auto events = limited_family(base, 150);
    for (auto& d : dists) {
      FkgReport rep = check_fkg(d, events);
      fkg_pairs += rep.pairs;
      fkg_viol += rep.violations.size();
      worst = std::max(worst, -rep.min_gap);
    }
    for (std::size_t i = 0; i < family.size(); ++i)
      for (std::size_t j = 0; j < family.size(); ++j) {
        if (i == j || !abs_order_leq(family[i], family[j])) continue;
        ++cbc_pairs;
        cbc_viol += check_dominance(dists[i], dists[j], events).violations();
      }
  } else {
    std::vector<JointDistribution<Rational>> dists;
    std::map<std::string, Event<JointConfig>> unique;
    auto value = [](const JointConfig& c, VertexId x) { return std::abs(c.h[x]); };
    // Events only see (|h|, ω), so work with that law (ω stored in the B slot).
    for (const auto& xi : family) {
      dists.push_back(push_forward(enumerate_joint<Rational>(model, xi, opts), [&g](const JointConfig& c) {
        return JointConfig{abs_field(c.h), omega_from(g, c.h, c.b)};
      }));
      for (auto& e : threshold_events<JointConfig>(value_ranges(dists.back(), n, value), value, "|h|"))
        unique.emplace(e.name, e);
    }
    JointEvents base;
    for (auto& [name, e] : unique) base.push_back(e);
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      base.push_back({"w" + std::to_string(e), [e](const JointConfig& c) { return c.b[e]; }});
    auto events = limited_family(base, 150);
    for (auto& d : dists) {
      FkgReport rep = check_fkg(d, events);
      fkg_pairs += rep.pairs;
      fkg_viol += rep.violations.size();
      worst = std::max(worst, -rep.min_gap);
    }
    for (std::size_t i = 0; i < family.size(); ++i)
      for (std::size_t j = 0; j < family.size(); ++j) {
        if (i == j || !abs_order_leq(family[i], family[j])) continue;
        ++cbc_pairs;
        cbc_viol += check_dominance(dists[i], dists[j], events).violations();
      }
  }
  bool ok = fkg_viol == 0 && cbc_viol == 0 && cbc_pairs > 0;
  return {ok ? 0.0 : std::max(worst, static_cast<double>(cbc_viol)), ok,
          fmt("%zu conditions, FKG %lld pairs / %lld violations, CBC %lld ordered pairs / %lld violations",
              family.size(), fkg_pairs, fkg_viol, cbc_pairs, cbc_viol)};
}

// The 1-Lipschitz counterexample: must FAIL to dominate.
Outcome one_lipschitz_counterexample(const EnumerationOptions& opts) {
  Model m = Model::uniform(path_graph(3), EdgeWeight::parse("1"));
  BoundaryCondition xi = const_bc(3, {0, 2}, 1);
  BoundaryCondition xi2(3);
  xi2.set(0, 1).set(2, ValueSet{-1, 3});  // f(3) ∈ {±1}
  auto a = enumerate_heights<Rational>(m, xi, opts);
  auto b = enumerate_heights<Rational>(m, xi2, opts);
  auto abs_f_one = [](const HeightField& h) { return h[1] == 3 || h[1] == -1; };
  Rational pa = event_probability(a, abs_f_one), pb = event_probability(b, abs_f_one);
  HeightEvents ev{{"|f(2)|>=1", abs_f_one}};
  bool violated = !check_dominance(a, b, ev).ok();
  bool reproduced = pa == Rational(2, 3) && pb == Rational(1, 2) && violated;
  return {to_double(pa - pb), reproduced,
          "P[|f(2)|=1] = " + to_string(pa) + " vs " + to_string(pb) + (violated ? ", domination fails" : "")};
}

// P[V*_left <->* V*_right in {hω <= 0}] >= 1/2 on a symmetric quad, ξ = {±1}.
Outcome symmetric_quad(const LatticePatch& patch, const char* c, const EnumerationOptions& opts) {
  Model m = Model::uniform(patch.graph, EdgeWeight::parse(c));
  auto d = enumerate_joint<Rational>(m, pm1_bc(patch.num_vertices(), patch.boundary), opts);
  Quad quad = corner_quad(patch);
  EdgeSetKind kind = EdgeSetKind::parse("hw<=0");
  Rational pr = event_probability(d, [&](const JointConfig& cfg) {
    EdgeConfig omega = omega_from(patch.graph, cfg.h, cfg.b);
    return crossing(quad, edge_set(patch.graph, cfg.h, cfg.b, omega, kind), Direction::horizontal, GraphSide::dual);
  });
  return {to_double(pr), pr >= Rational(1, 2), "P = " + to_string(pr)};
}

// E^ξ_{D'}[F(|h| on D)] >= E^{ξ|D}_D[F(|h|)] with |ξ| single-valued on ∂D.
Outcome smp_abs(const EnumerationOptions& opts) {
  FiniteGraph big = two_hexagons();
  std::vector<VertexId> V{0, 1, 2, 3, 4, 5};
  std::vector<EdgeId> edge_map;
  FiniteGraph small = induced_subgraph(big, V, &edge_map);
  Model mb = Model::uniform(big, EdgeWeight::parse("3/2"));
  Model ms = Model::uniform(small, EdgeWeight::parse("3/2"));
  std::vector<ValueSet> cut_sets{plus_minus_range(1, 1), plus_minus_range(3, 3), odd_range(1, 1), odd_range(3, 3)};
  int checks = 0, violations = 0;
  for (const auto& s0 : cut_sets)
    for (const auto& s1 : cut_sets)
      for (const auto& far : abs_value_sets()) {
        BoundaryCondition xi(10);
        xi.set(0, s0).set(1, s1).set(7, far).set(8, far);
        if (!is_admissible(big, xi)) continue;
        BoundaryCondition xs(6);
        xs.set(0, s0).set(1, s1);
        auto db = push_forward(enumerate_heights<Rational>(mb, xi, opts),
                               [&](const HeightField& h) { return abs_field(restrict_to(h, V)); });
        auto ds = push_forward(enumerate_heights<Rational>(ms, xs, opts), abs_field);
        auto events = limited_family(height_thresholds(ds, false), 60);
        violations += check_dominance(ds, db, events).violations();
        ++checks;
      }
  return {static_cast<double>(violations), violations == 0 && checks > 0,
          fmt("%d boundary conditions, %d violations", checks, violations)};
}

// E^{ξ'}_{D'}[F] >= E^{±1}_D[F] for F increasing in (|h|, ω) on D.
Outcome pm1_comparison(const NestedPair& np, const EnumerationOptions& opts) {
  Model ml = Model::uniform(np.large.graph, EdgeWeight::parse("2"));
  Model ms = Model::uniform(np.small.graph, EdgeWeight::parse("2"));
  auto small = enumerate_joint<Rational>(ms, pm1_bc(np.small.graph.num_vertices(), np.small.boundary), opts);
  const FiniteGraph& gs = np.small.graph;
  const FiniteGraph& gl = np.large.graph;
  int n = gs.num_vertices();
  auto value = [](const JointConfig& c, VertexId x) { return std::abs(c.h[x]); };
  int checks = 0, violations = 0;
  for (const auto& xi : abs_family(gl, np.large.boundary, false)) {
    auto large = enumerate_joint<Rational>(ml, xi, opts);
    // (|h|, ω) of the large configuration seen on D, encoded as (|h|, ω) with ω in the B slot.
    auto proj = push_forward(large, [&](const JointConfig& c) {
      EdgeConfig omega = omega_from(gl, c.h, c.b);
      return JointConfig{abs_field(restrict_to(c.h, np.small.host_vertex)), restrict_to(omega, np.small.host_edge)};
    });
    auto base_small = push_forward(small, [&](const JointConfig& c) {
      return JointConfig{abs_field(c.h), omega_from(gs, c.h, c.b)};
    });
    JointEvents ev = threshold_events<JointConfig>(value_ranges(base_small, n, value), value, "|h|");
    for (EdgeId e = 0; e < gs.num_edges(); ++e)
      ev.push_back({"w" + std::to_string(e), [e](const JointConfig& c) { return c.b[e]; }});
    violations += check_dominance(base_small, proj, limited_family(ev, 100)).violations();
    ++checks;
  }
  return {static_cast<double>(violations), violations == 0 && checks > 0,
          fmt("%d outer conditions, %d violations", checks, violations)};
}

// FK with E_fix(H) open is stochastically increasing in H.
Outcome omega_growth(const Instance& in, const EnumerationOptions& opts) {
  const FiniteGraph& g = in.model.graph();
  auto heights = enumerate_heights<Rational>(in.model, in.xi, opts);
  std::set<std::vector<int>> abs_set;
  for (const auto& h : heights.configs) abs_set.insert(abs_field(h).values);
  std::vector<std::vector<int>> hs(abs_set.begin(), abs_set.end());
  auto p = bernoulli_p<Rational>(in.model);
  std::map<std::vector<int>, EdgeDistribution<Rational>> fk;
  auto law = [&](const std::vector<int>& H) -> const EdgeDistribution<Rational>& {
    auto it = fk.find(H);
    if (it != fk.end()) return it->second;
    EdgeConfig f = fixed_sign_edges(g, HeightField(H));
    return fk.emplace(H, enumerate_fk<Rational>(g, p, std::vector<char>(f.bits.begin(), f.bits.end()), {}, opts))
        .first->second;
  };
  std::vector<Event<EdgeConfig>> base;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    base.push_back({"w" + std::to_string(e), [e](const EdgeConfig& c) { return c[e]; }});
  auto events = limited_family(base, 100);
  int pairs = 0, violations = 0;
  for (std::size_t i = 0; i < hs.size() && pairs < 200; ++i)
    for (std::size_t j = 0; j < hs.size() && pairs < 200; ++j) {
      if (i == j) continue;
      bool leq = true;
      for (std::size_t v = 0; v < hs[i].size(); ++v) leq = leq && hs[i][v] <= hs[j][v];
      if (!leq) continue;
      ++pairs;
      violations += check_dominance(law(hs[i]), law(hs[j]), events).violations();
    }
  return {static_cast<double>(violations), violations == 0 && pairs > 0,
          fmt("%d ordered pairs of absolute heights, %d violations", pairs, violations)};
}

void inequalities(VerifyReport& report, const VerifyOptions& options, const EnumerationOptions& opts) {
  Recorder r(report, "inequalities", options);
  for (const Instance& in : oracle_corpus())
    r.guarded("fkg " + in.name, [&] {
      return dispatch(in.rational, [&](auto tag) { return fkg_heights<decltype(tag)>(in.model, in.xi, false, opts); });
    });
  LatticePatch l1 = build_patch(kHoneycomb, parse_region("L(1)"));
  r.guarded("fkg (h,B) honeycomb L(1) c=2", [&] { return fkg_joint(l1, "2", opts); });
  {
    Model path = Model::uniform(path_graph(5), EdgeWeight::parse("3/2"));
    std::vector<BoundaryCondition> fam;
    for (ValueSet a : {ValueSet{-1, 1}, ValueSet{1}, ValueSet{1, 3}, ValueSet{3}, ValueSet{-3, -1}})
      for (ValueSet b : {ValueSet{-1, 1}, ValueSet{1}, ValueSet{1, 3}, ValueSet{-1}}) {
        BoundaryCondition xi(5);
        xi.set(0, a).set(4, b);
        fam.push_back(xi);
      }
    r.guarded("cbc interval path5", [&] { return cbc_interval(path, fam, opts); });
    Model hc = Model::uniform(l1.graph, EdgeWeight::parse("2"));
    std::vector<BoundaryCondition> fam2;
    for (ValueSet a : {ValueSet{-1, 1}, ValueSet{1}, ValueSet{1, 3}, ValueSet{-1}})
      for (ValueSet b : {ValueSet{-1, 1}, ValueSet{1}, ValueSet{1, 3}}) {
        BoundaryCondition xi(l1.num_vertices());
        for (std::size_t k = 0; k < l1.boundary.size(); ++k) xi.set(l1.boundary[k], k < l1.boundary.size() / 2 ? a : b);
        fam2.push_back(xi);
      }
    r.guarded("cbc interval honeycomb L(1)", [&] { return cbc_interval(hc, fam2, opts); });
  }
  {
    Model path = Model::uniform(path_graph(5), EdgeWeight::parse("3/2"));
    Model hex = Model::uniform(cycle_graph(6), EdgeWeight::parse("2"));
    Model hc = Model::uniform(l1.graph, EdgeWeight::parse("2"));
    r.guarded("abs fkg/cbc path5", [&] { return abs_monotonicity(path, abs_family(path.graph(), {0, 4}, true), false, opts); });
    r.guarded("abs fkg/cbc hexagon", [&] { return abs_monotonicity(hex, abs_family(hex.graph(), {0, 3}, true), false, opts); });
    r.guarded("abs fkg/cbc honeycomb L(1)",
              [&] { return abs_monotonicity(hc, abs_family(l1.graph, l1.boundary, true), false, opts); });
    r.guarded("abs fkg/cbc (|h|,w) path5",
              [&] { return abs_monotonicity(path, abs_family(path.graph(), {0, 4}, true), true, opts); });
    r.guarded("abs fkg/cbc (|h|,w) hexagon",
              [&] { return abs_monotonicity(hex, abs_family(hex.graph(), {0, 3}, true), true, opts); });
  }
  r.guarded("cbc counterexample for 1-Lipschitz functions reproduced", [&] { return one_lipschitz_counterexample(opts); });
  for (const char* c : {"1", "3/2", "2"})
    r.guarded(std::string("symmetric quad honeycomb L(1) c=") + c, [&] { return symmetric_quad(l1, c, opts); });
  r.guarded("smp-|h| two hexagons", [&] { return smp_abs(opts); });
  for (const NestedPair& np : nested_corpus()) {
    if (np.large.graph.num_edges() > 12) continue;
    r.guarded("pm1 comparison " + np.name, [&] { return pm1_comparison(np, opts); });
  }
  for (const char* name : {"hexagon-pm1-c2", "two-hex-pm1-c3/2", "honeycomb-L1-pm1-c2"}) {
    Instance in = corpus_instance(name);
    r.guarded(std::string("omega growth ") + name, [&] { return omega_growth(in, opts); });
  }
}

// ------------------------------------------------------------------- kernels

template <class Real>
Outcome kernel_check(const Instance& in, bool cluster, const EnumerationOptions& opts) {
  auto d = enumerate_heights<Real>(in.model, in.xi, opts);
  auto out = cluster ? apply_cluster_kernel(d, in.model, in.xi)
                     : apply_sweep_kernel(d, in.model, in.xi, free_sites(in.model, in.xi));
  Real tv = tv_distance(d, out);
  return {to_double(tv), tv_ok(tv), fmt("%s, %d configurations", mode<Real>(), d.size())};
}

void kernels(VerifyReport& report, const VerifyOptions& options, const EnumerationOptions& opts) {
  Recorder r(report, "kernels", options);
  for (const Instance& in : oracle_corpus()) {
    for (bool cluster : {false, true})
      r.guarded(std::string(cluster ? "cluster " : "sweep ") + in.name, [&] {
        return dispatch(in.rational, [&](auto tag) { return kernel_check<decltype(tag)>(in, cluster, opts); });
      });
  }
  {
    // Shuffled order is a random mixture of fixed orders; check a reversed one.
    Instance in = corpus_instance("honeycomb-L1-pm1-c2");
    auto order = free_sites(in.model, in.xi);
    std::reverse(order.begin(), order.end());
    r.guarded("sweep reversed order honeycomb-L1-pm1-c2", [&] {
      auto d = enumerate_heights<Rational>(in.model, in.xi, opts);
      Rational tv = tv_distance(d, apply_sweep_kernel(d, in.model, in.xi, order));
      return Outcome{to_double(tv), tv == 0, "exact"};
    });
  }
}

// ------------------------------------------------------------------- duality

void duality(VerifyReport& report, const VerifyOptions& options) {
  Recorder r(report, "duality", options);
  struct Case {
    const char* kind;
    const char* region;
  };
  for (Case c : {Case{"honeycomb", "R(1,1)"}, Case{"honeycomb", "L(1)"}, Case{"kagome", "L(1)"},
                 Case{"square", "L(1)"}, Case{"triangular", "R(1,1)"}, Case{"square-octagon", "L(1)"}}) {
    std::string name = std::string(c.kind) + " " + c.region;
    r.guarded("quad duality " + name, [&] {
      LatticePatch p = build_patch(LatticeKind::parse(c.kind), parse_region(c.region));
      Quad q = corner_quad(p);
      SubsetCount h = quad_duality_exhaustive(q, Direction::horizontal);
      SubsetCount v = quad_duality_exhaustive(q, Direction::vertical);
      long long bad = h.violations + v.violations;
      return Outcome{static_cast<double>(bad), bad == 0,
                     fmt("%d edges, %lld subsets per direction, %lld violations", p.num_edges(), h.subsets, bad)};
    });
  }
  for (Case c : {Case{"honeycomb", "L(1)"}, Case{"honeycomb", "R(1,1)"}, Case{"square-octagon", "L(1)"}}) {
    std::string name = std::string(c.kind) + " " + c.region;
    r.guarded("primal implies dual " + name, [&] {
      LatticePatch p = build_patch(LatticeKind::parse(c.kind), parse_region(c.region));
      SubsetCount s = primal_implies_dual_exhaustive(corner_quad(p));
      return Outcome{static_cast<double>(s.violations), s.violations == 0,
                     fmt("max degree %d, %lld subsets, %lld violations", p.graph.max_degree(), s.subsets,
                         s.violations)};
    });
  }
  // Degree > 3: the inclusion may fail; counterexamples are expected and only counted.
  for (Case c : {Case{"square", "L(1)"}, Case{"kagome", "L(1)"}, Case{"triangular", "R(1,1)"}}) {
    std::string name = std::string(c.kind) + " " + c.region;
    r.guarded("primal implies dual (informational) " + name, [&] {
      LatticePatch p = build_patch(LatticeKind::parse(c.kind), parse_region(c.region));
      SubsetCount s = primal_implies_dual_exhaustive(corner_quad(p));
      return Outcome{0.0, true,
                     fmt("max degree %d, %lld subsets, %lld counterexamples", p.graph.max_degree(), s.subsets,
                         s.violations)};
    });
  }
  for (Case c : {Case{"square", "L(2)"}, Case{"honeycomb", "L(2)"}, Case{"kagome", "L(2)"}}) {
    std::string name = std::string(c.kind) + " " + c.region;
    r.guarded("quad duality random subsets " + name, [&] {
      LatticePatch p = build_patch(LatticeKind::parse(c.kind), parse_region(c.region));
      Quad q = corner_quad(p);
      Rng rng = make_stream(0x6475616c, 0);
      long long bad = 0, mono = 0;
      const int trials = 20000;
      for (int t = 0; t < trials; ++t) {
        double density = uniform01(rng);
        EdgeConfig s(p.num_edges());
        for (EdgeId e = 0; e < p.num_edges(); ++e) s.set(e, uniform01(rng) < density);
        for (Direction dir : {Direction::horizontal, Direction::vertical}) {
          Direction other = dir == Direction::horizontal ? Direction::vertical : Direction::horizontal;
          bool primal = crossing(q, s, dir, GraphSide::primal);
          bad += primal == crossing(q, complement(s), other, GraphSide::dual);
          EdgeConfig more = s;
          more.set(static_cast<int>(uniform_below(rng, p.num_edges())), true);
          mono += primal && !crossing(q, more, dir, GraphSide::primal);
        }
      }
      return Outcome{static_cast<double>(bad + mono), bad + mono == 0,
                     fmt("%d edges, %d subsets, %lld duality violations, %lld monotonicity violations",
                         p.num_edges(), trials, bad, mono)};
    });
  }
  r.guarded("annulus circuits honeycomb A(L(1),L(2))", [&] {
    LatticePatch p = build_patch(kHoneycomb, parse_region("A(L(1),L(2))"));
    const int m = p.num_edges();
    long long bad = 0;
    EdgeConfig all(m, true), none(m, false);
    bad += !circuit(p, all, GraphSide::primal);
    bad += circuit(p, none, GraphSide::primal);
    bad += circuit(p, none, GraphSide::dual);
    bad += !circuit(p, all, GraphSide::dual);
    Rng rng = make_stream(0x63697263, 0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
      double density = uniform01(rng);
      EdgeConfig s(m);
      for (EdgeId e = 0; e < m; ++e) s.set(e, uniform01(rng) < density);
      EdgeConfig more = s;
      more.set(static_cast<int>(uniform_below(rng, m)), true);
      bad += circuit(p, s, GraphSide::primal) && !circuit(p, more, GraphSide::primal);
      bad += circuit(p, s, GraphSide::dual) && !circuit(p, more, GraphSide::dual);
    }
    return Outcome{static_cast<double>(bad), bad == 0,
                   fmt("%d edges, %d subsets, extreme and monotonicity violations %lld", m, trials, bad)};
  });
}

// -------------------------------------------------------------- monotonicity

template <class Real>
Outcome nested_variance(const NestedPair& np, const char* c, const EnumerationOptions& opts) {
  EdgeWeight w = EdgeWeight::parse(c);
  auto ds = enumerate_heights<Real>(Model::uniform(np.small.graph, w),
                                    pm1_bc(np.small.graph.num_vertices(), np.small.boundary), opts);
  auto dl = enumerate_heights<Real>(Model::uniform(np.large.graph, w),
                                    pm1_bc(np.large.graph.num_vertices(), np.large.boundary), opts);
  double worst = 0;
  int bad = 0;
  for (VertexId x = 0; x < np.small.graph.num_vertices(); ++x) {
    Real a = marginal_stats(ds, x).second_moment;
    Real b = marginal_stats(dl, np.small.host_vertex[x]).second_moment;
    if (b < a) {
      ++bad;
      worst = std::max(worst, to_double(a - b));
    }
  }
  return {worst, bad == 0, fmt("%s, %d vertices compared, %d decreases", mode<Real>(), np.small.graph.num_vertices(), bad)};
}

template <class Real>
Outcome log_concavity(const Instance& in, const EnumerationOptions& opts) {
  auto d = enumerate_heights<Real>(in.model, in.xi, opts);
  int bad = 0;
  for (VertexId x = 0; x < in.model.num_vertices(); ++x) bad += !is_log_concave(marginal_stats(d, x).pmf);
  return {static_cast<double>(bad), bad == 0, fmt("%d vertices, %d not log-concave", in.model.num_vertices(), bad)};
}

void monotonicity(VerifyReport& report, const VerifyOptions& options, const EnumerationOptions& opts) {
  Recorder r(report, "monotonicity", options);
  for (const NestedPair& np : nested_corpus())
    for (const char* c : {"1", "3/2", "2"})
      r.guarded("nested variance " + np.name + " c=" + c,
                [&] { return nested_variance<Rational>(np, c, opts); });
  for (const NestedPair& np : nested_corpus())
    r.guarded("nested variance " + np.name + " c=sqrt2", [&] { return nested_variance<double>(np, "sqrt2", opts); });
  for (const Instance& in : oracle_corpus())
    r.guarded("log-concave " + in.name, [&] {
      return dispatch(in.rational, [&](auto tag) { return log_concavity<decltype(tag)>(in, opts); });
    });
}

// ----------------------------------------------------------------- structure

template <class Real>
Outcome structure_instance(const Instance& in, const EnumerationOptions& opts) {
  const FiniteGraph& g = in.model.graph();
  auto d = enumerate_heights<Real>(in.model, in.xi, opts);
  Extensions ext = extremal_extensions(g, in.xi);
  int problems = 0;
  std::vector<std::string> notes;
  // Normalisation.
  Real total = d.total();
  if (!tv_ok(Real(abs_value(total - Real(1))))) ++problems, notes.push_back("normalisation");
  // Extremal bounds hold and are attained.
  bool bounds = true, min_seen = false, max_seen = false;
  for (const auto& h : d.configs) {
    for (VertexId x = 0; x < g.num_vertices(); ++x) bounds = bounds && ext.min[x] <= h[x] && h[x] <= ext.max[x];
    min_seen = min_seen || h == ext.min;
    max_seen = max_seen || h == ext.max;
  }
  if (!bounds || !min_seen || !max_seen) ++problems, notes.push_back("extremal extensions");
  // Sign symmetry.
  int centre = in.shape == BcShape::pm1 ? 0 : in.shape == BcShape::const1 ? 2 : -1000;
  if (centre != -1000) {
    auto reflected = push_forward(d, [centre](const HeightField& h) {
      HeightField o = h;
      for (int& v : o.values) v = centre - v;
      return o;
    });
    if (!tv_ok(tv_distance(d, reflected))) ++problems, notes.push_back("symmetry");
  }
  // Explicit climbing path from min to max.
  HeightField h = ext.min;
  for (VertexId v : climb_path(g, in.xi)) {
    h[v] += 2;
    if (!validate_height(g, h) || (in.xi.constrained(v) && !in.xi.allows(v, h[v]))) {
      ++problems, notes.push_back("climb path");
      break;
    }
  }
  if (!(h == ext.max)) ++problems, notes.push_back("climb endpoint");
  std::string detail = fmt("%d configurations", d.size());
  for (auto& n : notes) detail += ", failed " + n;
  return {static_cast<double>(problems), problems == 0, detail};
}

Outcome admissibility_vs_enumeration(const EnumerationOptions& opts) {
  // All pairs of small value sets on the ends of paths and on a hexagon.
  std::vector<ValueSet> sets{{1}, {3}, {5}, {7}, {-3}, {1, 5}, {-1, 7}, {3, 9}, {-5, 5}};
  int cases = 0, mismatches = 0;
  struct G {
    FiniteGraph g;
    VertexId a, b;
  };
  for (const G& gr : {G{path_graph(2), 0, 1}, G{path_graph(3), 0, 2}, G{path_graph(4), 0, 3}, G{cycle_graph(6), 0, 3}})
    for (const auto& s : sets)
      for (const auto& t : sets) {
        BoundaryCondition xi(gr.g.num_vertices());
        xi.set(gr.a, s).set(gr.b, t);
        bool adm = is_admissible(gr.g, xi);
        bool nonempty = true;
        try {
          enumerate_heights<double>(Model::uniform(gr.g, EdgeWeight::parse("1")), xi, opts);
        } catch (const Inadmissible&) {
          nonempty = false;
        } catch (const InvalidArgument&) {
          nonempty = false;
        }
        ++cases;
        mismatches += adm != nonempty;
      }
  return {static_cast<double>(mismatches), mismatches == 0, fmt("%d boundary conditions, %d mismatches", cases, mismatches)};
}

void structure(VerifyReport& report, const VerifyOptions& options, const EnumerationOptions& opts) {
  Recorder r(report, "structure", options);
  for (const Instance& in : oracle_corpus())
    r.guarded("support, symmetry and climb " + in.name, [&] {
      return dispatch(in.rational, [&](auto tag) { return structure_instance<decltype(tag)>(in, opts); });
    });
  r.guarded("admissibility matches enumeration", [&] { return admissibility_vs_enumeration(opts); });
  r.guarded("abs order reflexive and transitive", [&] {
    FiniteGraph g = path_graph(5);
    auto fam = abs_family(g, {0, 4}, true);
    int bad = 0;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      bad += !abs_order_leq(fam[i], fam[i]);
      for (std::size_t j = 0; j < fam.size(); ++j)
        for (std::size_t k = 0; k < fam.size(); ++k)
          if (abs_order_leq(fam[i], fam[j]) && abs_order_leq(fam[j], fam[k]) && !abs_order_leq(fam[i], fam[k])) ++bad;
    }
    return Outcome{static_cast<double>(bad), bad == 0, fmt("%zu conditions, %d violations", fam.size(), bad)};
  });
}

}  // namespace

VerifyReport verify_suite(const VerifyOptions& options) {
  EnumerationOptions opts;
  opts.threads = options.threads;
  auto wanted = [&](const char* g) {
    return options.groups.empty() || std::find(options.groups.begin(), options.groups.end(), g) != options.groups.end();
  };
  for (const auto& g : options.groups)
    if (std::find(verify_groups().begin(), verify_groups().end(), g) == verify_groups().end())
      throw InvalidArgument("unknown verify group " + g);
  VerifyReport report;
  if (wanted("identities")) identities(report, options, opts);
  if (wanted("inequalities")) inequalities(report, options, opts);
  if (wanted("kernels")) kernels(report, options, opts);
  if (wanted("duality")) duality(report, options);
  if (wanted("monotonicity")) monotonicity(report, options, opts);
  if (wanted("structure")) structure(report, options, opts);
  return report;
}

}  // namespace lipschitz
