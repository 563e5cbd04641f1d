#include "lipschitz/oracle.hpp"

#include <cstdio>
#include <deque>
#include <future>
#include <limits>

#include "lipschitz/coupling.hpp"

namespace lipschitz {

namespace {

// Breadth-first elimination order from the support, so every later vertex
// has an earlier neighbour.
std::vector<VertexId> elimination_order(const FiniteGraph& g, const BoundaryCondition& xi) {
  std::vector<VertexId> order;
  std::vector<char> seen(g.num_vertices(), 0);
  std::deque<VertexId> queue;
  for (VertexId v : xi.support()) {
    seen[v] = 1;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (const Incidence& inc : g.incident(v))
      if (!seen[inc.neighbor]) {
        seen[inc.neighbor] = 1;
        queue.push_back(inc.neighbor);
      }
  }
  if (static_cast<int>(order.size()) != g.num_vertices())
    throw InvalidArgument("vertex not connected to the boundary support");
  return order;
}

template <class Real>
struct WeightClasses {
  std::vector<int> class_of;               // per edge
  std::vector<std::vector<Real>> powers;   // powers[class][k] = c^k
};

template <class Real>
WeightClasses<Real> weight_classes(const Model& m) {
  WeightClasses<Real> wc;
  std::vector<Real> values;
  for (EdgeId e = 0; e < m.num_edges(); ++e) {
    Real c;
    if constexpr (std::is_same_v<Real, Rational>) {
      if (!m.weight(e).exact) throw InvalidArgument("rational enumeration needs rational edge weights");
      c = *m.weight(e).exact;
    } else {
      c = m.c(e);
    }
    auto it = std::find(values.begin(), values.end(), c);
    if (it == values.end()) {
      wc.class_of.push_back(static_cast<int>(values.size()));
      values.push_back(c);
    } else {
      wc.class_of.push_back(static_cast<int>(it - values.begin()));
    }
  }
  for (const Real& c : values) {
    std::vector<Real> pw{Real(1)};
    for (int k = 0; k < m.num_edges(); ++k) pw.push_back(pw.back() * c);
    wc.powers.push_back(std::move(pw));
  }
  return wc;
}

// Depth-first walk over integer labelings with |x(u) - x(v)| <= step on edges,
// a prescribed parity per vertex, per-vertex bounds and the ξ constraint.
struct Walker {
  const FiniteGraph& g;
  const BoundaryCondition& xi;
  std::vector<VertexId> order;
  std::vector<int> lo, hi;
  int step;
  long long cap;
  // Earlier neighbours (vertex, edge) of the vertex at each position.
  std::vector<std::vector<Incidence>> back;

  Walker(const FiniteGraph& graph, const BoundaryCondition& bc, std::vector<int> lower, std::vector<int> upper,
         int step_size, long long limit)
      : g(graph), xi(bc), lo(std::move(lower)), hi(std::move(upper)), step(step_size), cap(limit) {
    order = elimination_order(g, xi);
    std::vector<int> pos(g.num_vertices());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
    back.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      for (const Incidence& inc : g.incident(order[i]))
        if (inc.neighbor != order[i] && pos[inc.neighbor] < static_cast<int>(i)) back[i].push_back(inc);
  }

  std::vector<int> candidates(std::size_t i, const std::vector<int>& x) const {
    VertexId v = order[i];
    int a = lo[v], b = hi[v];
    for (const Incidence& inc : back[i]) {
      a = std::max(a, x[inc.neighbor] - step);
      b = std::min(b, x[inc.neighbor] + step);
    }
    std::vector<int> out;
    for (int k = a; k <= b; k += 2)
      if (xi.allows(v, k)) out.push_back(k);
    return out;
  }

  // Calls leaf(x) for every labeling extending the first-vertex value `first`.
  template <class Leaf>
  void run_from(int first, std::vector<int>& x, long long& count, Leaf&& leaf) const {
    x[order[0]] = first;
    recurse(1, x, count, leaf);
  }

  template <class Leaf>
  void recurse(std::size_t i, std::vector<int>& x, long long& count, Leaf& leaf) const {
    if (i == order.size()) {
      if (++count > cap) throw CapExceeded("enumeration exceeds the cap of " + std::to_string(cap) + " configurations");
      leaf(x);
      return;
    }
    for (int k : candidates(i, x)) {
      x[order[i]] = k;
      recurse(i + 1, x, count, leaf);
    }
  }
};

template <class Item, class MakeLeaf>
std::vector<Item> parallel_walk(const Walker& w, int threads, MakeLeaf make_leaf) {
  std::vector<int> firsts = w.candidates(0, std::vector<int>(w.g.num_vertices(), 0));
  auto task = [&](std::size_t begin, std::size_t end) {
    std::vector<Item> items;
    std::vector<int> x(w.g.num_vertices(), 0);
    long long count = 0;
    auto leaf = make_leaf(items);
    for (std::size_t k = begin; k < end; ++k) w.run_from(firsts[k], x, count, leaf);
    return items;
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(firsts.size())));
  if (threads == 1) return task(0, firsts.size());
  std::vector<std::future<std::vector<Item>>> parts;
  std::size_t chunk = (firsts.size() + threads - 1) / threads;
  for (std::size_t b = 0; b < firsts.size(); b += chunk)
    parts.push_back(std::async(std::launch::async, task, b, std::min(firsts.size(), b + chunk)));
  std::vector<Item> all;
  for (auto& f : parts) {
    auto part = f.get();
    std::move(part.begin(), part.end(), std::back_inserter(all));
  }
  if (static_cast<long long>(all.size()) > w.cap)
    throw CapExceeded("enumeration exceeds the cap of " + std::to_string(w.cap) + " configurations");
  return all;
}

}  // namespace

template <class Real>
HeightDistribution<Real> enumerate_heights(const Model& model, const BoundaryCondition& xi,
                                           const EnumerationOptions& opts) {
  const FiniteGraph& g = model.graph();
  Extensions ext = extremal_extensions(g, xi);
  Walker w(g, xi, ext.min.values, ext.max.values, 2, opts.cap);
  auto wc = weight_classes<Real>(model);
  using Item = std::pair<HeightField, Real>;
  auto items = parallel_walk<Item>(w, opts.threads, [&](std::vector<Item>& out) {
    return [&out, &g, &wc](const std::vector<int>& x) {
      std::vector<int> flat(wc.powers.size(), 0);
      for (EdgeId e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        if (x[ed.u] == x[ed.v]) ++flat[wc.class_of[e]];
      }
      Real weight = 1;
      for (std::size_t c = 0; c < flat.size(); ++c)
        if (flat[c]) weight *= wc.powers[c][flat[c]];
      out.emplace_back(HeightField(x), weight);
    };
  });
  if (items.empty()) throw Inadmissible("no height function satisfies the boundary condition");
  return HeightDistribution<Real>::from_weights(std::move(items));
}

template <class Real>
std::vector<Real> bernoulli_p(const Model& model) {
  std::vector<Real> p;
  for (EdgeId e = 0; e < model.num_edges(); ++e) {
    if constexpr (std::is_same_v<Real, Rational>) {
      if (!model.weight(e).exact) throw InvalidArgument("rational p needs rational edge weights");
      p.push_back(Rational(1) - Rational(1) / *model.weight(e).exact);
    } else {
      p.push_back(1.0 - 1.0 / model.c(e));
    }
  }
  return p;
}

template <class Real>
JointDistribution<Real> enumerate_joint(const Model& model, const BoundaryCondition& xi,
                                        const EnumerationOptions& opts) {
  auto heights = enumerate_heights<Real>(model, xi, opts);
  auto p = bernoulli_p<Real>(model);
  std::vector<EdgeId> random;
  for (EdgeId e = 0; e < model.num_edges(); ++e)
    if (p[e] != 0) random.push_back(e);
  if (random.size() >= 62 || (static_cast<long long>(heights.size()) << random.size()) > opts.cap)
    throw CapExceeded("joint enumeration exceeds the configuration cap");
  const std::uint64_t masks = std::uint64_t(1) << random.size();
  std::vector<std::pair<JointConfig, Real>> items;
  items.reserve(heights.size() * masks);
  std::vector<Real> mask_prob(masks);
  std::vector<EdgeConfig> mask_config(masks, EdgeConfig(model.num_edges()));
  for (std::uint64_t m = 0; m < masks; ++m) {
    Real pr = 1;
    for (std::size_t k = 0; k < random.size(); ++k) {
      bool open = (m >> k) & 1;
      pr *= open ? p[random[k]] : Real(1) - p[random[k]];
      mask_config[m].set(random[k], open);
    }
    mask_prob[m] = pr;
  }
  for (int i = 0; i < heights.size(); ++i)
    for (std::uint64_t m = 0; m < masks; ++m)
      items.emplace_back(JointConfig{heights.configs[i], mask_config[m]}, heights.probs[i] * mask_prob[m]);
  auto d = JointDistribution<Real>::from_weights(std::move(items));
  d.partition = heights.partition;
  return d;
}

template <class Real>
EdgeDistribution<Real> enumerate_fk(const FiniteGraph& g, const std::vector<Real>& p,
                                    const std::vector<char>& forced_open, const std::vector<VertexId>& wired,
                                    const EnumerationOptions& opts) {
  if (static_cast<int>(p.size()) != g.num_edges()) throw InvalidArgument("p table does not match edges");
  auto forced = [&](EdgeId e) { return !forced_open.empty() && forced_open[e]; };
  // Forced edges contribute a constant factor and are left out of the weight;
  // free edges with p = 0 are closed almost surely.
  std::vector<EdgeId> random;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (!forced(e) && p[e] != 0) random.push_back(e);
  if (random.size() >= 62 || (std::int64_t(1) << random.size()) > opts.cap)
    throw CapExceeded("FK enumeration exceeds the configuration cap");
  const std::uint64_t masks = std::uint64_t(1) << random.size();
  std::vector<std::pair<EdgeConfig, Real>> items;
  items.reserve(masks);
  DisjointSets sets(g.num_vertices());
  for (std::uint64_t m = 0; m < masks; ++m) {
    EdgeConfig w(g.num_edges());
    Real weight = 1;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (forced(e)) w.set(e, true);
    for (std::size_t k = 0; k < random.size(); ++k) {
      bool open = (m >> k) & 1;
      w.set(random[k], open);
      weight *= open ? p[random[k]] : Real(1) - p[random[k]];
    }
    sets.reset(g.num_vertices());
    for (std::size_t k = 1; k < wired.size(); ++k) sets.unite(wired[0], wired[k]);
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (w[e]) sets.unite(g.edge(e).u, g.edge(e).v);
    int clusters = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) clusters += sets.find(v) == v;
    for (int k = 0; k < clusters; ++k) weight *= 2;
    items.emplace_back(std::move(w), weight);
  }
  return EdgeDistribution<Real>::from_weights(std::move(items));
}

template <class Real>
HeightDistribution<Real> enumerate_homomorphisms(const FiniteGraph& g, const std::vector<int>& parity,
                                                 const BoundaryCondition& xi, const EnumerationOptions& opts) {
  if (static_cast<int>(parity.size()) != g.num_vertices()) throw InvalidArgument("parity table size mismatch");
  for (const Edge& e : g.edges())
    if (parity[e.u] == parity[e.v]) throw InvalidArgument("homomorphism parity labels are not a proper 2-colouring");
  for (VertexId v : xi.support())
    for (int k : xi.values(v))
      if (((k % 2) + 2) % 2 != parity[v]) throw InvalidArgument("boundary value of the wrong parity");
  // Bounds from the raw extremes of the boundary sets (not necessarily tight).
  const int n = g.num_vertices();
  std::vector<int> lo(n, std::numeric_limits<int>::min() / 4), hi(n, std::numeric_limits<int>::max() / 4);
  for (VertexId v : xi.support()) {
    auto d = bfs_distances(g, std::span<const VertexId>(&v, 1));
    for (VertexId x = 0; x < n; ++x) {
      if (d[x] == kUnreachable) continue;
      lo[x] = std::max(lo[x], xi.values(v).front() - d[x]);
      hi[x] = std::min(hi[x], xi.values(v).back() + d[x]);
    }
  }
  for (VertexId x = 0; x < n; ++x) {
    if (((lo[x] % 2) + 2) % 2 != parity[x]) ++lo[x];
    if (((hi[x] % 2) + 2) % 2 != parity[x]) --hi[x];
  }
  Walker w(g, xi, lo, hi, 1, opts.cap);
  using Item = std::pair<HeightField, Real>;
  auto items = parallel_walk<Item>(w, opts.threads, [&](std::vector<Item>& out) {
    return [&out](const std::vector<int>& x) { out.emplace_back(HeightField(x), Real(1)); };
  });
  if (items.empty()) throw Inadmissible("no homomorphism satisfies the boundary condition");
  return HeightDistribution<Real>::from_weights(std::move(items));
}

namespace {

std::string prob_text(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}
std::string prob_text(const Rational& p) { return p.get_str(); }

std::string heights_text(const HeightField& h) {
  std::string s;
  for (int i = 0; i < h.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(h[i]);
  }
  return s;
}

}  // namespace

template <class Real>
void dump(std::ostream& os, const HeightDistribution<Real>& d) {
  for (int i = 0; i < d.size(); ++i) os << heights_text(d.configs[i]) << " | " << prob_text(d.probs[i]) << '\n';
}

template <class Real>
void dump(std::ostream& os, const JointDistribution<Real>& d) {
  for (int i = 0; i < d.size(); ++i)
    os << heights_text(d.configs[i].h) << " | " << d.configs[i].b.to_string() << " | " << prob_text(d.probs[i])
       << '\n';
}

template <class Real>
void dump(std::ostream& os, const EdgeDistribution<Real>& d) {
  for (int i = 0; i < d.size(); ++i) os << d.configs[i].to_string() << " | " << prob_text(d.probs[i]) << '\n';
}

#define LIPSCHITZ_INSTANTIATE(Real)                                                                              \
  template HeightDistribution<Real> enumerate_heights<Real>(const Model&, const BoundaryCondition&,              \
                                                            const EnumerationOptions&);                          \
  template JointDistribution<Real> enumerate_joint<Real>(const Model&, const BoundaryCondition&,                \
                                                         const EnumerationOptions&);                             \
  template EdgeDistribution<Real> enumerate_fk<Real>(const FiniteGraph&, const std::vector<Real>&,              \
                                                     const std::vector<char>&, const std::vector<VertexId>&,     \
                                                     const EnumerationOptions&);                                 \
  template HeightDistribution<Real> enumerate_homomorphisms<Real>(const FiniteGraph&, const std::vector<int>&,  \
                                                                  const BoundaryCondition&,                      \
                                                                  const EnumerationOptions&);                    \
  template std::vector<Real> bernoulli_p<Real>(const Model&);                                                    \
  template void dump<Real>(std::ostream&, const HeightDistribution<Real>&);                                      \
  template void dump<Real>(std::ostream&, const JointDistribution<Real>&);                                       \
  template void dump<Real>(std::ostream&, const EdgeDistribution<Real>&);

LIPSCHITZ_INSTANTIATE(double)
LIPSCHITZ_INSTANTIATE(Rational)

}  // namespace lipschitz
