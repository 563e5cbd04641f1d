#include "lipschitz/mcmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <map>

#include "lipschitz/errors.hpp"

namespace lipschitz {

void SamplerConfig::validate() const {
  if (sweeps < 0 || burnin < 0 || sample_cap < 0) throw InvalidArgument("sampler counts must be nonnegative");
  if (thin < 1) throw InvalidArgument("thinning must be at least 1");
  if (cluster_period < -1) throw InvalidArgument("cluster period must be >= 0 or -1 (auto)");
  if (batches < 2) throw InvalidArgument("at least two batches are needed");
}

long long auto_cluster_period(const Model& model) {
  for (EdgeId e = 0; e < model.num_edges(); ++e)
    if (model.c(e) > 2.0) return 1;
  return 4;
}

std::vector<VertexId> free_sites(const Model& model, const BoundaryCondition& xi) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < model.num_vertices(); ++v)
    if (!xi.constrained(v) || xi.values(v).size() > 1) out.push_back(v);
  return out;
}

ChainState::ChainState(const Model& model, const BoundaryCondition& xi, Rng rng, const HeightField* init)
    : model_(&model), xi_(&xi), rng_(std::move(rng)) {
  if (xi.num_vertices() != model.num_vertices()) throw InvalidArgument("boundary condition size mismatch");
  h_ = init ? *init : extremal_extensions(model.graph(), xi).min;
  const FiniteGraph& g = model.graph();
  nbrs_.resize(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    for (const Incidence& inc : g.incident(v))
      if (inc.neighbor != v) nbrs_[v].push_back({inc.neighbor, inc.edge, model.c(inc.edge)});
  for (EdgeId e = 0; e < g.num_edges(); ++e) p_.push_back(1.0 - 1.0 / model.c(e));
  free_ = ::lipschitz::free_sites(model, xi);
  refresh_b();
  validate();
}

void ChainState::refresh_b() {
  const FiniteGraph& g = model_->graph();
  b_ = EdgeConfig(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) b_.set(e, uniform01(rng_) < p_[e]);
  omega_ = omega_from(g, h_, b_);
}

void ChainState::heat_bath_site(VertexId x) {
  int lo = std::numeric_limits<int>::min(), hi = std::numeric_limits<int>::max();
  for (const Neighbor& n : nbrs_[x]) {
    lo = std::max(lo, h_[n.y] - 2);
    hi = std::min(hi, h_[n.y] + 2);
  }
  if (nbrs_[x].empty()) throw InvalidArgument("isolated site has no finite conditional law");
  int values[3];
  double weights[3];
  int m = 0;
  double total = 0.0;
  for (int k = lo; k <= hi && m < 3; k += 2) {
    if (xi_->constrained(x) && !xi_->allows(x, k)) continue;
    double w = 1.0;
    for (const Neighbor& n : nbrs_[x])
      if (h_[n.y] == k) w *= n.c;
    values[m] = k;
    weights[m] = w;
    total += w;
    ++m;
  }
  if (m == 0) throw CorruptState("no admissible value at vertex " + std::to_string(x));
  double u = uniform01(rng_) * total;
  int pick = m - 1;
  for (int i = 0; i < m - 1; ++i) {
    if (u < weights[i]) {
      pick = i;
      break;
    }
    u -= weights[i];
  }
  h_[x] = values[pick];
  for (const Neighbor& n : nbrs_[x]) omega_.set(n.e, omega_edge(h_[x], h_[n.y], b_[n.e]));
}

void ChainState::sweep(SiteOrder order) {
  if (order == SiteOrder::fixed) {
    for (VertexId x : free_) heat_bath_site(x);
  } else {
    std::vector<VertexId> sites = free_;
    for (std::size_t i = sites.size(); i > 1; --i) std::swap(sites[i - 1], sites[uniform_below(rng_, i)]);
    for (VertexId x : sites) heat_bath_site(x);
  }
  refresh_b();
  ++steps_;
#ifndef NDEBUG
  validate();
#endif
}

void ChainState::cluster_sweep() {
  const FiniteGraph& g = model_->graph();
  refresh_b();
  h_ = resample_signs(g, h_, omega_, *xi_, rng_);
  // B given (h, ω): forced to ω on flat ±1 edges, fresh elsewhere.
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    bool flat_one = h_[ed.u] == h_[ed.v] && std::abs(h_[ed.u]) == 1;
    double u = uniform01(rng_);
    b_.set(e, flat_one ? omega_[e] : u < p_[e]);
  }
  omega_ = omega_from(g, h_, b_);
#ifndef NDEBUG
  validate();
#endif
}

void ChainState::validate() const {
  const FiniteGraph& g = model_->graph();
  if (!validate_height(g, h_)) throw CorruptState("height field is not odd 2-Lipschitz");
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (xi_->constrained(v) && !xi_->allows(v, h_[v])) throw CorruptState("height field violates ξ");
  if (omega_ != omega_from(g, h_, b_)) throw CorruptState("cached ω out of date");
}

const ObservableStats& RunResult::operator[](const std::string& name) const {
  for (const auto& o : observables)
    if (o.name == name) return o;
  throw InvalidArgument("unknown observable " + name);
}

namespace {

struct ChainOutput {
  std::vector<BatchAccumulator> acc;
  std::vector<std::vector<double>> series;
  long long sweeps = 0;
};

ChainOutput run_chain(const Model& model, const BoundaryCondition& xi, const SamplerConfig& cfg,
                      const std::vector<Observable>& obs, bool keep_series, std::uint64_t stream) {
  long long period = cfg.cluster_period < 0 ? auto_cluster_period(model) : cfg.cluster_period;
  long long recorded = (cfg.sweeps + cfg.thin - 1) / cfg.thin;
  if (recorded > cfg.sample_cap) throw CapExceeded("requested samples exceed the sample cap");
  ChainOutput out;
  long long batch = std::max<long long>(1, recorded / cfg.batches);
  out.acc.assign(obs.size(), BatchAccumulator(batch));
  out.series.resize(obs.size());
  ChainState state(model, xi, make_stream(cfg.seed, stream));
  auto step = [&](long long t) {
    state.sweep(cfg.order);
    if (period > 0 && (t + 1) % period == 0) state.cluster_sweep();
  };
  long long t = 0;
  for (; t < cfg.burnin; ++t) step(t);
  for (long long s = 0; s < cfg.sweeps; ++s, ++t) {
    step(t);
    if (s % cfg.thin != 0) continue;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      double v = obs[i].value(state);
      out.acc[i].add(v);
      if (keep_series) out.series[i].push_back(v);
    }
  }
  out.sweeps = t;
  return out;
}

}  // namespace

RunResult run(const Model& model, const BoundaryCondition& xi, const SamplerConfig& config,
              const std::vector<Observable>& observables, bool keep_series, int chains, int threads) {
  config.validate();
  if (!is_admissible(model.graph(), xi)) throw Inadmissible("boundary condition is not admissible");
  if (config.sweeps == 0) throw InvalidArgument("no sweeps after burn-in: the sample series would be empty");
  chains = std::max(1, chains);
  threads = std::max(1, std::min(threads, chains));
  std::vector<ChainOutput> outs(chains);
  if (threads == 1) {
    for (int c = 0; c < chains; ++c) outs[c] = run_chain(model, xi, config, observables, keep_series, c);
  } else {
    // Chains are handed out in index order; each writes only its own slot.
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int c = next++; c < chains; c = next++) outs[c] = run_chain(model, xi, config, observables, keep_series, c);
    };
    std::vector<std::future<void>> pool;
    for (int w = 0; w < threads; ++w) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  }
  RunResult r;
  for (std::size_t i = 0; i < observables.size(); ++i) {
    ObservableStats s;
    s.name = observables[i].name;
    std::vector<BatchAccumulator> per_chain;
    for (auto& o : outs) {
      per_chain.push_back(o.acc[i]);
      if (keep_series) s.series.insert(s.series.end(), o.series[i].begin(), o.series[i].end());
    }
    s.estimate = combine(per_chain);
    r.observables.push_back(std::move(s));
  }
  for (auto& o : outs) r.sweeps += o.sweeps;
  return r;
}

RunResult torus_run(const LatticePatch& torus, const EdgeWeight& c, VertexId root, const SamplerConfig& config,
                    const std::vector<Observable>& observables, int chains, int threads) {
  if (!torus.torus) throw InvalidArgument("torus_run needs a torus patch");
  if (root < 0 || root >= torus.num_vertices()) throw InvalidArgument("root vertex out of range");
  Model model = Model::uniform(torus.graph, c);
  BoundaryCondition xi = pm1_bc(torus.num_vertices(), {root});
  return run(model, xi, config, observables, false, chains, threads);
}

RunResult torus_run(LatticeKind kind, int n, const EdgeWeight& c, VertexId root, const SamplerConfig& config,
                    const std::vector<Observable>& observables, int chains, int threads) {
  LatticePatch torus = build_patch(kind, Torus{n});
  return torus_run(torus, c, root, config, observables, chains, threads);
}

namespace {

template <class Real>
Real edge_c(const Model& m, EdgeId e) {
  if constexpr (std::is_same_v<Real, Rational>) {
    if (!m.weight(e).exact) throw InvalidArgument("rational kernel needs rational weights");
    return *m.weight(e).exact;
  } else {
    return m.c(e);
  }
}

}  // namespace

template <class Real>
std::vector<std::pair<int, Real>> heat_bath_conditional(const Model& model, const BoundaryCondition& xi,
                                                        const HeightField& h, VertexId x) {
  const FiniteGraph& g = model.graph();
  int lo = std::numeric_limits<int>::min(), hi = std::numeric_limits<int>::max();
  bool any = false;
  for (const Incidence& inc : g.incident(x)) {
    if (inc.neighbor == x) continue;
    any = true;
    lo = std::max(lo, h[inc.neighbor] - 2);
    hi = std::min(hi, h[inc.neighbor] + 2);
  }
  if (!any) throw InvalidArgument("isolated site has no finite conditional law");
  std::vector<std::pair<int, Real>> out;
  Real total = 0;
  for (int k = lo; k <= hi; k += 2) {
    if (xi.constrained(x) && !xi.allows(x, k)) continue;
    Real w = 1;
    for (const Incidence& inc : g.incident(x))
      if (inc.neighbor != x && h[inc.neighbor] == k) w *= edge_c<Real>(model, inc.edge);
    out.emplace_back(k, w);
    total += w;
  }
  if (out.empty()) throw CorruptState("no admissible value at vertex " + std::to_string(x));
  for (auto& kv : out) kv.second /= total;
  return out;
}

template <class Real>
HeightDistribution<Real> apply_site_kernel(const HeightDistribution<Real>& d, const Model& model,
                                           const BoundaryCondition& xi, VertexId x) {
  std::vector<std::pair<HeightField, Real>> items;
  items.reserve(d.size() * 2);
  for (int i = 0; i < d.size(); ++i) {
    for (auto& [k, p] : heat_bath_conditional<Real>(model, xi, d.configs[i], x)) {
      HeightField h = d.configs[i];
      h[x] = k;
      items.emplace_back(std::move(h), d.probs[i] * p);
    }
  }
  return HeightDistribution<Real>::from_weights(std::move(items));
}

template <class Real>
HeightDistribution<Real> apply_sweep_kernel(const HeightDistribution<Real>& d, const Model& model,
                                            const BoundaryCondition& xi, const std::vector<VertexId>& order) {
  HeightDistribution<Real> cur = d;
  for (VertexId x : order) cur = apply_site_kernel(cur, model, xi, x);
  return cur;
}

template <class Real>
HeightDistribution<Real> apply_cluster_kernel(const HeightDistribution<Real>& d, const Model& model,
                                              const BoundaryCondition& xi, long long cap) {
  const FiniteGraph& g = model.graph();
  const int n = g.num_vertices();
  auto p = bernoulli_p<Real>(model);
  long long visits = 0;
  // The new field depends on (h, B) only through |h| and the signed cluster
  // partition, so B-weights are pooled per (|h|, partition) first. A key is
  // |h| followed by cluster_of and the per-cluster forced signs.
  std::map<std::vector<int>, Real> pooled;
  std::map<std::vector<int>, Real> local;
  for (int i = 0; i < d.size(); ++i) {
    const HeightField& h = d.configs[i];
    // Only B on flat ±1 edges with p > 0 can change ω.
    std::vector<EdgeId> live;
    EdgeConfig b(g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      if (h[ed.u] == h[ed.v] && std::abs(h[ed.u]) == 1 && p[e] != 0) live.push_back(e);
    }
    if (live.size() >= 40) throw CapExceeded("cluster kernel: too many random edges");
    std::uint64_t masks = std::uint64_t(1) << live.size();
    visits += static_cast<long long>(masks);
    if (visits > cap) throw CapExceeded("cluster kernel exceeds the visit cap");
    local.clear();
    std::vector<int> key;
    for (std::uint64_t m = 0; m < masks; ++m) {
      Real pb = d.probs[i];
      for (std::size_t k = 0; k < live.size(); ++k) {
        bool open = (m >> k) & 1;
        b.set(live[k], open);
        pb *= open ? p[live[k]] : Real(1) - p[live[k]];
      }
      if (pb == 0) continue;
      ClusterPartition part = analyze_signs(g, h, omega_from(g, h, b), xi);
      key.clear();
      for (VertexId v = 0; v < n; ++v) key.push_back(std::abs(h[v]));
      key.insert(key.end(), part.cluster_of.begin(), part.cluster_of.end());
      key.insert(key.end(), part.forced_sign.begin(), part.forced_sign.end());
      local[key] += pb;
    }
    for (auto& [k, w] : local) pooled[k] += w;
  }
  std::map<HeightField, Real> out;
  for (const auto& [k, w] : pooled) {
    const int* abs_h = k.data();
    const int* cluster_of = k.data() + n;
    const int* forced = k.data() + 2 * n;
    const int count = static_cast<int>(k.size()) - 2 * n;
    std::vector<int> free;
    for (int c = 0; c < count; ++c)
      if (forced[c] == 0) free.push_back(c);
    if (free.size() >= 40) throw CapExceeded("cluster kernel: too many free clusters");
    std::uint64_t outcomes = std::uint64_t(1) << free.size();
    visits += static_cast<long long>(outcomes);
    if (visits > cap) throw CapExceeded("cluster kernel exceeds the visit cap");
    Real share = w / Real(static_cast<long>(outcomes));
    std::vector<int> sign(forced, forced + count);
    HeightField h(n, 0);
    for (std::uint64_t s = 0; s < outcomes; ++s) {
      for (std::size_t j = 0; j < free.size(); ++j) sign[free[j]] = ((s >> j) & 1) ? -1 : 1;
      for (VertexId v = 0; v < n; ++v) h[v] = sign[cluster_of[v]] * abs_h[v];
      out[h] += share;
    }
  }
  std::vector<std::pair<HeightField, Real>> items(out.begin(), out.end());
  return HeightDistribution<Real>::from_weights(std::move(items));
}

std::vector<VertexId> climb_path(const FiniteGraph& g, const BoundaryCondition& xi) {
  Extensions ext = extremal_extensions(g, xi);
  HeightField h = ext.min;
  std::vector<VertexId> moves;
  while (true) {
    VertexId best = -1;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      if (h[v] < ext.max[v] && (best < 0 || h[v] < h[best])) best = v;
    if (best < 0) break;
    if (xi.constrained(best) && !xi.allows(best, h[best] + 2))
      throw InvalidArgument("no monotone single-site path: ξ skips a value");
    h[best] += 2;
    if (!validate_height(g, h)) throw CorruptState("climb produced an invalid height field");
    moves.push_back(best);
  }
  return moves;
}

#define LIPSCHITZ_INSTANTIATE(Real)                                                                           \
  template std::vector<std::pair<int, Real>> heat_bath_conditional<Real>(                                    \
      const Model&, const BoundaryCondition&, const HeightField&, VertexId);                                  \
  template HeightDistribution<Real> apply_site_kernel<Real>(const HeightDistribution<Real>&, const Model&,    \
                                                            const BoundaryCondition&, VertexId);             \
  template HeightDistribution<Real> apply_sweep_kernel<Real>(const HeightDistribution<Real>&, const Model&,   \
                                                             const BoundaryCondition&,                        \
                                                             const std::vector<VertexId>&);                   \
  template HeightDistribution<Real> apply_cluster_kernel<Real>(const HeightDistribution<Real>&, const Model&, \
                                                               const BoundaryCondition&, long long);

LIPSCHITZ_INSTANTIATE(double)
LIPSCHITZ_INSTANTIATE(Rational)

}  // namespace lipschitz
