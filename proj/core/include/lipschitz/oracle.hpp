#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lipschitz/edge_config.hpp"
#include "lipschitz/errors.hpp"
#include "lipschitz/heights.hpp"

namespace lipschitz {

struct JointConfig {
  HeightField h;
  EdgeConfig b;
  friend auto operator<=>(const JointConfig&, const JointConfig&) = default;
  friend bool operator==(const JointConfig&, const JointConfig&) = default;
};

inline double abs_value(double x) { return std::abs(x); }
inline Rational abs_value(const Rational& x) { return abs(x); }

// Explicit probability table; configurations sorted and distinct.
template <class Config, class Real>
struct ExactDistribution {
  std::vector<Config> configs;
  std::vector<Real> probs;
  Real partition = 1;  // Z of the unnormalised weights this table came from

  int size() const { return static_cast<int>(configs.size()); }

  Real probability(const Config& c) const {
    auto it = std::lower_bound(configs.begin(), configs.end(), c);
    if (it == configs.end() || !(*it == c)) return Real(0);
    return probs[it - configs.begin()];
  }

  Real total() const {
    Real s = 0;
    for (const Real& p : probs) s += p;
    return s;
  }

  // Normalises (configuration, weight) pairs, merging duplicates.
  static ExactDistribution from_weights(std::vector<std::pair<Config, Real>> items) {
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    ExactDistribution d;
    Real z = 0;
    for (auto& [c, w] : items) {
      if (w == 0) continue;
      z += w;
      if (!d.configs.empty() && d.configs.back() == c) {
        d.probs.back() += w;
      } else {
        d.configs.push_back(std::move(c));
        d.probs.push_back(w);
      }
    }
    if (z == 0) throw InvalidArgument("distribution with zero total weight");
    for (Real& p : d.probs) p /= z;
    d.partition = z;
    return d;
  }
};

template <class Real>
using HeightDistribution = ExactDistribution<HeightField, Real>;
template <class Real>
using JointDistribution = ExactDistribution<JointConfig, Real>;
template <class Real>
using EdgeDistribution = ExactDistribution<EdgeConfig, Real>;

struct EnumerationOptions {
  long long cap = 10'000'000;
  int threads = 1;
};

template <class Real>
HeightDistribution<Real> enumerate_heights(const Model& model, const BoundaryCondition& xi,
                                           const EnumerationOptions& opts = {});

// (h, B) with B independent Bernoulli(1 - 1/c_e); ω is derived by omega_from.
template <class Real>
JointDistribution<Real> enumerate_joint(const Model& model, const BoundaryCondition& xi,
                                        const EnumerationOptions& opts = {});

// FK-Ising (q = 2): weight 2^{#clusters} prod p^open (1-p)^closed over
// configurations containing forced_open, with the wired vertices identified.
template <class Real>
EdgeDistribution<Real> enumerate_fk(const FiniteGraph& g, const std::vector<Real>& p,
                                    const std::vector<char>& forced_open = {},
                                    const std::vector<VertexId>& wired = {},
                                    const EnumerationOptions& opts = {});

// Uniform graph homomorphisms to Z: |g(u) - g(v)| = 1 on edges, g odd where
// parity is 1 and even where it is 0, and g(v) ∈ ξ(v) on the support.
template <class Real>
HeightDistribution<Real> enumerate_homomorphisms(const FiniteGraph& g, const std::vector<int>& parity,
                                                 const BoundaryCondition& xi, const EnumerationOptions& opts = {});

template <class Real>
std::vector<Real> bernoulli_p(const Model& model);

template <class Config, class Real, class Pred>
Real event_probability(const ExactDistribution<Config, Real>& d, Pred&& pred) {
  Real s = 0;
  for (int i = 0; i < d.size(); ++i)
    if (pred(d.configs[i])) s += d.probs[i];
  return s;
}

template <class Config, class Real, class Pred>
ExactDistribution<Config, Real> condition(const ExactDistribution<Config, Real>& d, Pred&& pred) {
  std::vector<std::pair<Config, Real>> items;
  for (int i = 0; i < d.size(); ++i)
    if (pred(d.configs[i])) items.emplace_back(d.configs[i], d.probs[i]);
  if (items.empty()) throw InvalidArgument("conditioning on an event of probability zero");
  return ExactDistribution<Config, Real>::from_weights(std::move(items));
}

// Law of f(X) for X ~ d.
template <class Config, class Real, class F>
auto push_forward(const ExactDistribution<Config, Real>& d, F&& f) {
  using Out = std::decay_t<decltype(f(d.configs[0]))>;
  std::vector<std::pair<Out, Real>> items;
  items.reserve(d.size());
  for (int i = 0; i < d.size(); ++i) items.emplace_back(f(d.configs[i]), d.probs[i]);
  return ExactDistribution<Out, Real>::from_weights(std::move(items));
}

// Total variation distance (half the L1 distance).
template <class Config, class Real>
Real tv_distance(const ExactDistribution<Config, Real>& a, const ExactDistribution<Config, Real>& b) {
  Real s = 0;
  int i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a.configs[i] < b.configs[j])) {
      s += abs_value(a.probs[i++]);
    } else if (i >= a.size() || b.configs[j] < a.configs[i]) {
      s += abs_value(b.probs[j++]);
    } else {
      s += abs_value(a.probs[i++] - b.probs[j++]);
    }
  }
  return s / 2;
}

template <class Real>
struct MarginalStats {
  std::map<int, Real> pmf;
  Real mean = 0;
  Real variance = 0;
  Real second_moment = 0;
};

template <class Config, class Real, class Value>
MarginalStats<Real> marginal_stats(const ExactDistribution<Config, Real>& d, Value&& value) {
  MarginalStats<Real> m;
  for (int i = 0; i < d.size(); ++i) {
    int k = value(d.configs[i]);
    m.pmf[k] += d.probs[i];
    m.mean += d.probs[i] * k;
    m.second_moment += d.probs[i] * k * k;
  }
  m.variance = m.second_moment - m.mean * m.mean;
  return m;
}

template <class Real>
MarginalStats<Real> marginal_stats(const HeightDistribution<Real>& d, VertexId x) {
  if (d.size() == 0 || x < 0 || x >= d.configs[0].size()) throw InvalidArgument("vertex absent from distribution");
  return marginal_stats(d, [x](const HeightField& h) { return h[x]; });
}

template <class Real>
MarginalStats<Real> marginal_stats(const JointDistribution<Real>& d, VertexId x) {
  if (d.size() == 0 || x < 0 || x >= d.configs[0].h.size()) throw InvalidArgument("vertex absent from distribution");
  return marginal_stats(d, [x](const JointConfig& c) { return c.h[x]; });
}

// p(k)^2 >= p(k-2) p(k+2) on the support (which must be a contiguous odd range).
template <class Real>
bool is_log_concave(const std::map<int, Real>& pmf) {
  if (pmf.empty()) return true;
  int lo = pmf.begin()->first, hi = pmf.rbegin()->first;
  if (static_cast<int>(pmf.size()) != (hi - lo) / 2 + 1) return false;
  for (int k = lo + 2; k <= hi - 2; k += 2)
    if (pmf.at(k) * pmf.at(k) < pmf.at(k - 2) * pmf.at(k + 2)) return false;
  return true;
}

template <class Config>
struct Event {
  std::string name;
  std::function<bool(const Config&)> holds;
};

// Bit table of events over the support of a distribution, for fast pair probabilities.
template <class Config>
struct EventTable {
  int words = 0;
  std::vector<std::vector<std::uint64_t>> bits;
  std::vector<double> probs;

  template <class Real>
  EventTable(const ExactDistribution<Config, Real>& d, const std::vector<Event<Config>>& events) {
    words = (d.size() + 63) / 64;
    for (int i = 0; i < d.size(); ++i) probs.push_back(to_double(d.probs[i]));
    bits.assign(events.size(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t e = 0; e < events.size(); ++e)
      for (int i = 0; i < d.size(); ++i)
        if (events[e].holds(d.configs[i])) bits[e][i / 64] |= std::uint64_t(1) << (i % 64);
  }

  double probability(std::size_t e) const { return sum(bits[e]); }
  double joint(std::size_t a, std::size_t b) const {
    std::vector<std::uint64_t> both(words);
    for (int w = 0; w < words; ++w) both[w] = bits[a][w] & bits[b][w];
    return sum(both);
  }

 private:
  double sum(const std::vector<std::uint64_t>& row) const {
    double s = 0;
    for (int w = 0; w < words; ++w) {
      std::uint64_t x = row[w];
      while (x) {
        int bit = __builtin_ctzll(x);
        s += probs[w * 64 + bit];
        x &= x - 1;
      }
    }
    return s;
  }
};

struct PairViolation {
  std::string a;
  std::string b;
  double gap;  // negative: the inequality fails by this much
};

struct FkgReport {
  long long pairs = 0;
  double min_gap = 0;  // min over pairs of P[A∩B] - P[A]P[B]
  std::vector<PairViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Positive association over all pairs of a family of increasing events.
template <class Config, class Real>
FkgReport check_fkg(const ExactDistribution<Config, Real>& d, const std::vector<Event<Config>>& events,
                    double tol = 1e-12) {
  EventTable<Config> table(d, events);
  std::vector<double> p(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) p[e] = table.probability(e);
  FkgReport r;
  r.min_gap = 1.0;
  for (std::size_t a = 0; a < events.size(); ++a)
    for (std::size_t b = a; b < events.size(); ++b) {
      double gap = table.joint(a, b) - p[a] * p[b];
      ++r.pairs;
      r.min_gap = std::min(r.min_gap, gap);
      if (gap < -tol) r.violations.push_back({events[a].name, events[b].name, gap});
    }
  return r;
}

struct DominanceEntry {
  std::string event;
  double pa;
  double pb;
  bool ok;
};

struct DominanceReport {
  std::vector<DominanceEntry> entries;
  // Per-vertex CDF comparisons P_A[X_v >= k] <= P_B[X_v >= k] that failed.
  std::vector<DominanceEntry> cdf_violations;
  int violations() const {
    int n = static_cast<int>(cdf_violations.size());
    for (const auto& e : entries) n += !e.ok;
    return n;
  }
  bool ok() const { return violations() == 0; }
};

// Records P_A[E] <= P_B[E] for every event; `site_values` (optional) maps a
// configuration to per-vertex values for the single-vertex CDF comparison.
template <class Config, class RealA, class RealB>
DominanceReport check_dominance(const ExactDistribution<Config, RealA>& a, const ExactDistribution<Config, RealB>& b,
                                const std::vector<Event<Config>>& events,
                                std::function<std::vector<int>(const Config&)> site_values = {},
                                double tol = 1e-12) {
  DominanceReport r;
  for (const auto& ev : events) {
    double pa = to_double(event_probability(a, ev.holds));
    double pb = to_double(event_probability(b, ev.holds));
    r.entries.push_back({ev.name, pa, pb, pa <= pb + tol});
  }
  if (site_values && a.size() > 0 && b.size() > 0) {
    auto sample_a = site_values(a.configs[0]);
    auto sample_b = site_values(b.configs[0]);
    if (sample_a.size() != sample_b.size()) throw InvalidArgument("dominance check on mismatched vertex sets");
    auto cdf = [&](const auto& d, std::size_t v) {
      std::map<int, double> m;
      for (int i = 0; i < d.size(); ++i) m[site_values(d.configs[i])[v]] += to_double(d.probs[i]);
      return m;
    };
    for (std::size_t v = 0; v < sample_a.size(); ++v) {
      auto ma = cdf(a, v), mb = cdf(b, v);
      std::map<int, int> keys;
      for (auto& kv : ma) keys[kv.first];
      for (auto& kv : mb) keys[kv.first];
      for (auto& [k, unused] : keys) {
        double ta = 0, tb = 0;
        for (auto& [x, p] : ma) ta += x >= k ? p : 0;
        for (auto& [x, p] : mb) tb += x >= k ? p : 0;
        if (ta > tb + tol)
          r.cdf_violations.push_back({"X" + std::to_string(v) + ">=" + std::to_string(k), ta, tb, false});
      }
    }
  }
  return r;
}

// Unions and intersections of all pairs of base events, appended after the
// base events (at most `limit` derived events, in a fixed order).
template <class Config>
std::vector<Event<Config>> depth_two_family(const std::vector<Event<Config>>& base, std::size_t limit = 4000) {
  std::vector<Event<Config>> out = base;
  std::size_t added = 0;
  for (std::size_t i = 0; i < base.size() && added < limit; ++i)
    for (std::size_t j = i + 1; j < base.size() && added < limit; ++j) {
      auto a = base[i].holds, b = base[j].holds;
      out.push_back({"(" + base[i].name + "&" + base[j].name + ")",
                     [a, b](const Config& c) { return a(c) && b(c); }});
      out.push_back({"(" + base[i].name + "|" + base[j].name + ")",
                     [a, b](const Config& c) { return a(c) || b(c); }});
      added += 2;
    }
  return out;
}

// {h(x) >= k} for every vertex and every k splitting the support of the given distributions.
template <class Config>
std::vector<Event<Config>> threshold_events(const std::vector<std::vector<int>>& value_ranges,
                                            std::function<int(const Config&, VertexId)> value,
                                            const std::string& label = "h") {
  std::vector<Event<Config>> out;
  for (VertexId x = 0; x < static_cast<VertexId>(value_ranges.size()); ++x) {
    const auto& vals = value_ranges[x];
    for (std::size_t i = 1; i < vals.size(); ++i) {
      int k = vals[i];
      out.push_back({label + "(" + std::to_string(x) + ")>=" + std::to_string(k),
                     [value, x, k](const Config& c) { return value(c, x) >= k; }});
    }
  }
  return out;
}

// Sorted table "config probability" for golden comparisons.
template <class Real>
void dump(std::ostream& os, const HeightDistribution<Real>& d);
template <class Real>
void dump(std::ostream& os, const JointDistribution<Real>& d);
template <class Real>
void dump(std::ostream& os, const EdgeDistribution<Real>& d);

}  // namespace lipschitz
