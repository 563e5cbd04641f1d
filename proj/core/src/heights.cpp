#include "lipschitz/heights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>

#include "lipschitz/errors.hpp"

namespace lipschitz {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidArgument("empty number");
  try {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      Rational q(s);
      q.canonicalize();
      return q;
    }
    bool negative = s[0] == '-';
    std::string digits = s.substr(negative ? 1 : 0);
    dot = digits.find('.');
    std::string whole = digits.substr(0, dot);
    std::string frac = digits.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos ||
        whole.find_first_not_of("0123456789") != std::string::npos || (whole.empty() && frac.empty()))
      throw InvalidArgument("bad decimal");
    mpz_class num((whole.empty() ? "0" : whole) + frac);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational q(num, den);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("cannot parse '" + s + "' as a rational number");
  }
}

std::string to_string(const Rational& q) { return q.get_str(); }

EdgeWeight EdgeWeight::of(const Rational& q) { return {q.get_d(), q}; }
EdgeWeight EdgeWeight::of(double x) { return {x, std::nullopt}; }

EdgeWeight EdgeWeight::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  auto root_term = [](std::string t) -> std::optional<double> {
    if (!t.starts_with("sqrt")) return std::nullopt;
    t = t.substr(4);
    if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
    return std::sqrt(std::stod(t));
  };
  EdgeWeight w;
  try {
    if (auto plus = s.find("+sqrt"); plus != std::string::npos) {
      w = of(parse_rational(s.substr(0, plus)).get_d() + *root_term(s.substr(plus + 1)));
    } else if (auto r = root_term(s)) {
      w = of(*r);
    } else if (s.find_first_of("eE") == std::string::npos) {
      w = of(parse_rational(s));
    } else {
      w = of(std::stod(s));
    }
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse edge weight '" + s + "'");
  }
  if (!(w.value >= 1.0)) throw InvalidArgument("edge weight must be at least 1, got '" + s + "'");
  return w;
}

std::string EdgeWeight::to_string() const {
  if (exact) return exact->get_str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Model::Model(FiniteGraph graph, std::vector<EdgeWeight> weights)
    : graph_(std::move(graph)), weights_(std::move(weights)) {
  if (static_cast<int>(weights_.size()) != graph_.num_edges())
    throw InvalidArgument("weight table does not match the edge count");
  for (const EdgeWeight& w : weights_) {
    if (!(w.value >= 1.0)) throw InvalidArgument("edge weights must satisfy c >= 1");
    log_c_.push_back(std::log(w.value));
    rational_ = rational_ && w.exact.has_value();
  }
}

Model Model::uniform(FiniteGraph graph, EdgeWeight c) {
  std::vector<EdgeWeight> w(graph.num_edges(), c);
  return Model(std::move(graph), std::move(w));
}

bool validate_height(const FiniteGraph& g, const HeightField& h) {
  if (h.size() != g.num_vertices()) return false;
  for (int v : h.values)
    if (v % 2 == 0) return false;
  for (const Edge& e : g.edges())
    if (std::abs(h[e.u] - h[e.v]) > 2) return false;
  return true;
}

int flat_edge_count(const FiniteGraph& g, const HeightField& h) {
  int flat = 0;
  for (const Edge& e : g.edges()) flat += h[e.u] == h[e.v];
  return flat;
}

double log_weight(const Model& m, const HeightField& h) {
  if (!validate_height(m, h)) throw InvalidArgument("invalid height function");
  double lw = 0.0;
  for (EdgeId e = 0; e < m.num_edges(); ++e) {
    const Edge& ed = m.graph().edge(e);
    if (h[ed.u] == h[ed.v]) lw += m.log_c(e);
  }
  return lw;
}

template <>
double weight<double>(const Model& m, const HeightField& h) {
  return std::exp(log_weight(m, h));
}

template <>
Rational weight<Rational>(const Model& m, const HeightField& h) {
  if (!m.is_rational()) throw InvalidArgument("exact weights need rational edge weights");
  if (!validate_height(m, h)) throw InvalidArgument("invalid height function");
  Rational w = 1;
  for (EdgeId e = 0; e < m.num_edges(); ++e) {
    const Edge& ed = m.graph().edge(e);
    if (h[ed.u] == h[ed.v]) w *= *m.weight(e).exact;
  }
  return w;
}

HeightField to_height(const std::vector<int>& f) {
  HeightField h;
  h.values.reserve(f.size());
  for (int x : f) h.values.push_back(2 * x + 1);
  return h;
}

std::vector<int> to_lipschitz(const HeightField& h) {
  std::vector<int> f;
  f.reserve(h.values.size());
  for (int x : h.values) {
    if (x % 2 == 0) throw InvalidArgument("height values must be odd");
    f.push_back((x - 1) / 2);
  }
  return f;
}

ValueSet odd_range(int a, int b) {
  if (a % 2 == 0 || b % 2 == 0 || a > b) throw InvalidArgument("odd_range needs odd a <= b");
  ValueSet out;
  for (int k = a; k <= b; k += 2) out.push_back(k);
  return out;
}

ValueSet plus_minus_range(int a, int b) {
  if (a < 1) throw InvalidArgument("plus_minus_range needs 1 <= a");
  ValueSet pos = odd_range(a, b);
  ValueSet out;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back(-*it);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

std::string to_string(BcKind kind) {
  switch (kind) {
    case BcKind::single: return "single";
    case BcKind::interval: return "interval";
    case BcKind::absolute_value: return "absolute-value";
    case BcKind::general: return "general";
  }
  return "?";
}

BoundaryCondition& BoundaryCondition::set(VertexId v, ValueSet values) {
  if (v < 0 || v >= num_vertices()) throw InvalidArgument("boundary vertex out of range");
  if (values.empty()) throw InvalidArgument("empty value set at vertex " + std::to_string(v));
  for (int k : values)
    if (k % 2 == 0) throw InvalidArgument("boundary values must be odd");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  sets_[v] = std::move(values);
  return *this;
}

bool BoundaryCondition::allows(VertexId v, int k) const {
  if (!sets_[v]) return true;
  return std::binary_search(sets_[v]->begin(), sets_[v]->end(), k);
}

std::vector<VertexId> BoundaryCondition::support() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < num_vertices(); ++v)
    if (sets_[v]) out.push_back(v);
  return out;
}

bool BoundaryCondition::is_single() const {
  return std::all_of(sets_.begin(), sets_.end(), [](const auto& s) { return !s || s->size() == 1; });
}

bool BoundaryCondition::is_interval() const {
  return std::all_of(sets_.begin(), sets_.end(),
                     [](const auto& s) { return !s || s->back() - s->front() == 2 * int(s->size() - 1); });
}

namespace {

std::optional<AbsEntry> classify_abs(const ValueSet& s) {
  bool contiguous = s.back() - s.front() == 2 * int(s.size() - 1);
  if (contiguous && s.front() >= -1 && s.front() + s.back() >= 2) return AbsEntry{true, s.front(), s.back()};
  // ±[a, b]: symmetric, positive half contiguous with a >= 1.
  std::vector<int> pos;
  for (int k : s)
    if (k > 0) pos.push_back(k);
  if (pos.empty() || pos.size() * 2 != s.size()) return std::nullopt;
  for (std::size_t i = 0; i < pos.size(); ++i)
    if (s[pos.size() - 1 - i] != -pos[i]) return std::nullopt;
  if (pos.back() - pos.front() != 2 * int(pos.size() - 1)) return std::nullopt;
  return AbsEntry{false, pos.front(), pos.back()};
}

}  // namespace

std::optional<std::vector<AbsEntry>> BoundaryCondition::abs_form() const {
  std::vector<AbsEntry> out(num_vertices());
  for (VertexId v = 0; v < num_vertices(); ++v) {
    if (!sets_[v]) continue;
    auto e = classify_abs(*sets_[v]);
    if (!e) return std::nullopt;
    out[v] = *e;
  }
  return out;
}

BcKind BoundaryCondition::kind() const {
  if (is_single()) return BcKind::single;
  if (is_interval()) return BcKind::interval;
  if (abs_form()) return BcKind::absolute_value;
  return BcKind::general;
}

BoundaryCondition BoundaryCondition::permuted(const std::vector<VertexId>& tau) const {
  if (static_cast<int>(tau.size()) != num_vertices()) throw InvalidArgument("permutation size mismatch");
  BoundaryCondition out(num_vertices());
  for (VertexId v = 0; v < num_vertices(); ++v)
    if (sets_[v]) out.sets_[tau[v]] = sets_[v];
  return out;
}

BoundaryCondition BoundaryCondition::reflected(int a) const {
  if (a % 2 != 0) throw InvalidArgument("reflection centre must keep values odd");
  BoundaryCondition out(num_vertices());
  for (VertexId v = 0; v < num_vertices(); ++v) {
    if (!sets_[v]) continue;
    ValueSet s;
    for (int k : *sets_[v]) s.push_back(a - k);
    out.set(v, s);
  }
  return out;
}

BoundaryCondition const_bc(int num_vertices, const std::vector<VertexId>& where, int value) {
  BoundaryCondition xi(num_vertices);
  for (VertexId v : where) xi.set(v, value);
  return xi;
}

BoundaryCondition pm1_bc(int num_vertices, const std::vector<VertexId>& where) {
  BoundaryCondition xi(num_vertices);
  for (VertexId v : where) xi.set(v, ValueSet{-1, 1});
  return xi;
}

namespace {

// Shortest-path relaxation with edge length 2: result(x) = min_v (start(v) + 2 d(v, x))
// over sources v. Vertices not reachable from any source get INT_MAX.
std::vector<long> min_plus(const FiniteGraph& g, const std::vector<std::pair<VertexId, long>>& sources) {
  constexpr long kInf = std::numeric_limits<long>::max();
  std::vector<long> dist(g.num_vertices(), kInf);
  using Item = std::pair<long, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto [v, d] : sources) {
    if (d < dist[v]) {
      dist[v] = d;
      pq.push({d, v});
    }
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != dist[v]) continue;
    for (const Incidence& inc : g.incident(v)) {
      if (d + 2 < dist[inc.neighbor]) {
        dist[inc.neighbor] = d + 2;
        pq.push({d + 2, inc.neighbor});
      }
    }
  }
  return dist;
}

void require_reachable(const FiniteGraph& g, const BoundaryCondition& xi) {
  if (xi.num_vertices() != g.num_vertices()) throw InvalidArgument("boundary condition size mismatch");
  auto support = xi.support();
  if (support.empty()) throw InvalidArgument("boundary condition has empty support");
  auto d = bfs_distances(g, support);
  for (int x : d)
    if (x == kUnreachable) throw InvalidArgument("vertex not connected to the boundary support");
}

// Pointwise extreme admissible selection by monotone tightening.
std::optional<std::vector<int>> extreme_selection(const FiniteGraph& g, const BoundaryCondition& xi,
                                                  bool minimal) {
  require_reachable(g, xi);
  auto support = xi.support();
  std::vector<int> chi(g.num_vertices(), 0);
  for (VertexId v : support) chi[v] = minimal ? xi.values(v).front() : xi.values(v).back();
  for (;;) {
    std::vector<std::pair<VertexId, long>> src;
    // minimal: bound(x) = max_v (chi(v) - 2d) = -min_v(-chi(v) + 2d).
    for (VertexId v : support) src.push_back({v, minimal ? -long(chi[v]) : long(chi[v])});
    auto bound = min_plus(g, src);
    bool changed = false;
    for (VertexId v : support) {
      const ValueSet& s = xi.values(v);
      long b = minimal ? -bound[v] : bound[v];
      if (minimal && chi[v] < b) {
        auto it = std::lower_bound(s.begin(), s.end(), static_cast<int>(b));
        if (it == s.end()) return std::nullopt;
        chi[v] = *it;
        changed = true;
      } else if (!minimal && chi[v] > b) {
        auto it = std::upper_bound(s.begin(), s.end(), static_cast<int>(b));
        if (it == s.begin()) return std::nullopt;
        chi[v] = *std::prev(it);
        changed = true;
      }
    }
    if (!changed) return chi;
  }
}

}  // namespace

std::optional<std::vector<int>> minimal_selection(const FiniteGraph& g, const BoundaryCondition& xi) {
  return extreme_selection(g, xi, true);
}

std::optional<std::vector<int>> maximal_selection(const FiniteGraph& g, const BoundaryCondition& xi) {
  return extreme_selection(g, xi, false);
}

bool is_admissible(const FiniteGraph& g, const BoundaryCondition& xi) {
  return minimal_selection(g, xi).has_value();
}

Extensions extremal_extensions(const FiniteGraph& g, const BoundaryCondition& xi) {
  auto lo = minimal_selection(g, xi);
  auto hi = maximal_selection(g, xi);
  if (!lo || !hi) throw Inadmissible("boundary condition is not admissible");
  auto support = xi.support();
  std::vector<std::pair<VertexId, long>> src_lo, src_hi;
  for (VertexId v : support) {
    src_lo.push_back({v, -long((*lo)[v])});
    src_hi.push_back({v, long((*hi)[v])});
  }
  auto dmin = min_plus(g, src_lo);
  auto dmax = min_plus(g, src_hi);
  Extensions ext{HeightField(g.num_vertices(), 0), HeightField(g.num_vertices(), 0)};
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    ext.min[x] = static_cast<int>(-dmin[x]);
    ext.max[x] = static_cast<int>(dmax[x]);
  }
  return ext;
}

bool interval_order_leq(const BoundaryCondition& xi, const BoundaryCondition& xi2) {
  if (xi.support() != xi2.support()) throw InvalidArgument("boundary conditions on different supports");
  if (!xi.is_interval() || !xi2.is_interval()) throw InvalidArgument("interval order needs interval conditions");
  for (VertexId v : xi.support())
    if (xi.values(v).front() > xi2.values(v).front() || xi.values(v).back() > xi2.values(v).back()) return false;
  return true;
}

bool abs_order_leq(const BoundaryCondition& xi, const BoundaryCondition& xi2) {
  if (xi.support() != xi2.support()) throw InvalidArgument("boundary conditions on different supports");
  auto f = xi.abs_form();
  auto f2 = xi2.abs_form();
  if (!f || !f2) throw InvalidArgument("absolute-value order needs absolute-value conditions");
  for (VertexId v : xi.support()) {
    const AbsEntry& e = (*f)[v];
    const AbsEntry& e2 = (*f2)[v];
    if (e.plus && !e2.plus) return false;  // S ⊆ S'
    if (e.plus || !e2.plus) {
      // x ∈ S, or x ∈ Δ∖S'
      if (e.a > e2.a || e.b > e2.b) return false;
    } else {
      // x ∈ S'∖S
      if (e.b > std::abs(e2.a)) return false;
    }
  }
  return true;
}

}  // namespace lipschitz
