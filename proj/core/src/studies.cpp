#include "lipschitz/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "lipschitz/errors.hpp"
#include "lipschitz/percolation.hpp"
#include "lipschitz/random.hpp"

namespace lipschitz {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::delocalized: return "delocalized";
    case Regime::localized: return "localized";
    case Regime::exploratory: return "exploratory";
  }
  return "?";
}

Regime regime(LatticeKind kind, double c) {
  if (kind.decoration != Decoration::none) return Regime::exploratory;
  const double eps = 1e-12;
  switch (kind.family) {
    case LatticeFamily::honeycomb:
      if (c >= 1.0 && c <= 2.0 + eps) return Regime::delocalized;
      if (c > 2.0 + std::sqrt(3.0) + eps) return Regime::localized;
      break;
    case LatticeFamily::square_octagon:
      if (c >= 1.0 && c <= 2.0 + eps) return Regime::delocalized;
      break;
    case LatticeFamily::square:
      if (c > 1.0 + std::sqrt(2.0) + eps) return Regime::localized;
      break;
    case LatticeFamily::triangular:
      if (c > std::sqrt(3.0) + eps) return Regime::localized;
      break;
    default:
      break;
  }
  return Regime::exploratory;
}

void StudyConfig::validate() const {
  sampler.validate();
  if (sampler.sweeps < 1) throw InvalidArgument("studies need at least one recorded sweep per chain");
  if (c.value < 1.0) throw InvalidArgument("edge weight must be at least 1");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw InvalidArgument("sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw InvalidArgument("sizes must be strictly ascending");
  }
  if (box < 1) throw InvalidArgument("tail box must be positive");
  for (int m : m_values)
    if (m < 0) throw InvalidArgument("tail levels m must be nonnegative");
  if (ratio < 2) throw InvalidArgument("loop ratio must be at least 2");
  if (torus_n < 1) throw InvalidArgument("torus size must be positive");
  if (burnin_n2 < 0) throw InvalidArgument("burn-in factor must be nonnegative");
  if (chains < 1 || threads < 1) throw InvalidArgument("chains and threads must be positive");
}

long long StudyConfig::burnin_for(int n) const {
  return std::max(sampler.burnin, static_cast<long long>(std::ceil(burnin_n2 * n * n)));
}

bool StudyResult::ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Row& StudyResult::row(const std::string& id, int n) const {
  for (const Row& r : rows)
    if (r.study == id && r.n == n) return r;
  throw InvalidArgument("no row " + id + " at n=" + std::to_string(n));
}

std::uint64_t study_seed(std::uint64_t master, const std::string& study, int n) {
  std::uint64_t x = splitmix64(master);
  for (unsigned char ch : study) x = splitmix64(x ^ ch);
  return splitmix64(x ^ static_cast<std::uint64_t>(n));
}

VertexId deepest_vertex(const LatticePatch& patch) {
  auto dist = bfs_distances(patch.graph, patch.boundary);
  return static_cast<VertexId>(std::max_element(dist.begin(), dist.end()) - dist.begin());
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

// Rough vertex count of L(n), from L(2), to refuse oversized domains before
// building them.
void check_size(const StudyConfig& cfg, int n) {
  LatticePatch probe = build_patch(cfg.kind, Lozenge{2});
  double per_face = probe.num_vertices() / 25.0;
  double estimate = per_face * (2.0 * n + 1) * (2.0 * n + 1);
  if (estimate > static_cast<double>(cfg.max_vertices))
    throw CapExceeded("L(" + std::to_string(n) + ") needs about " + std::to_string(static_cast<long long>(estimate)) +
                      " vertices, above the limit of " + std::to_string(cfg.max_vertices));
}

SamplerConfig sampler_for(const StudyConfig& cfg, const std::string& study, int n, int burnin_size) {
  SamplerConfig s = cfg.sampler;
  s.burnin = cfg.burnin_for(burnin_size);
  s.seed = study_seed(cfg.sampler.seed, study, n);
  return s;
}

Row make_row(std::string study, int n, const Estimate& e) {
  Row r;
  r.study = std::move(study);
  r.n = n;
  r.estimate = e.mean;
  r.se = e.se;
  r.nsamples = e.n;
  return r;
}

std::vector<const Row*> rows_of(const StudyResult& res, const std::string& prefix) {
  std::vector<const Row*> out;
  for (const Row& r : res.rows)
    if (r.study.rfind(prefix, 0) == 0) out.push_back(&r);
  return out;
}

void evaluate_variance(StudyResult& res, const Thresholds& t) {
  auto rows = rows_of(res, "variance-scan");
  if (rows.size() >= 2) {
    std::vector<double> x, y, se;
    for (const Row* r : rows) {
      x.push_back(std::log(static_cast<double>(r->n)));
      y.push_back(r->estimate);
      se.push_back(r->se);
    }
    res.fit = fit_line(x, y, se);
  }
  if (res.regime == Regime::delocalized) {
    if (!res.fit) {
      res.verdicts.push_back({"log-growth", false, 0, t.deloc_min_slope_se, "needs at least two sizes"});
      return;
    }
    const LinearFit& f = *res.fit;
    double z = f.slope_se > 0 ? f.slope / f.slope_se : (f.slope > 0 ? INFINITY : 0.0);
    res.verdicts.push_back({"slope-positive", z > t.deloc_min_slope_se, z, t.deloc_min_slope_se,
                            "slope " + fmt(f.slope) + " +- " + fmt(f.slope_se) + " per unit ln n"});
    res.verdicts.push_back({"fit-quality", f.r2 >= t.deloc_min_r2, f.r2, t.deloc_min_r2, "R^2 of Var against ln n"});
  } else if (res.regime == Regime::localized) {
    if (rows.size() < 2) {
      res.verdicts.push_back({"plateau", false, 0, t.loc_max_variance_rise, "needs at least two sizes"});
      return;
    }
    double rise = rows.back()->estimate - rows.front()->estimate;
    res.verdicts.push_back({"plateau", rise <= t.loc_max_variance_rise, rise, t.loc_max_variance_rise,
                            "Var(L" + std::to_string(rows.back()->n) + ") - Var(L" + std::to_string(rows.front()->n) +
                                ")"});
  }
}

void evaluate_loops(StudyResult& res, const Thresholds& t) {
  long long violations = 0;
  for (const Row* r : rows_of(res, "loop-scan/violations")) violations += std::llround(r->estimate);
  res.violations = violations;
  res.verdicts.push_back({"sandwich", violations <= t.loop_max_violations, static_cast<double>(violations),
                          static_cast<double>(t.loop_max_violations), "samples with a dual E5 circuit but no ω circuit"});
  if (res.regime != Regime::delocalized) return;
  for (const Row* r : rows_of(res, "loop-scan/a"))
    res.verdicts.push_back({"a_n lower bound n=" + std::to_string(r->n), r->estimate >= t.loop_min_a, r->estimate,
                            t.loop_min_a, "a_n = " + fmt(r->estimate) + " +- " + fmt(r->se)});
}

void evaluate_tail(StudyResult& res, const Thresholds& t) {
  std::vector<double> x, y, se;
  for (const Row* r : rows_of(res, "tail-scan/m")) {
    if (r->censored || r->estimate <= 0) continue;
    x.push_back(std::stoi(r->study.substr(std::string("tail-scan/m").size())));
    y.push_back(std::log(r->estimate));
    se.push_back(r->se / r->estimate);
  }
  if (x.size() >= 2) res.fit = fit_line(x, y, se);
  if (res.regime != Regime::localized) return;
  if (!res.fit) {
    res.verdicts.push_back({"exponential-decay", false, 0, t.tail_min_decay_se, "fewer than two uncensored levels"});
    return;
  }
  const LinearFit& f = *res.fit;
  double z = f.slope_se > 0 ? -f.slope / f.slope_se : (f.slope < 0 ? INFINITY : 0.0);
  res.verdicts.push_back({"exponential-decay", z >= t.tail_min_decay_se, z, t.tail_min_decay_se,
                          "log-slope " + fmt(f.slope) + " +- " + fmt(f.slope_se) + " per level"});
}

void evaluate_torus(StudyResult& res, const Thresholds& t) {
  for (const Row* r : rows_of(res, "torus-identity/gap")) {
    double z = r->se > 0 ? std::abs(r->estimate) / r->se : (r->estimate == 0 ? 0.0 : INFINITY);
    res.verdicts.push_back({"identity", z <= t.torus_max_se, z, t.torus_max_se,
                            "E[h(x)^2] - E[(h(x)-h(y))^2] - 1 = " + fmt(r->estimate) + " +- " + fmt(r->se)});
  }
}

StudyResult start(const char* id, const StudyConfig& cfg) {
  cfg.validate();
  StudyResult res;
  res.study = id;
  res.config = cfg;
  res.regime = regime(cfg.kind, cfg.c.value);
  return res;
}

}  // namespace

void evaluate(StudyResult& res, const Thresholds& t) {
  res.fit.reset();
  res.verdicts.clear();
  res.violations = 0;
  if (res.study == "variance-scan") evaluate_variance(res, t);
  else if (res.study == "loop-scan") evaluate_loops(res, t);
  else if (res.study == "tail-scan") evaluate_tail(res, t);
  else if (res.study == "torus-identity") evaluate_torus(res, t);
  else if (res.study == "sample" || res.study == "enumerate") return;
  else throw InvalidArgument("unknown study " + res.study);
}

StudyResult variance_scan(const StudyConfig& cfg, const Thresholds& t) {
  auto t0 = Clock::now();
  StudyResult res = start("variance-scan", cfg);
  for (int n : cfg.sizes) {
    check_size(cfg, n);
    LatticePatch patch = build_patch(cfg.kind, Lozenge{n});
    Model model = Model::uniform(patch.graph, cfg.c);
    BoundaryCondition xi = pm1_bc(patch.num_vertices(), patch.boundary);
    VertexId x = deepest_vertex(patch);
    Observable h2{"h2", [x](const ChainState& s) {
                    double v = s.h()[x];
                    return v * v;
                  }};
    RunResult r = run(model, xi, sampler_for(cfg, res.study, n, n), {h2}, false, cfg.chains, cfg.threads);
    res.rows.push_back(make_row("variance-scan", n, r["h2"].estimate));
  }
  evaluate(res, t);
  res.wall_seconds = seconds_since(t0);
  return res;
}

StudyResult loop_scan(const StudyConfig& cfg, const Thresholds& t) {
  auto t0 = Clock::now();
  StudyResult res = start("loop-scan", cfg);
  const EdgeSetKind high = EdgeSetKind::parse("E5");
  for (int n : cfg.sizes) {
    int outer = cfg.ratio * n;
    check_size(cfg, outer);
    LatticePatch annulus = build_patch(cfg.kind, Annulus{Lozenge{n}, Lozenge{outer}});
    Model model = Model::uniform(annulus.graph, cfg.c);
    BoundaryCondition xi = pm1_bc(annulus.num_vertices(), annulus.boundary);
    const FiniteGraph& g = annulus.graph;
    std::vector<Observable> obs{
        {"a", [&annulus](const ChainState& s) { return circuit(annulus, s.omega(), GraphSide::primal) ? 1.0 : 0.0; }},
        {"b",
         [&annulus, &g, high](const ChainState& s) {
           return circuit(annulus, edge_set(g, s.h(), s.b(), s.omega(), high), GraphSide::dual) ? 1.0 : 0.0;
         }},
    };
    // Series are kept so that the inclusion can be checked sample by sample.
    RunResult r = run(model, xi, sampler_for(cfg, res.study, n, outer), obs, true, cfg.chains, cfg.threads);
    const auto& sa = r["a"].series;
    const auto& sb = r["b"].series;
    long long bad = 0;
    for (std::size_t i = 0; i < sa.size(); ++i)
      if (sb[i] > 0.5 && sa[i] < 0.5) ++bad;
    res.rows.push_back(make_row("loop-scan/a", n, r["a"].estimate));
    res.rows.push_back(make_row("loop-scan/b", n, r["b"].estimate));
    Row vr;
    vr.study = "loop-scan/violations";
    vr.n = n;
    vr.estimate = static_cast<double>(bad);
    vr.nsamples = static_cast<long long>(sa.size());
    res.rows.push_back(vr);
  }
  evaluate(res, t);
  res.wall_seconds = seconds_since(t0);
  return res;
}

StudyResult tail_scan(const StudyConfig& cfg, const Thresholds& t) {
  auto t0 = Clock::now();
  StudyResult res = start("tail-scan", cfg);
  check_size(cfg, cfg.box);
  LatticePatch patch = build_patch(cfg.kind, Lozenge{cfg.box});
  Model model = Model::uniform(patch.graph, cfg.c);
  BoundaryCondition xi = pm1_bc(patch.num_vertices(), patch.boundary);
  VertexId x = deepest_vertex(patch);
  std::vector<Observable> obs;
  for (int m : cfg.m_values) {
    int level = 2 * m + 1;
    obs.push_back({"m" + std::to_string(m), [x, level](const ChainState& s) { return s.h()[x] >= level ? 1.0 : 0.0; }});
  }
  RunResult r = run(model, xi, sampler_for(cfg, res.study, cfg.box, cfg.box), obs, false, cfg.chains, cfg.threads);
  for (int m : cfg.m_values) {
    const Estimate& e = r["m" + std::to_string(m)].estimate;
    Row row = make_row("tail-scan/m" + std::to_string(m), cfg.box, e);
    if (e.mean == 0.0) {
      row.censored = true;
      row.estimate = 3.0 / static_cast<double>(e.n);
      row.se = 0.0;
    }
    res.rows.push_back(row);
  }
  evaluate(res, t);
  res.wall_seconds = seconds_since(t0);
  return res;
}

StudyResult torus_identity(const StudyConfig& cfg, const Thresholds& t) {
  auto t0 = Clock::now();
  StudyResult res = start("torus-identity", cfg);
  LatticePatch torus = build_patch(cfg.kind, Torus{cfg.torus_n});
  if (torus.num_vertices() > cfg.max_vertices) throw CapExceeded("torus exceeds the vertex limit");
  const VertexId y = 0;
  auto dist = bfs_distances(torus.graph, std::vector<VertexId>{y});
  const VertexId x = static_cast<VertexId>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  std::vector<Observable> obs{
      {"h2",
       [x](const ChainState& s) {
         double v = s.h()[x];
         return v * v;
       }},
      {"d2",
       [x, y](const ChainState& s) {
         double v = s.h()[x] - s.h()[y];
         return v * v;
       }},
      {"gap",
       [x, y](const ChainState& s) {
         double hx = s.h()[x], d = s.h()[x] - s.h()[y];
         return hx * hx - d * d - 1.0;
       }},
  };
  const int n = cfg.torus_n;
  RunResult r = torus_run(torus, cfg.c, y, sampler_for(cfg, res.study, n, 2 * n), obs, cfg.chains, cfg.threads);
  for (const char* q : {"h2", "d2", "gap"})
    res.rows.push_back(make_row(std::string("torus-identity/") + q, n, r[q].estimate));
  evaluate(res, t);
  res.wall_seconds = seconds_since(t0);
  return res;
}

}  // namespace lipschitz
