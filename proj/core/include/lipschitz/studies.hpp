#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipschitz/heights.hpp"
#include "lipschitz/lattice.hpp"
#include "lipschitz/mcmc.hpp"
#include "lipschitz/stats.hpp"

namespace lipschitz {

// Which behaviour a (kind, c) pair is proven to have. Anything not covered by
// a known result is exploratory and gets no verdict.
enum class Regime { delocalized, localized, exploratory };
std::string to_string(Regime regime);
Regime regime(LatticeKind kind, double c);

// Verdict tolerances. They are engineering choices and live in a versioned
// JSON file (config/verdicts.json) rather than in code.
struct Thresholds {
  int version = 0;
  double deloc_min_slope_se = 0.0;     // variance slope must exceed this many SEs
  double deloc_min_r2 = 0.0;
  double loc_max_variance_rise = 0.0;  // Var(largest n) - Var(smallest n)
  double tail_min_decay_se = 0.0;      // log-tail slope below zero by this many SEs
  long long loop_max_violations = 0;
  double loop_min_a = 0.0;             // delocalized regime only
  double torus_max_se = 0.0;
};

struct StudyConfig {
  LatticeKind kind = kHoneycomb;
  EdgeWeight c = EdgeWeight::of(1.0);
  std::vector<int> sizes{4, 8, 16, 32};  // variance and loop scans
  int box = 16;                          // tail scan domain L(box)
  std::vector<int> m_values{0, 1, 2, 3}; // tail scan: P[h(x) >= 2m+1]
  int ratio = 3;                         // loop scan: annulus A(L(n), L(ratio n))
  int torus_n = 8;
  std::string region;                    // sample and enumerate only
  // sweeps, thin, cluster period and master seed apply per chain. The
  // burn-in is max(sampler.burnin, burnin_n2 * n^2) for a domain of size n.
  SamplerConfig sampler;
  double burnin_n2 = 10.0;
  int chains = 8;
  int threads = 1;
  long long max_vertices = 2'000'000;

  void validate() const;
  long long burnin_for(int n) const;
};

// One CSV row. `study` is the full id, e.g. "variance-scan" or "tail-scan/m2".
// A censored row has no observed event; `estimate` then holds the bound 3/N.
struct Row {
  std::string study;
  int n = 0;
  double estimate = 0.0;
  double se = 0.0;
  long long nsamples = 0;
  bool censored = false;
};

struct Verdict {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct StudyResult {
  std::string study;  // variance-scan, loop-scan, tail-scan, torus-identity
  StudyConfig config;
  Regime regime = Regime::exploratory;
  std::vector<Row> rows;
  std::optional<LinearFit> fit;
  std::vector<Verdict> verdicts;
  long long violations = 0;
  double wall_seconds = 0.0;

  bool ok() const;
  const Row& row(const std::string& study, int n) const;
};

// Seed of the sampler runs for domain size n within a study.
std::uint64_t study_seed(std::uint64_t master, const std::string& study, int n);

// E^{±1}_{L(n)}[h(x)^2] at the vertex farthest from ∂L(n), regressed on ln n.
StudyResult variance_scan(const StudyConfig& config, const Thresholds& thresholds);
// a_n = P[ω = 1 circuit around L(n)] and b_n = P[dual E5 circuit around L(n)]
// in L(ratio n) with ±1 boundary values; counts samples with b but not a.
StudyResult loop_scan(const StudyConfig& config, const Thresholds& thresholds);
// P[h(x) >= 2m+1] in L(box) with a log-linear fit in m.
StudyResult tail_scan(const StudyConfig& config, const Thresholds& thresholds);
// On the torus T(N) with h(y) in {±1}: E[h(x)^2] against E[(h(x)-h(y))^2] + 1.
StudyResult torus_identity(const StudyConfig& config, const Thresholds& thresholds);

// Fit and verdicts recomputed from the stored rows. "sample" and "enumerate"
// results carry no verdicts.
void evaluate(StudyResult& result, const Thresholds& thresholds);

// Vertex at maximal graph distance from ∂D, lowest id on ties.
VertexId deepest_vertex(const LatticePatch& patch);

}  // namespace lipschitz
