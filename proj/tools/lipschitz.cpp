#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lipschitz/errors.hpp"
#include "lipschitz/event_dsl.hpp"
#include "lipschitz/mcmc.hpp"
#include "lipschitz/oracle.hpp"
#include "lipschitz/studies.hpp"
#include "lipschitz/study_io.hpp"
#include "lipschitz/verify.hpp"

namespace fs = std::filesystem;
using namespace lipschitz;

namespace {

struct Options {
  // global
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  std::string format = "csv";
  std::string verdicts;
  bool timing = false;
  // sampler
  long long sweeps = 10000;
  std::optional<long long> burnin;
  long long thin = 1;
  long long cluster_period = -1;
  std::string order = "fixed";
  int chains = 8;
  double burnin_n2 = 10.0;
  // domain
  std::string kind = "honeycomb";
  std::string c = "1";
  std::string region = "L(2)";
  std::string bc = "pm1";
  int vertex = -1;
  std::vector<std::string> events;
  long long cap = 10'000'000;
  // studies
  std::vector<int> sizes{4, 8, 16, 32};
  int box = 16;
  std::vector<int> m_values{0, 1, 2, 3};
  int ratio = 3;
  int torus_n = 8;
  // verify
  std::vector<std::string> groups;
};

SamplerConfig sampler_of(const Options& o, long long default_burnin) {
  SamplerConfig s;
  s.seed = o.seed;
  s.sweeps = o.sweeps;
  s.burnin = o.burnin.value_or(default_burnin);
  s.thin = o.thin;
  s.cluster_period = o.cluster_period;
  s.order = o.order == "shuffled" ? SiteOrder::shuffled : SiteOrder::fixed;
  return s;
}

StudyConfig study_of(const Options& o) {
  StudyConfig cfg;
  cfg.kind = LatticeKind::parse(o.kind);
  cfg.c = EdgeWeight::parse(o.c);
  cfg.sizes = o.sizes;
  cfg.box = o.box;
  cfg.m_values = o.m_values;
  cfg.ratio = o.ratio;
  cfg.torus_n = o.torus_n;
  // Without --burnin the n^2 rule alone sets the burn-in.
  cfg.sampler = sampler_of(o, 0);
  cfg.burnin_n2 = o.burnin_n2;
  cfg.chains = o.chains;
  cfg.threads = o.threads;
  return cfg;
}

std::string file_stem(const StudyResult& r) {
  std::string s = r.study + "_" + r.config.kind.name() + "_c" + r.config.c.to_string();
  for (char& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_' && ch != '.') ch = '_';
  return s;
}

void emit(const Options& o, const StudyResult& r) {
  auto write = [&](std::ostream& os) {
    if (o.format == "json") write_json(os, r, o.timing);
    else write_csv(os, r);
  };
  if (o.out.empty()) {
    write(std::cout);
  } else {
    fs::create_directories(o.out);
    fs::path path = fs::path(o.out) / (file_stem(r) + (o.format == "json" ? ".json" : ".csv"));
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + path.string());
    write(f);
    std::cerr << "wrote " << path.string() << '\n';
  }
  for (const Verdict& v : r.verdicts)
    std::cerr << (v.pass ? "PASS " : "FAIL ") << r.study << '/' << v.name << "  value=" << v.value
              << "  threshold=" << v.threshold << "  " << v.detail << '\n';
  if (r.verdicts.empty() && r.study != "sample" && r.study != "enumerate")
    std::cerr << "no verdict: " << to_string(r.regime) << " regime\n";
}

int study_exit(const Options& o, const StudyResult& r) {
  emit(o, r);
  return r.ok() ? 0 : 1;
}

Thresholds thresholds_of(const Options& o) {
  return load_thresholds(o.verdicts.empty() ? default_thresholds_path() : o.verdicts);
}

struct Domain {
  LatticePatch patch;
  Model model;
  BoundaryCondition xi;
  VertexId x = 0;
  int n = 0;
};

std::unique_ptr<Domain> domain_of(const Options& o) {
  auto d = std::make_unique<Domain>();
  RegionSpec region = parse_region(o.region);
  d->patch = build_patch(LatticeKind::parse(o.kind), region);
  d->model = Model::uniform(d->patch.graph, EdgeWeight::parse(o.c));
  const int nv = d->patch.num_vertices();
  if (d->patch.torus) {
    if (o.bc != "pm1") throw InvalidArgument("tori take the ±1 root condition only");
    d->xi = pm1_bc(nv, {0});
    auto dist = bfs_distances(d->patch.graph, std::vector<VertexId>{0});
    d->x = static_cast<VertexId>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  } else {
    if (o.bc == "pm1") d->xi = pm1_bc(nv, d->patch.boundary);
    else if (o.bc == "const1") d->xi = const_bc(nv, d->patch.boundary, 1);
    else throw InvalidArgument("boundary condition must be pm1 or const1");
    d->x = deepest_vertex(d->patch);
  }
  if (o.vertex >= 0) {
    if (o.vertex >= nv) throw InvalidArgument("vertex out of range");
    d->x = o.vertex;
  }
  if (auto* lz = std::get_if<Lozenge>(&region)) d->n = lz->n;
  if (auto* t = std::get_if<Torus>(&region)) d->n = t->n;
  return d;
}

StudyResult domain_result(const Options& o, const char* study, const Domain& d) {
  StudyResult r;
  r.study = study;
  r.config = study_of(o);
  r.config.region = o.region;
  r.config.sizes = {d.n};
  r.regime = regime(r.config.kind, r.config.c.value);
  return r;
}

int cmd_verify(const Options& o) {
  VerifyOptions vo;
  vo.groups = o.groups;
  vo.threads = o.threads;
  std::ostringstream text;
  vo.on_check = [](const CheckResult& c) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.group << '/' << c.name << '\n';
  };
  VerifyReport report = verify_suite(vo);
  print_report(text, report);
  if (o.out.empty()) {
    std::cout << text.str();
  } else {
    fs::create_directories(o.out);
    std::ofstream(fs::path(o.out) / "verify.txt", std::ios::binary) << text.str();
  }
  return report.ok() ? 0 : 1;
}

template <class Real>
int enumerate_with(const Options& o, const Domain& d) {
  EnumerationOptions eo;
  eo.cap = o.cap;
  eo.threads = o.threads;
  StudyResult r = domain_result(o, "enumerate", d);
  auto add = [&](std::string name, const Real& value, long long count) {
    Row row;
    row.study = "enumerate/" + std::move(name);
    row.n = d.n;
    if constexpr (std::is_same_v<Real, Rational>) row.estimate = value.get_d();
    else row.estimate = value;
    row.nsamples = count;
    r.rows.push_back(row);
    std::ostringstream exact;
    exact << value;
    std::cerr << row.study << " = " << exact.str() << '\n';
  };
  if (o.events.empty()) {
    auto dist = enumerate_heights<Real>(d.model, d.xi, eo);
    auto m = marginal_stats(dist, d.x);
    add("h2", m.second_moment, dist.size());
    for (const auto& [k, p] : m.pmf) add("P[h=" + std::to_string(k) + "]", p, dist.size());
  } else {
    auto dist = enumerate_joint<Real>(d.model, d.xi, eo);
    auto m = marginal_stats(dist, d.x);
    add("h2", m.second_moment, dist.size());
    for (const auto& [k, p] : m.pmf) add("P[h=" + std::to_string(k) + "]", p, dist.size());
    for (const std::string& text : o.events) {
      BoundEvent ev(parse_event(text), d.patch);
      const FiniteGraph& g = d.patch.graph;
      Real p = event_probability(dist, [&](const JointConfig& jc) {
        return ev.holds(jc.h, jc.b, omega_from(g, jc.h, jc.b));
      });
      add(ev.spec().to_string(), p, dist.size());
    }
  }
  emit(o, r);
  return 0;
}

int cmd_enumerate(const Options& o) {
  auto d = domain_of(o);
  if (d->model.is_rational()) return enumerate_with<Rational>(o, *d);
  return enumerate_with<double>(o, *d);
}

int cmd_sample(const Options& o) {
  auto d = domain_of(o);
  std::vector<std::unique_ptr<BoundEvent>> events;
  std::vector<Observable> obs;
  const VertexId x = d->x;
  obs.push_back({"h2", [x](const ChainState& s) {
                   double v = s.h()[x];
                   return v * v;
                 }});
  for (const std::string& text : o.events) {
    events.push_back(std::make_unique<BoundEvent>(parse_event(text), d->patch));
    const BoundEvent* ev = events.back().get();
    obs.push_back({ev->spec().to_string(),
                   [ev](const ChainState& s) { return ev->holds(s.h(), s.b(), s.omega()) ? 1.0 : 0.0; }});
  }
  SamplerConfig cfg = sampler_of(o, 100LL * std::max(1, d->n));
  RunResult run_result = run(d->model, d->xi, cfg, obs, false, o.chains, o.threads);
  StudyResult r = domain_result(o, "sample", *d);
  r.config.sampler = cfg;
  for (const ObservableStats& s : run_result.observables) {
    Row row;
    row.study = "sample/" + s.name;
    row.n = d->n;
    row.estimate = s.estimate.mean;
    row.se = s.estimate.se;
    row.nsamples = s.estimate.n;
    r.rows.push_back(row);
  }
  emit(o, r);
  return 0;
}

void add_sampler_options(CLI::App* app, Options& o) {
  app->add_option("--sweeps", o.sweeps, "recorded sweeps per chain after burn-in")->capture_default_str();
  app->add_option("--burnin", o.burnin, "burn-in sweeps per chain (studies: lower bound)");
  app->add_option("--thin", o.thin, "record every k-th sweep")->capture_default_str();
  app->add_option("--cluster-period", o.cluster_period, "cluster move every k sweeps; 0 never, -1 auto")
      ->capture_default_str();
  app->add_option("--order", o.order, "site order in a sweep")
      ->check(CLI::IsMember({"fixed", "shuffled"}))
      ->capture_default_str();
  app->add_option("--chains", o.chains, "independent chains")->capture_default_str();
}

void add_lattice_options(CLI::App* app, Options& o) {
  app->add_option("--kind", o.kind, "lattice kind, e.g. honeycomb, square, dotted-honeycomb")->capture_default_str();
  app->add_option("-c,--c", o.c, "edge weight c >= 1, e.g. 2, 3/2, sqrt2")->capture_default_str();
}

void add_domain_options(CLI::App* app, Options& o) {
  add_lattice_options(app, o);
  app->add_option("--region", o.region, "L(n), R(n,m), A(inner,outer) or T(N)")->capture_default_str();
  app->add_option("--bc", o.bc, "boundary values on the domain boundary")
      ->check(CLI::IsMember({"pm1", "const1"}))
      ->capture_default_str();
  app->add_option("--vertex", o.vertex, "vertex for h(x)^2 (default: farthest from the boundary)");
  app->add_option("--event", o.events, "crossing or circuit event, e.g. \"cross(primal, omega, R(2,1), vertical)\"");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Random Lipschitz height functions: exact checks, sampling and scaling studies"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file; subcommand keys go under [subcommand] sections");
  app.add_option("--seed", o.seed, "master seed")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output directory (default: stdout)");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--verdicts", o.verdicts, "verdict threshold file (default: bundled config/verdicts.json)");
  app.add_flag("--timing", o.timing, "include wall-clock seconds in JSON output");
  app.add_option("--burnin-n2", o.burnin_n2, "study burn-in is at least this times n^2 sweeps")->capture_default_str();
  add_sampler_options(&app, o);

  auto* verify = app.add_subcommand("verify", "run every exact oracle check on the built-in corpus");
  verify->add_option("--group", o.groups, "restrict to groups")
      ->check(CLI::IsMember(verify_groups()));

  auto* enumerate = app.add_subcommand("enumerate", "exact law of h(x) and event probabilities on a small domain");
  add_domain_options(enumerate, o);
  enumerate->add_option("--cap", o.cap, "maximal number of configurations")->capture_default_str();

  auto* sample = app.add_subcommand("sample", "Monte Carlo estimates of h(x)^2 and event probabilities");
  add_domain_options(sample, o);

  auto* variance = app.add_subcommand("variance-scan", "E[h(x)^2] at the deepest vertex of L(n) against ln n");
  add_lattice_options(variance, o);
  variance->add_option("--sizes", o.sizes, "domain sizes n")->delimiter(',')->capture_default_str();

  auto* loop = app.add_subcommand("loop-scan", "ω and dual E5 circuit probabilities around L(n) in L(ratio n)");
  add_lattice_options(loop, o);
  loop->add_option("--sizes", o.sizes, "inner sizes n")->delimiter(',')->capture_default_str();
  loop->add_option("--ratio", o.ratio, "outer size factor")->capture_default_str();

  auto* tail = app.add_subcommand("tail-scan", "P[h(x) >= 2m+1] in L(box)");
  add_lattice_options(tail, o);
  tail->add_option("--box", o.box, "domain size")->capture_default_str();
  tail->add_option("--m", o.m_values, "levels m")->delimiter(',')->capture_default_str();

  auto* torus = app.add_subcommand("torus-identity", "E[h(x)^2] = E[(h(x)-h(y))^2] + 1 on the torus T(N)");
  add_lattice_options(torus, o);
  torus->add_option("--torus-n", o.torus_n, "torus size N")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*enumerate) return cmd_enumerate(o);
    if (*sample) return cmd_sample(o);
    if (*variance) return study_exit(o, variance_scan(study_of(o), thresholds_of(o)));
    if (*loop) return study_exit(o, loop_scan(study_of(o), thresholds_of(o)));
    if (*tail) return study_exit(o, tail_scan(study_of(o), thresholds_of(o)));
    if (*torus) return study_exit(o, torus_identity(study_of(o), thresholds_of(o)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
