#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "lipschitz/errors.hpp"
#include "lipschitz/oracle.hpp"
#include "lipschitz/studies.hpp"
#include "lipschitz/study_io.hpp"

using namespace lipschitz;
using testing::q;

namespace {

Thresholds shipped() { return load_thresholds(default_thresholds_path()); }

StudyConfig small(const char* kind, double c) {
  StudyConfig cfg;
  cfg.kind = LatticeKind::parse(kind);
  cfg.c = EdgeWeight::of(c);
  cfg.sampler.sweeps = 2000;
  cfg.sampler.burnin = 0;
  cfg.sampler.seed = 31;
  cfg.chains = 2;
  cfg.burnin_n2 = 10;
  return cfg;
}

std::string csv(const StudyResult& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

std::string json_text(const StudyResult& r) {
  std::ostringstream os;
  write_json(os, r);
  return os.str();
}

}  // namespace

TEST_SUITE("studies") {
  TEST_CASE("regimes") {
    CHECK(regime(kHoneycomb, 1.0) == Regime::delocalized);
    CHECK(regime(kHoneycomb, 2.0) == Regime::delocalized);
    CHECK(regime(kHoneycomb, 3.0) == Regime::exploratory);
    CHECK(regime(kHoneycomb, 2 + std::sqrt(3.0)) == Regime::exploratory);
    CHECK(regime(kHoneycomb, 4.0) == Regime::localized);
    CHECK(regime(kSquare, 2.0) == Regime::exploratory);
    CHECK(regime(kSquare, 3.0) == Regime::localized);
    CHECK(regime(LatticeKind::parse("square-octagon"), 1.5) == Regime::delocalized);
    CHECK(regime(LatticeKind::parse("triangular"), 1.5) == Regime::exploratory);
    CHECK(regime(LatticeKind::parse("triangular"), 2.0) == Regime::localized);
    CHECK(regime(LatticeKind::parse("dotted-honeycomb"), 1.0) == Regime::exploratory);
  }

  TEST_CASE("verdict thresholds file") {
    Thresholds t = shipped();
    CHECK(t.version == 1);
    CHECK(t.deloc_min_slope_se > 0);
    CHECK(t.loop_max_violations == 0);
    CHECK_THROWS_AS(parse_thresholds("not json"), InvalidArgument);
    CHECK_THROWS_AS(parse_thresholds(R"({"version": 2})"), InvalidArgument);
    CHECK_THROWS_AS(parse_thresholds(R"({"version": 1, "variance_scan": {}})"), InvalidArgument);
    CHECK_THROWS_AS(load_thresholds("/nonexistent/verdicts.json"), InvalidArgument);
  }

  TEST_CASE("configuration checks") {
    StudyConfig cfg = small("honeycomb", 2.0);
    cfg.sizes = {4, 2};
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.sizes = {2, 4};
    cfg.ratio = 1;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.ratio = 3;
    cfg.validate();
    CHECK(cfg.burnin_for(4) == 160);
    cfg.sampler.burnin = 1000;
    CHECK(cfg.burnin_for(4) == 1000);
  }

  TEST_CASE("variance scan at n = 1 matches the oracle") {
    StudyConfig cfg = small("honeycomb", 1.0);
    cfg.sizes = {1};
    cfg.sampler.sweeps = 20000;
    cfg.chains = 4;
    StudyResult r = variance_scan(cfg, shipped());
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    auto d = enumerate_heights<Rational>(Model::uniform(p.graph, EdgeWeight::of(q(1))),
                                         pm1_bc(p.num_vertices(), p.boundary));
    double truth = marginal_stats(d, deepest_vertex(p)).second_moment.get_d();
    const Row& row = r.row("variance-scan", 1);
    CHECK(row.nsamples == 80000);
    CHECK(std::abs(row.estimate - truth) <= 3 * row.se);
    CHECK(r.regime == Regime::delocalized);
  }

  TEST_CASE("tail scan: m = 0 is one half by symmetry, unseen levels are censored") {
    StudyConfig cfg = small("honeycomb", 1.0);
    cfg.box = 1;
    cfg.m_values = {0, 4};
    cfg.sampler.sweeps = 20000;
    StudyResult r = tail_scan(cfg, shipped());
    const Row& half = r.row("tail-scan/m0", 1);
    CHECK(std::abs(half.estimate - 0.5) <= 3 * half.se);
    const Row& far = r.row("tail-scan/m4", 1);
    CHECK(far.censored);
    CHECK(far.estimate == doctest::Approx(3.0 / far.nsamples));
    CHECK(csv(r).find(",<") != std::string::npos);
    CHECK(r.verdicts.empty());
  }

  TEST_CASE("loop scan: no sample has a dual E5 circuit without an omega circuit") {
    StudyConfig cfg = small("honeycomb", 4.0);
    cfg.sizes = {1, 2};
    cfg.sampler.sweeps = 500;
    StudyResult r = loop_scan(cfg, shipped());
    CHECK(r.violations == 0);
    CHECK(r.row("loop-scan/a", 2).estimate >= r.row("loop-scan/b", 2).estimate);
    CHECK(r.row("loop-scan/violations", 1).estimate == 0);
    CHECK(r.regime == Regime::localized);
  }

  TEST_CASE("oversized studies fail cleanly") {
    StudyConfig cfg = small("honeycomb", 1.0);
    cfg.sizes = {400};
    cfg.max_vertices = 100000;
    CHECK_THROWS_AS(loop_scan(cfg, shipped()), CapExceeded);
    CHECK_THROWS_AS(variance_scan(cfg, shipped()), CapExceeded);
  }

  TEST_CASE("torus identity on a small torus") {
    StudyConfig cfg = small("honeycomb", 2.0);
    cfg.torus_n = 2;
    cfg.sampler.sweeps = 20000;
    StudyResult r = torus_identity(cfg, shipped());
    const Row& gap = r.row("torus-identity/gap", 2);
    CHECK(std::abs(gap.estimate) <= 3 * gap.se);
    CHECK(r.ok());
  }

  TEST_CASE("verdicts are recomputable from the stored rows") {
    StudyConfig cfg = small("honeycomb", 2.0);
    cfg.sizes = {1, 2, 3};
    StudyResult r = variance_scan(cfg, shipped());
    REQUIRE(r.fit.has_value());
    REQUIRE(r.verdicts.size() == 2);
    StudyResult copy = r;
    copy.fit.reset();
    copy.verdicts.clear();
    evaluate(copy, shipped());
    REQUIRE(copy.verdicts.size() == r.verdicts.size());
    for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
      CHECK(copy.verdicts[i].name == r.verdicts[i].name);
      CHECK(copy.verdicts[i].pass == r.verdicts[i].pass);
      CHECK(copy.verdicts[i].value == r.verdicts[i].value);
    }
    CHECK(copy.fit->slope == r.fit->slope);
  }

  TEST_CASE("JSON round trip and CSV layout") {
    StudyConfig cfg = small("square", 3.0);
    cfg.sizes = {1, 2};
    StudyResult r = variance_scan(cfg, shipped());
    std::string text = json_text(r);
    std::istringstream in(text);
    StudyResult back = read_json(in);
    CHECK(json_text(back) == text);
    CHECK(csv(back) == csv(r));
    std::string table = csv(r);
    CHECK(table.rfind(csv_header() + "\n", 0) == 0);
    CHECK(table.find("variance-scan,square,3,1,") != std::string::npos);
    CHECK(text.find("wall_seconds") == std::string::npos);
    std::istringstream bad("{\"format\": 9}");
    CHECK_THROWS_AS(read_json(bad), InvalidArgument);
  }

  TEST_CASE("reruns are byte-identical and independent of the thread count") {
    StudyConfig cfg = small("honeycomb", 2.0);
    cfg.sizes = {1, 2};
    cfg.chains = 3;
    std::string a = csv(variance_scan(cfg, shipped()));
    std::string b = csv(variance_scan(cfg, shipped()));
    cfg.threads = 3;
    std::string c = csv(variance_scan(cfg, shipped()));
    CHECK(a == b);
    CHECK(a == c);
    cfg.sampler.seed = 32;
    CHECK(csv(variance_scan(cfg, shipped())) != a);
    CHECK(study_seed(1, "variance-scan", 4) != study_seed(1, "variance-scan", 8));
    CHECK(study_seed(1, "variance-scan", 4) != study_seed(1, "loop-scan", 4));
  }
}
