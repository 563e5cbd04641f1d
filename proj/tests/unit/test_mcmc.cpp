#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lipschitz/errors.hpp"
#include "lipschitz/lattice.hpp"
#include "lipschitz/mcmc.hpp"
#include "lipschitz/studies.hpp"

using namespace lipschitz;
using testing::hf;
using testing::path;
using testing::q;

namespace {

BoundaryCondition pinned_ends(int a, int b) {
  BoundaryCondition xi(3);
  xi.set(0, a).set(2, b);
  return xi;
}

Observable square_at(VertexId x) {
  return {"h2", [x](const ChainState& s) { return double(s.h()[x]) * s.h()[x]; }};
}

}  // namespace

TEST_SUITE("mcmc") {
  TEST_CASE("single-site conditionals") {
    Model m = Model::uniform(path(3), EdgeWeight::of(q(2)));
    auto flat = heat_bath_conditional<Rational>(m, pinned_ends(1, 1), hf({1, 1, 1}), 1);
    REQUIRE(flat.size() == 3);
    CHECK(flat[0] == std::pair<int, Rational>{-1, q(1, 6)});
    CHECK(flat[1] == std::pair<int, Rational>{1, q(4, 6)});
    CHECK(flat[2] == std::pair<int, Rational>{3, q(1, 6)});
    auto forced = heat_bath_conditional<Rational>(m, pinned_ends(1, 5), hf({1, 3, 5}), 1);
    REQUIRE(forced.size() == 1);
    CHECK(forced[0] == std::pair<int, Rational>{3, q(1)});
    auto split = heat_bath_conditional<Rational>(m, pinned_ends(1, 3), hf({1, 1, 3}), 1);
    REQUIRE(split.size() == 2);
    CHECK(split[0].second == q(1, 2));
    CHECK(split[1].second == q(1, 2));
  }

  TEST_CASE("both kernels fix the exact distribution") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    Model m = Model::uniform(p.graph, EdgeWeight::of(q(3, 2)));
    for (BoundaryCondition xi : {pm1_bc(p.num_vertices(), p.boundary), const_bc(p.num_vertices(), p.boundary, 1)}) {
      auto d = enumerate_heights<Rational>(m, xi);
      auto order = free_sites(m, xi);
      CHECK(tv_distance(apply_sweep_kernel(d, m, xi, order), d) == 0);
      CHECK(tv_distance(apply_cluster_kernel(d, m, xi), d) == 0);
    }
    Model mp = Model::uniform(path(3), EdgeWeight::of(q(2)));
    auto dp = enumerate_heights<Rational>(mp, pinned_ends(1, 1));
    CHECK(tv_distance(apply_site_kernel(dp, mp, pinned_ends(1, 1), 1), dp) == 0);
  }

  TEST_CASE("a fully pinned domain only refreshes B") {
    Model m = Model::uniform(path(3), EdgeWeight::of(2.0));
    BoundaryCondition xi = const_bc(3, {0, 1, 2}, 1);
    ChainState s(m, xi, make_stream(1, 0));
    CHECK(s.free_sites().empty());
    for (int i = 0; i < 20; ++i) {
      s.sweep();
      s.cluster_sweep();
      CHECK(s.h() == HeightField(3, 1));
      CHECK(s.omega() == omega_from(m.graph(), s.h(), s.b()));
    }
  }

  TEST_CASE("same stream, same trajectory") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{2});
    Model m = Model::uniform(p.graph, EdgeWeight::of(2.0));
    BoundaryCondition xi = pm1_bc(p.num_vertices(), p.boundary);
    ChainState a(m, xi, make_stream(42, 3)), b(m, xi, make_stream(42, 3));
    for (int i = 0; i < 30; ++i) {
      a.sweep(SiteOrder::shuffled);
      b.sweep(SiteOrder::shuffled);
      if (i % 3 == 0) {
        a.cluster_sweep();
        b.cluster_sweep();
      }
      a.validate();
    }
    CHECK(a.h() == b.h());
    CHECK(a.b() == b.b());
    CHECK(a.steps() == b.steps());
  }

  TEST_CASE("run matches the oracle within 3 SE") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    VertexId x = deepest_vertex(p);
    BoundaryCondition xi = pm1_bc(p.num_vertices(), p.boundary);
    for (long c : {1L, 2L}) {
      Model exact = Model::uniform(p.graph, EdgeWeight::of(q(c)));
      double truth = marginal_stats(enumerate_heights<Rational>(exact, xi), x).second_moment.get_d();
      SamplerConfig cfg;
      cfg.sweeps = 20000;
      cfg.burnin = 500;
      cfg.seed = 2024;
      RunResult r = run(exact, xi, cfg, {square_at(x)}, false, 2);
      const Estimate& e = r["h2"].estimate;
      CAPTURE(c);
      CHECK(e.n == 40000);
      CHECK(std::abs(e.mean - truth) <= 3 * e.se);
      CHECK(e.se > 0);
    }
  }

  TEST_CASE("run output depends only on seed and config") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    Model m = Model::uniform(p.graph, EdgeWeight::of(2.0));
    BoundaryCondition xi = pm1_bc(p.num_vertices(), p.boundary);
    VertexId x = deepest_vertex(p);
    SamplerConfig cfg;
    cfg.sweeps = 500;
    cfg.burnin = 10;
    RunResult a = run(m, xi, cfg, {square_at(x)}, true, 4, 1);
    RunResult b = run(m, xi, cfg, {square_at(x)}, true, 4, 3);
    CHECK(a["h2"].series == b["h2"].series);
    CHECK(a["h2"].estimate.mean == b["h2"].estimate.mean);
    CHECK(a["h2"].estimate.se == b["h2"].estimate.se);
    CHECK(a.sweeps == 4 * 510);
    cfg.seed = 2;
    CHECK(run(m, xi, cfg, {square_at(x)}, true, 4)["h2"].series != a["h2"].series);
  }

  TEST_CASE("sampler configuration errors") {
    Model m = Model::uniform(path(3), EdgeWeight::of(2.0));
    SamplerConfig cfg;
    cfg.sweeps = 0;
    CHECK_THROWS_AS(run(m, pinned_ends(1, 1), cfg, {square_at(1)}), InvalidArgument);
    cfg.sweeps = 100;
    cfg.thin = 0;
    CHECK_THROWS_AS(run(m, pinned_ends(1, 1), cfg, {square_at(1)}), InvalidArgument);
    cfg.thin = 1;
    cfg.sample_cap = 10;
    CHECK_THROWS_AS(run(m, pinned_ends(1, 1), cfg, {square_at(1)}, true), CapExceeded);
    cfg.sample_cap = 1000;
    CHECK_THROWS_AS(run(m, pinned_ends(1, 9), cfg, {square_at(1)}), Inadmissible);
  }

  TEST_CASE("cluster period default") {
    CHECK(auto_cluster_period(Model::uniform(path(2), EdgeWeight::of(2.0))) == 4);
    CHECK(auto_cluster_period(Model::uniform(path(2), EdgeWeight::of(2.5))) == 1);
  }

  TEST_CASE("torus sampler") {
    LatticePatch t = build_patch(kSquare, Torus{1});
    VertexId root = 0;
    VertexId far = 0;
    std::vector<int> dist = bfs_distances(t.graph, std::vector<VertexId>{root});
    for (VertexId v = 0; v < t.num_vertices(); ++v)
      if (dist[v] > dist[far]) far = v;
    SamplerConfig cfg;
    cfg.sweeps = 40000;
    cfg.burnin = 100;
    cfg.seed = 77;
    std::vector<Observable> obs{
        square_at(far),
        {"root", [root](const ChainState& s) { return double(s.h()[root]) * s.h()[root]; }},
        {"d0", [root](const ChainState& s) {
           double d = s.h()[root] - s.h()[root];
           return d * d;
         }}};
    RunResult r = torus_run(t, EdgeWeight::of(q(2)), root, cfg, obs, 2);
    CHECK(r["root"].estimate.mean == 1.0);
    CHECK(r["d0"].estimate.mean == 0.0);
    Model m = Model::uniform(t.graph, EdgeWeight::of(q(2)));
    double truth = marginal_stats(enumerate_heights<Rational>(m, pm1_bc(t.num_vertices(), {root})), far)
                       .second_moment.get_d();
    const Estimate& e = r["h2"].estimate;
    CHECK(std::abs(e.mean - truth) <= 3 * e.se);
    CHECK_THROWS(torus_run(build_patch(kSquare, Lozenge{1}), EdgeWeight::of(2.0), 0, cfg, obs));
  }

  TEST_CASE("irreducibility path from the minimal to the maximal extension") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    BoundaryCondition xi = pm1_bc(p.num_vertices(), p.boundary);
    Extensions ex = extremal_extensions(p.graph, xi);
    HeightField h = ex.min;
    for (VertexId x : climb_path(p.graph, xi)) {
      h[x] += 2;
      REQUIRE(validate_height(p.graph, h));
      REQUIRE(xi.constrained(x) ? xi.allows(x, h[x]) : true);
    }
    CHECK(h == ex.max);
  }
}
