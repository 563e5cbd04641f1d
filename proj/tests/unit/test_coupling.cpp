#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lipschitz/coupling.hpp"
#include "lipschitz/errors.hpp"
#include "lipschitz/lattice.hpp"
#include "lipschitz/oracle.hpp"

using namespace lipschitz;
using testing::cycle;
using testing::path;
using testing::hf;
using testing::q;

TEST_SUITE("coupling") {
  TEST_CASE("Bernoulli parameters") {
    CHECK(bernoulli_p<Rational>(Model::uniform(path(2), EdgeWeight::of(q(1))))[0] == 0);
    CHECK(bernoulli_p<Rational>(Model::uniform(path(2), EdgeWeight::of(q(2))))[0] == q(1, 2));
    double crit = bernoulli_p<double>(Model::uniform(path(2), EdgeWeight::parse("2+sqrt3")))[0];
    CHECK(crit == doctest::Approx(std::sqrt(3.0) - 1));
  }

  TEST_CASE("sampling B") {
    Model flat = Model::uniform(path(500), EdgeWeight::of(1.0));
    Rng r1 = make_stream(7, 0);
    CHECK(sample_bernoulli(flat, r1).count() == 0);

    Model half = Model::uniform(path(10001), EdgeWeight::of(2.0));
    Rng a = make_stream(7, 0), b = make_stream(7, 0);
    EdgeConfig x = sample_bernoulli(half, a);
    CHECK(x == sample_bernoulli(half, b));
    CHECK(std::abs(x.count() / 10000.0 - 0.5) < 0.02);
  }

  TEST_CASE("fixed-sign edges and omega") {
    FiniteGraph e = path(2);
    CHECK(fixed_sign_edges(e, hf({1, 3}))[0]);
    CHECK(fixed_sign_edges(e, hf({-3, -1}))[0]);
    CHECK_FALSE(fixed_sign_edges(e, hf({1, 1}))[0]);
    CHECK_FALSE(fixed_sign_edges(e, hf({1, -1}))[0]);
    EdgeConfig zero(1, false), one(1, true);
    CHECK(omega_from(e, hf({1, 3}), zero)[0]);
    CHECK(omega_from(e, hf({1, 1}), one)[0]);
    CHECK_FALSE(omega_from(e, hf({1, 1}), zero)[0]);
    CHECK_FALSE(omega_from(e, hf({1, -1}), one)[0]);
  }

  TEST_CASE("omega contains the fixed-sign edges and avoids sign changes") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    auto d = enumerate_joint<Rational>(Model::uniform(p.graph, EdgeWeight::of(q(2))),
                                       pm1_bc(p.num_vertices(), p.boundary));
    for (const JointConfig& x : d.configs) {
      EdgeConfig w = omega_from(p.graph, x.h, x.b);
      CHECK(omega_consistent(p.graph, x.h, w));
      EdgeConfig fix = fixed_sign_edges(p.graph, x.h);
      for (EdgeId e = 0; e < p.num_edges(); ++e) {
        const Edge& ed = p.graph.edge(e);
        if (fix[e]) CHECK(w[e]);
        if (x.h[ed.u] * x.h[ed.v] < 0) CHECK_FALSE(w[e]);
      }
    }
  }

  TEST_CASE("nu with base level 3") {
    FiniteGraph e = path(2);
    EdgeConfig zero(1, false), one(1, true);
    CHECK_FALSE(nu_from(e, hf({1, -1}), one, 3)[0]);
    CHECK(nu_from(e, hf({1, 1}), one, 3)[0]);
    CHECK_FALSE(nu_from(e, hf({1, 1}), zero, 3)[0]);
    CHECK(nu_from(e, hf({5, 3}), zero, 3)[0]);
  }

  TEST_CASE("clusters") {
    FiniteGraph g = path(3);
    CHECK(clusters(g, EdgeConfig(2, true)).count == 1);
    CHECK(clusters(g, EdgeConfig(2, false)).count == 3);
    ClusterPartition c = clusters(g, EdgeConfig::parse("10"), {0, 0, 1});
    CHECK(c.count == 2);
    CHECK(c.cluster_of == std::vector<int>{0, 0, 1});
    CHECK_FALSE(c.touches[0]);
    CHECK(c.touches[1]);
  }

  TEST_CASE("quotient graph") {
    FiniteGraph tri = cycle(3);
    Quotient all = quotient_graph(tri, EdgeConfig(3, true));
    CHECK(all.graph.num_vertices() == 1);
    CHECK(all.graph.num_edges() == 3);
    CHECK(all.graph.has_self_loops());
    Quotient none = quotient_graph(tri, EdgeConfig(3, false));
    CHECK(none.graph.num_vertices() == 3);
    CHECK(none.graph.edges() == tri.edges());
    Quotient one = quotient_graph(tri, EdgeConfig::parse("100"));
    CHECK(one.graph.num_vertices() == 2);
    int between = 0;
    for (const Edge& e : one.graph.edges()) between += e.u != e.v;
    CHECK(between == 2);
  }

  TEST_CASE("forced signs") {
    BoundaryCondition xi(1);
    xi.set(0, ValueSet{-3, 1});
    CHECK(forced_sign(xi, 0, 1) == 1);
    CHECK(forced_sign(xi, 0, 3) == -1);
    CHECK_THROWS_AS(forced_sign(xi, 0, 5), InvalidArgument);
    xi.set(0, plus_minus_range(1, 1));
    CHECK(forced_sign(xi, 0, 1) == 0);
  }

  TEST_CASE("resampling signs") {
    FiniteGraph g = path(2);
    BoundaryCondition none(2);
    HeightField h = hf({3, 3});
    EdgeConfig w(1, true);
    Rng rng = make_stream(3, 0);
    int flipped = 0;
    for (int i = 0; i < 4000; ++i) {
      HeightField out = resample_signs(g, h, w, none, rng);
      REQUIRE((out == h || out == hf({-3, -3})));
      flipped += out[0] < 0;
    }
    CHECK(std::abs(flipped / 4000.0 - 0.5) < 0.03);

    BoundaryCondition plus = const_bc(2, {0}, 1);
    for (int i = 0; i < 50; ++i) CHECK(resample_signs(g, hf({1, 1}), w, plus, rng) == hf({1, 1}));

    // Two clusters, one pinned by ξ, one free.
    FiniteGraph p3 = path(3);
    HeightField h3 = hf({1, 1, -1});
    EdgeConfig w3 = EdgeConfig::parse("10");
    BoundaryCondition plus3 = const_bc(3, {0}, 1);
    bool seen[2] = {false, false};
    for (int i = 0; i < 200; ++i) {
      HeightField out = resample_signs(p3, h3, w3, plus3, rng);
      CHECK(out[0] == 1);
      CHECK(out[1] == 1);
      seen[out[2] > 0] = true;
    }
    CHECK(seen[0]);
    CHECK(seen[1]);
  }

  TEST_CASE("resampling rejects inconsistent input") {
    FiniteGraph g = path(2);
    Rng rng = make_stream(3, 0);
    CHECK_THROWS_AS(resample_signs(g, hf({3, 3}), EdgeConfig(1, false), BoundaryCondition(2), rng),
                    InvalidArgument);
    BoundaryCondition opposite(2);
    opposite.set(0, 1).set(1, ValueSet{-1, 3});
    CHECK_THROWS_AS(resample_signs(g, hf({1, 1}), EdgeConfig(1, true), opposite, rng), InvalidArgument);
  }

  TEST_CASE("Edwards-Sokal: omega given |h| is FK with the fixed-sign edges wired open") {
    FiniteGraph tri = cycle(3);
    Model m = Model::uniform(tri, EdgeWeight::of(q(3)));
    BoundaryCondition xi = pm1_bc(3, {0});
    auto joint = enumerate_joint<Rational>(m, xi);
    HeightField target = hf({1, 1, 1});
    auto given = condition(joint, [&](const JointConfig& x) {
      for (int v = 0; v < 3; ++v)
        if (std::abs(x.h[v]) != target[v]) return false;
      return true;
    });
    auto omega = push_forward(given, [&](const JointConfig& x) { return omega_from(tri, x.h, x.b); });
    auto fk = enumerate_fk<Rational>(tri, bernoulli_p<Rational>(m));
    CHECK(tv_distance(omega, fk) == 0);
  }
}
