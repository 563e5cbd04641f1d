#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "lipschitz/coupling.hpp"
#include "lipschitz/lattice.hpp"
#include "lipschitz/oracle.hpp"

using namespace lipschitz;
using testing::path;
using testing::hf;
using testing::q;

namespace {

// Path 0-1-2 with both ends pinned to 1.
HeightDistribution<Rational> path_example(long c) {
  BoundaryCondition xi(3);
  xi.set(0, 1).set(2, 1);
  return enumerate_heights<Rational>(Model::uniform(path(3), EdgeWeight::of(q(c))), xi);
}

// Single edge with both endpoints pinned.
JointDistribution<Rational> pinned_edge(int a, int b, long c) {
  BoundaryCondition xi(2);
  xi.set(0, a).set(1, b);
  return enumerate_joint<Rational>(Model::uniform(path(2), EdgeWeight::of(q(c))), xi);
}

Rational omega_open(const JointDistribution<Rational>& d) {
  FiniteGraph g = path(2);
  return event_probability(d, [&](const JointConfig& x) { return omega_from(g, x.h, x.b)[0]; });
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("three-vertex path") {
    auto d1 = path_example(1);
    REQUIRE(d1.size() == 3);
    for (const Rational& p : d1.probs) CHECK(p == q(1, 3));
    auto s1 = marginal_stats(d1, 1);
    CHECK(s1.mean == 1);
    CHECK(s1.variance == q(8, 3));
    CHECK(event_probability(d1, [](const HeightField& h) { return h[1] >= 1; }) == q(2, 3));
    CHECK(event_probability(d1, [](const HeightField&) { return true; }) == 1);
    CHECK(event_probability(d1, [](const HeightField&) { return false; }) == 0);

    auto d2 = path_example(2);
    auto s2 = marginal_stats(d2, 1);
    CHECK(s2.pmf.at(-1) == q(1, 6));
    CHECK(s2.pmf.at(1) == q(4, 6));
    CHECK(s2.pmf.at(3) == q(1, 6));
    CHECK(s2.variance == q(4, 3));
    CHECK(d2.partition == 6);
    CHECK(marginal_stats(d2, 0).variance == 0);
    CHECK_THROWS_AS(marginal_stats(d2, 5), InvalidArgument);
  }

  TEST_CASE("fully pinned domain is a point mass") {
    auto d = enumerate_heights<Rational>(Model::uniform(path(3), EdgeWeight::of(q(2))),
                                         const_bc(3, {0, 1, 2}, 3));
    CHECK(d.size() == 1);
    CHECK(d.probs[0] == 1);
  }

  TEST_CASE("float and rational modes agree") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    BoundaryCondition xi = pm1_bc(p.num_vertices(), p.boundary);
    auto exact = enumerate_heights<Rational>(Model::uniform(p.graph, EdgeWeight::of(q(3, 2))), xi);
    auto approx = enumerate_heights<double>(Model::uniform(p.graph, EdgeWeight::of(1.5)), xi);
    REQUIRE(exact.size() == approx.size());
    CHECK(exact.total() == 1);
    CHECK(approx.total() == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < exact.size(); ++i) {
      CHECK(exact.configs[i] == approx.configs[i]);
      CHECK(exact.probs[i].get_d() == doctest::Approx(approx.probs[i]).epsilon(1e-10));
    }
  }

  TEST_CASE("enumeration cap") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    EnumerationOptions tiny;
    tiny.cap = 10;
    CHECK_THROWS_AS(enumerate_heights<double>(Model::uniform(p.graph, EdgeWeight::of(1.0)),
                                              pm1_bc(p.num_vertices(), p.boundary), tiny),
                    CapExceeded);
  }

  TEST_CASE("threaded enumeration matches the serial one") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    Model m = Model::uniform(p.graph, EdgeWeight::of(q(2)));
    BoundaryCondition xi = pm1_bc(p.num_vertices(), p.boundary);
    EnumerationOptions par;
    par.threads = 3;
    auto a = enumerate_heights<Rational>(m, xi);
    auto b = enumerate_heights<Rational>(m, xi, par);
    CHECK(a.configs == b.configs);
    CHECK(a.probs == b.probs);
  }

  TEST_CASE("joint law on a single edge") {
    CHECK(omega_open(pinned_edge(1, 1, 2)) == q(1, 2));
    CHECK(omega_open(pinned_edge(1, 3, 2)) == 1);
    CHECK(omega_open(pinned_edge(1, -1, 2)) == 0);
    CHECK(omega_open(pinned_edge(-1, -1, 1)) == 0);
    CHECK(pinned_edge(1, 1, 2).size() == 2);
  }

  TEST_CASE("FK-Ising on a single edge") {
    FiniteGraph k2 = path(2);
    auto free = enumerate_fk<Rational>(k2, {q(1, 2)});
    CHECK(free.probability(EdgeConfig::parse("1")) == q(1, 3));
    auto wired = enumerate_fk<Rational>(k2, {q(1, 2)}, {}, {0, 1});
    CHECK(wired.probability(EdgeConfig::parse("1")) == q(1, 2));
    auto forced = enumerate_fk<Rational>(testing::cycle(3), {q(1, 3), q(1, 3), q(1, 3)}, {1, 1, 1});
    CHECK(forced.size() == 1);
    CHECK(forced.configs[0] == EdgeConfig(3, true));
  }

  TEST_CASE("sign symmetry and log-concavity") {
    for (const char* kind : {"honeycomb", "square"}) {
      LatticePatch p = build_patch(LatticeKind::parse(kind), Lozenge{1});
      Model m = Model::uniform(p.graph, EdgeWeight::of(q(3, 2)));
      auto pm = enumerate_heights<Rational>(m, pm1_bc(p.num_vertices(), p.boundary));
      auto one = enumerate_heights<Rational>(m, const_bc(p.num_vertices(), p.boundary, 1));
      for (VertexId x = 0; x < p.num_vertices(); ++x) {
        auto s = marginal_stats(pm, x);
        for (auto [k, pk] : s.pmf) CHECK(s.pmf.at(-k) == pk);
        CHECK(is_log_concave(s.pmf));
        auto t = marginal_stats(one, x);
        for (auto [k, pk] : t.pmf) CHECK(t.pmf.at(2 - k) == pk);
      }
    }
    CHECK_FALSE(is_log_concave(std::map<int, double>{{-1, 0.4}, {1, 0.1}, {3, 0.5}}));
    CHECK_FALSE(is_log_concave(std::map<int, double>{{-1, 0.5}, {3, 0.5}}));
  }

  TEST_CASE("dominance for the absolute value") {
    // The path with h(0) = 1: a {±1} end is below a {1} end in the absolute-value
    // order, so |h(1)| is stochastically smaller.
    Model m = Model::uniform(path(3), EdgeWeight::of(q(1)));
    BoundaryCondition plus(3), pm(3);
    plus.set(0, 1).set(2, 1);
    pm.set(0, 1).set(2, ValueSet{-1, 1});
    CHECK(abs_order_leq(pm, plus));
    auto abs_h = [](const HeightField& h) {
      HeightField a = h;
      for (int& v : a.values) v = std::abs(v);
      return a;
    };
    auto lo = push_forward(enumerate_heights<Rational>(m, pm), abs_h);
    auto hi = push_forward(enumerate_heights<Rational>(m, plus), abs_h);
    auto events = threshold_events<HeightField>({{1}, {1, 3}, {1}}, [](const HeightField& h, VertexId v) { return h[v]; });
    std::function<std::vector<int>(const HeightField&)> values = [](const HeightField& h) { return h.values; };
    CHECK(check_dominance(lo, hi, events, values).ok());
    CHECK_FALSE(check_dominance(hi, lo, events, values).ok());
    CHECK(check_dominance(hi, hi, events, values).ok());
    CHECK(tv_distance(hi, hi) == 0);
  }

  TEST_CASE("1-Lipschitz counterexample to domination") {
    // f(1) = f(3) = 0 against f(1) = 0, f(3) = ±1, in heights h = 2f + 1.
    Model m = Model::uniform(path(3), EdgeWeight::of(q(1)));
    BoundaryCondition xi(3), xi2(3);
    xi.set(0, 1).set(2, 1);
    xi2.set(0, 1).set(2, ValueSet{-1, 3});
    auto d = enumerate_heights<Rational>(m, xi);
    auto d2 = enumerate_heights<Rational>(m, xi2);
    CHECK(d.size() == 3);
    CHECK(d2.size() == 4);
    auto abs_f_one = [](const HeightField& h) { return h[1] == -1 || h[1] == 3; };
    CHECK(event_probability(d, abs_f_one) == q(2, 3));
    CHECK(event_probability(d2, abs_f_one) == q(1, 2));
    std::vector<Event<HeightField>> ev{{"|f(2)|=1", abs_f_one}};
    CHECK_FALSE(check_dominance(d, d2, ev).ok());
  }

  TEST_CASE("FKG on interval boundary values") {
    LatticePatch p = build_patch(kHoneycomb, Lozenge{1});
    BoundaryCondition xi(p.num_vertices());
    for (VertexId v : p.boundary) xi.set(v, odd_range(-1, 3));
    auto d = enumerate_heights<double>(Model::uniform(p.graph, EdgeWeight::of(2.0)), xi);
    std::vector<std::vector<int>> ranges(p.num_vertices());
    for (VertexId v = 0; v < p.num_vertices(); ++v)
      for (auto [k, unused] : marginal_stats(d, v).pmf) ranges[v].push_back(k);
    auto base = threshold_events<HeightField>(ranges, [](const HeightField& h, VertexId v) { return h[v]; });
    FkgReport r = check_fkg(d, depth_two_family(base, 400));
    CHECK(r.ok());
    CHECK(r.pairs > 1000);
  }

  TEST_CASE("golden dump") {
    std::ostringstream os;
    dump(os, path_example(2));
    std::string s = os.str();
    CHECK(std::count(s.begin(), s.end(), '\n') == 3);
    CHECK(s.find("| 1/6") != std::string::npos);
    CHECK(s.find("| 2/3") != std::string::npos);
  }
}
