#include <catch2/catch_amalgamated.hpp>

#include "congestcut/cut_tester.hpp"
#include "congestcut/families.hpp"

using namespace congestcut;

namespace {

EdgeSubset all_but(const Multigraph& g, int id) {
    auto sub = EdgeSubset::all(g.edge_count());
    sub.reset(id);
    return sub;
}

}  // namespace

TEST_CASE("tester with empty boundary always passes") {
    auto g = complete_graph(5);
    auto verdict = cut_tester(g, EdgeSubset::all(g.edge_count()), 3.0, 0.125, 7);
    for (int v = 0; v < 5; ++v) {
        CHECK(verdict.pass[v] == 1);
        CHECK(verdict.hits[v] == 0);
        CHECK(verdict.component[v] == 0);
    }
}

TEST_CASE("tester parameters") {
    auto g = cycle_graph(4);
    auto verdict = cut_tester(g, EdgeSubset(4), 1.0, 0.125, 1);
    CHECK(verdict.p_prime == 0.5);
    CHECK(verdict.experiments == static_cast<int>(std::ceil(8 * std::log2(4.0) * 64)));

    auto dumb = dumbbell_graph(5);
    auto v2 = cut_tester(dumb, EdgeSubset(dumb.edge_count()), 10.0, 0.125, 1);
    CHECK(v2.experiments == 1701);

    CHECK_THROWS_AS(cut_tester(g, EdgeSubset(4), 0.0, 0.125, 1), InvalidParameter);
    CHECK_THROWS_AS(cut_tester(g, EdgeSubset(4), -2.0, 0.125, 1), InvalidParameter);
    CHECK_THROWS_AS(cut_tester(g, EdgeSubset(4), 1.0, 0.0, 1), InvalidParameter);
    CHECK_THROWS_AS(cut_tester(g, EdgeSubset(4), 1.0, 0.25, 1), InvalidParameter);
    CHECK_THROWS_AS(cut_tester(g, EdgeSubset(4), 1.0, 0.125, 1, {}, 0), InvalidParameter);
    CHECK_THROWS_AS(cut_tester(g, EdgeSubset(6), 1.0, 0.125, 1), InvalidParameter);
}

TEST_CASE("light dumbbell boundary passes") {
    auto g = dumbbell_graph(5);  // bridge is edge 20, weight 1
    int passes = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto verdict = cut_tester(g, all_but(g, 20), 10.0, 0.125, seed);
        REQUIRE(verdict.component[0] == 0);
        REQUIRE(verdict.component[5] == 5);
        if (verdict.pass[0] == 1 && verdict.pass[5] == 1) ++passes;
    }
    CHECK(passes >= 95);
}

TEST_CASE("heavy dumbbell boundary fails") {
    auto g = dumbbell_graph(5);
    int fails = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto verdict = cut_tester(g, all_but(g, 20), 0.8, 0.125, seed);
        if (verdict.pass[0] == 0 && verdict.pass[5] == 0) ++fails;
    }
    CHECK(fails >= 95);
}

TEST_CASE("verdicts are constant on components") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto g = random_multigraph(10, 8, 3, seed);
        auto rng = make_rng(seed, 0x5b5b);
        EdgeSubset sub(g.edge_count());
        for (int id = 0; id < g.edge_count(); ++id)
            if (bernoulli(rng, 0.5)) sub.set(id);
        auto verdict = cut_tester(g, sub, 4.0, 0.2, seed * 31);
        for (int v = 0; v < 10; ++v) {
            const int rep = verdict.component[v];
            CHECK(verdict.pass[v] == verdict.pass[rep]);
            CHECK(verdict.hits[v] == verdict.hits[rep]);
        }
    }
}

TEST_CASE("isolated side of a split graph passes") {
    Multigraph g(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 2}, {4, 5, 2}, {3, 5, 2}});
    EdgeSubset sub(6);
    sub.set(0);
    sub.set(1);
    sub.set(2);
    auto verdict = cut_tester(g, sub, 1.0, 0.125, 3);
    for (int v : {0, 1, 2}) {
        CHECK(verdict.pass[v] == 1);  // no edge leaves the triangle
        CHECK(verdict.hits[v] == 0);
    }
}

TEST_CASE("tester simulate equals central") {
    auto g = cycle_graph(6);
    EdgeSubset sub(6);
    sub.set(0);
    sub.set(1);
    sub.set(3);
    ExecPolicy sim;
    sim.backend = Backend::Simulate;
    ExecPolicy cen;
    cen.backend = Backend::Central;
    auto a = cut_tester(g, sub, 2.5, 0.125, 11, sim, 2);
    auto b = cut_tester(g, sub, 2.5, 0.125, 11, cen, 2);
    CHECK(a.pass == b.pass);
    CHECK(a.hits == b.hits);
    CHECK(a.component == b.component);
    CHECK(a.experiments == b.experiments);
}

TEST_CASE("tester ledger charges") {
    auto g = cycle_graph(8);
    CostLedger ledger;
    ExecPolicy p;
    p.ledger = &ledger;
    auto verdict = cut_tester(g, EdgeSubset(8), 2.0, 0.125, 5, p);
    REQUIRE(ledger.entries().size() == 2);
    CHECK(ledger.entries()[0].primitive == "thurimella_multi");
    CHECK(ledger.entries()[0].k == 1);
    CHECK(ledger.entries()[1].k == verdict.experiments);
    CHECK(ledger.pipelined_instances() == 1 + verdict.experiments);
}
