#include <catch2/catch_amalgamated.hpp>

#include "congestcut/families.hpp"
#include "congestcut/layering.hpp"

using namespace congestcut;

namespace {

ExecPolicy central_policy() {
    ExecPolicy p;
    p.backend = Backend::Central;
    return p;
}

}  // namespace

TEST_CASE("layering parameters follow the guess and the graph size") {
    auto a = layering_params(16, 1.0, 0.5);
    CHECK(a.p == 1.0);
    CHECK(a.layers == 80);
    CHECK(a.kappa == 100.0);
    CHECK(a.delta == 0.125);
    CHECK(a.experiments == 2048);

    auto b = layering_params(10, 4.0, 0.5);
    CHECK(b.p == Catch::Approx(0.5 * std::log2(10.0) / 8.0));
    CHECK(b.layers == 67);
    CHECK(b.kappa == 400.0);
    CHECK(b.experiments == 1701);

    CHECK_THROWS_AS(layering_params(10, 0.5, 0.5), InvalidParameter);
    CHECK_THROWS_AS(layering_params(10, 1.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(layering_params(10, 1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(layering_params(1, 1.0, 0.5), InvalidParameter);
}

TEST_CASE("candidate tuples order lexicographically") {
    CHECK(CandidateTuple{0, 0, 1, 3} < CandidateTuple{0, 0, 2, 0});
    CHECK(CandidateTuple{0, 1, 0, 0} < CandidateTuple{1, 0, 0, 0});
    CHECK(CandidateTuple{2, 4, 6, 7} == CandidateTuple{2, 4, 6, 7});
    CHECK(CandidateTuple{0, 0, 1, 2} < CandidateTuple{0, 0, 1, 5});
}

TEST_CASE("single edge epoch returns the lone canonical cut") {
    Multigraph g(2, {{0, 1, 1}});
    int valued = 0;
    for (std::uint64_t s = 1; s <= 200; ++s) {
        auto r = collect_family_and_test(g, 1.0, 0.5, s, central_policy());
        if (!r) continue;
        ++valued;
        CHECK(r->cut.members == std::vector<int>{0});
        CHECK(r->cut.weight == 1);
        CHECK(r->component_id == 0);
    }
    CHECK(valued >= 190);

    CHECK_FALSE(collect_family_and_test(g, 1.0, 0.5, 203, central_policy()).has_value());
}

TEST_CASE("huge guess degenerates to passing singletons") {
    auto g = cycle_graph(8);
    for (std::uint64_t s = 1; s <= 20; ++s) {
        auto r = collect_family_and_test(g, 1e6, 0.5, s, central_policy());
        REQUIRE(r.has_value());
        CHECK(r->cut.members == std::vector<int>{0});
        CHECK(r->cut.weight == 2);
    }
}

TEST_CASE("epochs on the dumbbell usually surface the bridge") {
    auto g = dumbbell_graph(5);
    int valued = 0, bridge = 0;
    for (std::uint64_t s = 1; s <= 200; ++s) {
        auto r = collect_family_and_test(g, 1.0, 0.5, s, central_policy());
        if (!r) continue;
        ++valued;
        if (r->cut.weight == 1) ++bridge;
    }
    CHECK(valued == 200);
    CHECK(bridge >= 110);
}

TEST_CASE("simulate and central epochs agree on a deterministic instance") {
    auto g = cycle_graph(4);
    ExecPolicy sim;
    ExecStats stats;
    sim.stats = &stats;
    auto rs = collect_family_and_test(g, 1e6, 0.5, 7, sim);
    auto rc = collect_family_and_test(g, 1e6, 0.5, 7, central_policy());
    REQUIRE(rs.has_value());
    REQUIRE(rc.has_value());
    CHECK(rs->cut.members == rc->cut.members);
    CHECK(rs->cut.weight == rc->cut.weight);
    CHECK(rs->layer == rc->layer);
    CHECK(stats.sim_runs > 0);
}

TEST_CASE("simulated epoch on a small dumbbell finds the bridge") {
    auto g = dumbbell_graph(3);
    ExecPolicy sim;
    ExecStats stats;
    sim.stats = &stats;
    auto r = collect_family_and_test(g, 1.0, 0.5, 3, sim, 1);
    REQUIRE(r.has_value());
    CHECK(r->cut.weight == 1);
    CHECK(r->cut.weight == cut_weight(g, r->cut.members));
    CHECK(stats.measured_rounds > 0);
}

TEST_CASE("epoch ledger holds one consolidated pipelined charge") {
    auto g = dumbbell_graph(5);
    CostLedger ledger;
    ExecPolicy policy = central_policy();
    policy.ledger = &ledger;
    collect_family_and_test(g, 1.0, 0.5, 5, policy);
    REQUIRE(ledger.entries().size() == 1);
    const auto& e = ledger.entries()[0];
    CHECK(e.primitive == "thurimella_multi");
    CHECK(e.n == 10);
    CHECK(e.k == 66 * 1702);
    CHECK(e.rounds == ledger_charge("thurimella_multi", e.diameter, 10, 66 * 1702));
    CHECK(ledger.pipelined_instances() == 66 * 1702);
}

TEST_CASE("full pipeline recovers the dumbbell bridge with ratio one") {
    auto g = dumbbell_graph(5);
    int exact = 0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        auto r = layering_mincut(g, 0.5, s, central_policy());
        CHECK(r.cut.weight >= 1);
        if (r.cut.weight == 1) ++exact;
        CHECK(r.epochs_per_guess == 11);
        CHECK(r.layers == 67);
        CHECK(r.experiments == 1701);
        CHECK(r.guesses.front() == 1.0);
        CHECK(std::is_sorted(r.guesses.begin(), r.guesses.end()));
    }
    CHECK(exact >= 9);
}

TEST_CASE("full pipeline stays near the cycle connectivity") {
    auto g = cycle_graph(16);
    for (std::uint64_t s = 1; s <= 5; ++s) {
        auto r = layering_mincut(g, 0.5, s, central_policy());
        CHECK(r.cut.weight == 2);
        CHECK(r.guess_value >= 1.0);
        CHECK(static_cast<int>(r.cut.members.size()) < 16);
    }
}

TEST_CASE("simulated pipeline matches the cycle min cut") {
    auto g = cycle_graph(4);
    ExecPolicy sim;
    ExecStats stats;
    sim.stats = &stats;
    auto r = layering_mincut(g, 0.5, 11, sim);
    CHECK(r.cut.weight == 2);
    CHECK(stats.measured_rounds > 0);
    CHECK(stats.sim_runs > 0);

    auto rc = layering_mincut(g, 0.5, 11, central_policy());
    CHECK(rc.cut.weight == 2);
}

TEST_CASE("pipeline ledger consolidates every stage") {
    auto g = dumbbell_graph(5);
    CostLedger ledger;
    ExecPolicy policy = central_policy();
    policy.ledger = &ledger;
    auto r = layering_mincut(g, 0.5, 2, policy);

    REQUIRE(ledger.entries().size() == 6);
    CHECK(ledger.entries()[0].primitive == "thurimella_multi");
    CHECK(ledger.entries()[0].k == r.approx_instances);
    CHECK(ledger.entries()[1].primitive == "connectivity_extra");
    CHECK(ledger.entries()[2].primitive == "thurimella_multi");
    CHECK(ledger.entries()[2].k == r.test_instances);
    CHECK(ledger.entries()[3].primitive == "bfs");
    CHECK(ledger.entries()[4].primitive == "convergecast");
    CHECK(ledger.entries()[5].primitive == "broadcast");

    CHECK(r.guesses_executed == 1);
    CHECK(r.test_instances ==
          static_cast<std::int64_t>(r.guesses_executed) * r.epochs_per_guess *
              (r.layers - 1) * (1 + r.experiments));

    const std::int64_t d = ledger.entries()[0].diameter;
    std::int64_t expected = 0;
    expected += ledger_charge("thurimella_multi", d, 10, r.approx_instances);
    expected += ledger_charge("connectivity_extra", d);
    expected += ledger_charge("thurimella_multi", d, 10, r.test_instances);
    expected += ledger_charge("bfs", d);
    expected += ledger_charge("convergecast", d);
    expected += ledger_charge("broadcast", d);
    CHECK(ledger.total() == expected);
}

TEST_CASE("pipeline validates its inputs") {
    auto g = cycle_graph(6);
    CHECK_THROWS_AS(layering_mincut(g, 0.0, 1), InvalidParameter);
    CHECK_THROWS_AS(layering_mincut(g, 1.0, 1), InvalidParameter);

    Multigraph split(4, {{0, 1, 1}, {2, 3, 1}});
    CHECK_THROWS_AS(layering_mincut(split, 0.5, 1, central_policy()), InvalidParameter);
    Multigraph single(1, {});
    CHECK_THROWS_AS(layering_mincut(single, 0.5, 1), InvalidParameter);
}
