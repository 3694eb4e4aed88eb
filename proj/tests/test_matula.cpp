#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "congestcut/families.hpp"
#include "congestcut/lowerbound.hpp"
#include "congestcut/matula.hpp"
#include "congestcut/mincut_oracle.hpp"

using namespace congestcut;

namespace {

ExecPolicy central_policy() {
    ExecPolicy p;
    p.backend = Backend::Central;
    return p;
}

}  // namespace

TEST_CASE("unit expansion splits weights into parallel unit edges") {
    Multigraph pair(2, {{0, 1, 3}});
    auto ex = unit_expand(pair);
    CHECK(ex.node_count() == 2);
    CHECK(ex.edge_count() == 3);
    for (const auto& e : ex.edges()) CHECK(e.w == 1);
    CHECK(cut_weight(ex, {0}) == cut_weight(pair, {0}));

    auto cyc = cycle_graph(8);
    auto same = unit_expand(cyc);
    CHECK(same.edge_count() == cyc.edge_count());
}

TEST_CASE("presample probability caps at one and scales inversely with the guess") {
    CHECK(karger_probability(16, 8192.0, 1.0) == Catch::Approx(400.0 / 8192.0));
    CHECK(karger_probability(16, 128.0, 1.0) == 1.0);
    CHECK(karger_probability(16, 800.0, 0.5) == 1.0);
    CHECK_THROWS_AS(karger_probability(16, 0.5, 1.0), InvalidParameter);
    CHECK_THROWS_AS(karger_probability(16, 2.0, 0.0), InvalidParameter);
}

TEST_CASE("presampling keeps every unit edge when the probability is one") {
    auto g = cycle_graph(8);
    auto kept = karger_presample(g, 1.0, 1.0, 5);
    CHECK(kept.edge_count() == 8);
    CHECK(min_cut_exact(kept).weight == 2);
}

TEST_CASE("presampling concentrates the surviving edge count around its mean") {
    auto g = cycle_graph(16, 4096);
    const double p = karger_probability(16, 8192.0, 1.0);
    const double mean = p * 16.0 * 4096.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto kept = karger_presample(g, 8192.0, 1.0, seed);
        for (const auto& e : kept.edges()) CHECK(e.w == 1);
        const double ratio = static_cast<double>(kept.edge_count()) / mean;
        CHECK(ratio >= 2.0 / 3.0);
        CHECK(ratio <= 4.0 / 3.0);
    }
}

TEST_CASE("certificate peeling isolates the cycle cut in one pass") {
    auto g = cycle_graph(8);
    auto r = matula_core(g, 2.0, 1.0, 21, central_policy());
    REQUIRE(r.cut.has_value());
    CHECK(r.cut->weight == 2);
    CHECK(r.iterations == 1);
    REQUIRE(r.certificate_sizes.size() == 1);
    CHECK(r.certificate_sizes[0] == 8);
    CHECK(r.eta_final == 8);
    CHECK(r.kappa == Catch::Approx(2.0 * (2.0 + 1.0 / 3.0)));
}

TEST_CASE("certificate peeling strips cliques down to the bridge") {
    auto g = dumbbell_graph(5);
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto r = matula_core(g, 1.0, 1.0, seed, central_policy());
        REQUIRE(r.cut.has_value());
        CHECK(r.iterations == 3);
        CHECK(r.eta_final == 2);
        if (r.cut->weight == 1) ++hits;
    }
    CHECK(hits >= 18);
}

TEST_CASE("an oversized guess keeps every edge and still reports singleton cuts") {
    auto g = cycle_graph(8);
    auto r = matula_core(g, 1000.0, 1.0, 4, central_policy());
    REQUIRE(r.cut.has_value());
    CHECK(r.cut->weight == 2);
    CHECK(r.cut->members == std::vector<int>{0});
    CHECK(r.iterations == 1);
    CHECK(r.certificate_sizes[0] == 8);
}

TEST_CASE("core rejects bad guesses and trivial graphs") {
    auto g = cycle_graph(4);
    CHECK_THROWS_AS(matula_core(g, 0.5, 1.0, 1), InvalidParameter);
    CHECK_THROWS_AS(matula_core(g, 2.0, 0.0, 1), InvalidParameter);
    auto tiny = matula_core(Multigraph(1, {}), 2.0, 1.0, 1, central_policy());
    CHECK_FALSE(tiny.cut.has_value());
}

TEST_CASE("each peeling round shrinks components or leaves a light one") {
    const double eps = 0.5;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto g = random_multigraph(8, 8, 1, seed);
        if (components(g).count != 1) continue;
        const double lambda_hat =
            static_cast<double>(std::max<std::int64_t>(1, min_cut_exact(g).weight));
        const int k_cert = static_cast<int>(std::ceil(lambda_hat * (1.0 + eps / 5.0)));

        EdgeSubset star = EdgeSubset::all(g.edge_count());
        int eta_old = g.node_count();
        for (int round = 0; round < 16; ++round) {
            star = sparse_certificate(g, star.complement(), k_cert, central_policy()).edges;
            const int eta_new = components(g, star.complement()).count;
            if (eta_new < 2) break;
            if (eta_new > eta_old * (1.0 - eps / 10.0)) {
                std::int64_t lightest = -1;
                for (const auto& members : components(g, star.complement()).groups()) {
                    if (static_cast<int>(members.size()) == g.node_count()) continue;
                    const auto w = cut_weight(g, members);
                    if (lightest < 0 || w < lightest) lightest = w;
                }
                REQUIRE(lightest >= 0);
                const double bound = 2.0 * k_cert * eta_old / eta_new;
                CHECK(static_cast<double>(lightest) <= bound);
                break;
            }
            eta_old = eta_new;
        }
    }
}

TEST_CASE("contracting non-certificate edges preserves the minimum cut") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto g = random_multigraph(10, 10, 1, seed);
        if (components(g).count != 1) continue;
        const auto lambda = min_cut_exact(g).weight;
        const int k_cert = static_cast<int>(
            std::ceil(static_cast<double>(lambda) * 1.2));
        auto star = sparse_certificate(g, EdgeSubset::all(g.edge_count()).complement(), k_cert,
                                       central_policy()).edges;
        auto quotient = contract(g, star.complement());
        if (quotient.graph.node_count() < 2) continue;
        CHECK(min_cut_exact(quotient.graph).weight == lambda);
    }
}

TEST_CASE("the guess wrapper recovers small cuts exactly") {
    auto cyc = cycle_graph(16);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto r = matula_mincut(cyc, 0.5, seed, central_policy());
        CHECK(r.cut.weight == 2);
        CHECK(r.guesses_executed == static_cast<int>(r.guesses.size()));
        CHECK(std::is_sorted(r.guesses.rbegin(), r.guesses.rend()));
        CHECK(r.guesses.back() >= 1.0);
        CHECK(r.iterations >= 1);
        CHECK(r.certificate_sizes.size() == static_cast<std::size_t>(r.iterations));
    }

    auto dmb = dumbbell_graph(5);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        CHECK(matula_mincut(dmb, 0.5, seed, central_policy()).cut.weight == 1);
    }
}

TEST_CASE("the guess schedule covers estimates that undershoot the weighted cut") {
    auto g = gen_weighted_cut_instance(16, 4, 3, {2}, {2});
    const auto oracle = min_cut_exact(g);
    REQUIRE(oracle.weight == 4);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto r = matula_mincut(g, 0.5, seed, central_policy());
        CHECK(r.cut.weight == 4);
        CHECK(r.cut.canonical_members(g.node_count()) ==
              oracle.canonical_members(g.node_count()));
        CHECK(r.guesses.front() > static_cast<double>(r.lambda_tilde));
        CHECK(r.guesses.back() < r.guesses.front());
    }
}

TEST_CASE("wrapper validation rejects bad epsilon and broken graphs") {
    auto g = cycle_graph(4);
    CHECK_THROWS_AS(matula_mincut(g, 0.0, 1), InvalidParameter);
    CHECK_THROWS_AS(matula_mincut(g, 1.5, 1), InvalidParameter);
    CHECK_THROWS_AS(matula_mincut(Multigraph(1, {}), 0.5, 1), InvalidParameter);
    Multigraph split(4, {{0, 1, 1}, {2, 3, 1}});
    CHECK_THROWS_AS(matula_mincut(split, 0.5, 1), InvalidParameter);
}

TEST_CASE("core runs identically on both backends") {
    auto g = dumbbell_graph(3);
    auto central = matula_core(g, 1.0, 0.5, 9, central_policy(), 1);

    ExecPolicy sim;
    sim.backend = Backend::Simulate;
    auto lived = matula_core(g, 1.0, 0.5, 9, sim, 1);

    REQUIRE(central.cut.has_value());
    REQUIRE(lived.cut.has_value());
    CHECK(lived.cut->members == central.cut->members);
    CHECK(lived.cut->weight == central.cut->weight);
    CHECK(lived.iterations == central.iterations);
    CHECK(lived.certificate_sizes == central.certificate_sizes);
    CHECK(lived.eta_final == central.eta_final);
}

TEST_CASE("the wrapper survives a full message-passing run") {
    ExecPolicy sim;
    sim.backend = Backend::Simulate;
    ExecStats stats;
    sim.stats = &stats;
    auto r = matula_mincut(cycle_graph(4), 0.5, 5, sim, 1);
    CHECK(r.cut.weight == 2);
    CHECK(stats.measured_rounds > 0);
}

TEST_CASE("peeling charges the ledger per round plus the boundary test") {
    auto g = dumbbell_graph(5);
    CostLedger ledger;
    ExecPolicy policy = central_policy();
    policy.ledger = &ledger;
    policy.ledger_diameter = 3;
    auto r = matula_core(g, 1.0, 1.0, 7, policy);
    REQUIRE(r.iterations == 3);
    REQUIRE(ledger.entries().size() == static_cast<std::size_t>(2 * r.iterations + 2));
    for (const auto& e : ledger.entries()) CHECK(e.primitive == "thurimella_multi");
    const int k_cert = 2;
    const int experiments = static_cast<int>(
        std::ceil(8.0 * std::log2(10.0) / (0.05 * 0.05)));
    CHECK(ledger.pipelined_instances() ==
          r.iterations * (k_cert + 1) + 1 + experiments);
}
