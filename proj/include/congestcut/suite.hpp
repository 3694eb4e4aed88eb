#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "congestcut/cut_tester.hpp"
#include "congestcut/families.hpp"
#include "congestcut/layering.hpp"
#include "congestcut/lowerbound.hpp"
#include "congestcut/matula.hpp"
#include "congestcut/mincut_oracle.hpp"
#include "congestcut/sampling.hpp"

namespace congestcut {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace suite_detail {

inline CriterionResult make_result(int id, std::string name) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

inline ExecPolicy central() {
    ExecPolicy p;
    p.backend = Backend::Central;
    return p;
}

inline bool valid_cut(const Multigraph& g, const Cut& cut) {
    if (cut.members.empty()) return false;
    if (static_cast<int>(cut.members.size()) >= g.node_count()) return false;
    return cut_weight(g, cut.members) == cut.weight;
}

inline int dumbbell_bridge_id(const Multigraph& g, int clique) {
    for (int id = 0; id < g.edge_count(); ++id) {
        const auto& e = g.edge(id);
        if (e.u < clique && e.v >= clique) return id;
    }
    throw InvalidParameter("no bridge edge found");
}

inline CriterionResult oracle_cross_validation() {
    CriterionResult r = make_result(1, "exact oracle matches brute force on random multigraphs");
    int agree = 0;
    const int total = 200;
    for (int seed = 1; seed <= total; ++seed) {
        const int n = 2 + seed % 11;
        const int extra = seed % 14;
        const std::int64_t maxw = 1 + seed % 8;
        auto g = random_multigraph(n, extra, maxw, static_cast<std::uint64_t>(seed));
        if (min_cut_exact(g).weight == min_cut_bruteforce(g).weight) ++agree;
    }
    r.pass = agree == total;
    std::ostringstream d;
    d << agree << "/" << total << " graphs agree";
    r.detail = d.str();
    return r;
}

inline CriterionResult sampling_threshold() {
    CriterionResult r = make_result(2, "sampling threshold separates connectivity rates");
    const double lg = std::log2(64.0);
    bool ok = true;
    std::ostringstream d;
    for (const std::int64_t lambda : {8, 16}) {
        auto g = cycle_graph(64, lambda / 2);
        const double p_high = std::min(1.0, 20.0 * lg / static_cast<double>(lambda));
        const double high = connectivity_rate(g, p_high, 2, 100, 11);
        const double low = connectivity_rate(g, 1.0 / static_cast<double>(lambda), 2, 200, 12);
        ok = ok && high >= 0.95 && low <= 0.85;
        d << "lambda=" << lambda << " high=" << high << " low=" << low << "  ";
    }
    r.pass = ok;
    r.detail = d.str();
    return r;
}

inline CriterionResult approx_brackets() {
    CriterionResult r = make_result(3, "connectivity estimate brackets the true value");
    struct Bench {
        const char* tag;
        Multigraph g;
    };
    const std::vector<Bench> benches = {{"dumbbell", dumbbell_graph(5)},
                                        {"star16", star_graph(16)},
                                        {"cycle16", cycle_graph(16)},
                                        {"dumbbell-w2", dumbbell_graph(5, 2)},
                                        {"grid-h", gen_base_H(8, 2)}};
    bool ok = true;
    std::ostringstream d;
    for (const auto& b : benches) {
        const auto lambda = min_cut_exact(b.g).weight;
        const double hi =
            8.0 * static_cast<double>(lambda) * std::log2(static_cast<double>(b.g.node_count()));
        int hits = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto a = approx_edge_connectivity(b.g, seed, central());
            const double lt = static_cast<double>(a.lambda_tilde);
            if (lt >= static_cast<double>(lambda) / 2.0 && lt <= hi) ++hits;
        }
        ok = ok && hits >= 18;
        d << b.tag << "=" << hits << "/20  ";
    }
    r.pass = ok;
    r.detail = d.str();
    return r;
}

inline CriterionResult tester_error_rates() {
    CriterionResult r = make_result(4, "boundary tester error rates stay under 5%");
    auto g = dumbbell_graph(5);
    const int bridge = dumbbell_bridge_id(g, 5);
    EdgeSubset sub = EdgeSubset::all(g.edge_count());
    sub.reset(bridge);
    int false_fail = 0;
    int false_pass = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto light = cut_tester(g, sub, 10.0, 0.125, seed, central());
        if (!(light.pass[0] == 1 && light.pass[5] == 1)) ++false_fail;
        const auto heavy = cut_tester(g, sub, 0.8, 0.125, seed, central());
        if (!(heavy.pass[0] == 0 && heavy.pass[5] == 0)) ++false_pass;
    }
    r.pass = false_fail <= 5 && false_pass <= 5;
    std::ostringstream d;
    d << "false-fail=" << false_fail << "/100 false-pass=" << false_pass << "/100";
    r.detail = d.str();
    return r;
}

inline CriterionResult epoch_family_success() {
    CriterionResult r = make_result(5, "epoch candidate family captures a light cut");
    auto g = cycle_graph(64, 4);
    const double lambda = 8.0;
    const double eps = 0.5;
    const double p = std::min(1.0, eps * std::log2(64.0) / (2.0 * lambda));
    const int layers = static_cast<int>(std::ceil(20.0 * std::log2(64.0)));
    const std::int64_t budget = static_cast<std::int64_t>(80.0 * lambda / eps);
    int hits = 0;
    const int epochs = 400;
    for (int t = 1; t <= epochs; ++t) {
        const auto outcome = layering_experiment(g, p, layers, static_cast<std::uint64_t>(t));
        for (const auto& cut : outcome.family)
            if (cut.weight <= budget) {
                ++hits;
                break;
            }
    }
    const double rate = static_cast<double>(hits) / epochs;
    const double floor_rate = std::pow(64.0, -eps) / 4.0;
    r.pass = rate >= floor_rate;
    std::ostringstream d;
    d << "rate=" << rate << " floor=" << floor_rate;
    r.detail = d.str();
    return r;
}

inline CriterionResult layering_end_to_end() {
    CriterionResult r = make_result(6, "layered pipeline returns bounded cuts");
    struct Bench {
        const char* tag;
        Multigraph g;
    };
    const std::vector<Bench> benches = {
        {"dumbbell", dumbbell_graph(5)},
        {"cycle16", cycle_graph(16)},
        {"weighted-cut", gen_weighted_cut_instance(16, 4, 1, {1, 2}, {2, 3})}};
    const double eps = 0.5;
    bool ok = true;
    std::ostringstream d;
    for (const auto& b : benches) {
        const auto lambda = min_cut_exact(b.g).weight;
        const double budget = 100.0 * 1.125 * 2.0 * static_cast<double>(lambda) / eps;
        int hits = 0;
        std::vector<double> ratios;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            try {
                const auto run = layering_mincut(b.g, eps, seed, central());
                ratios.push_back(static_cast<double>(run.cut.weight) /
                                 static_cast<double>(lambda));
                if (valid_cut(b.g, run.cut) &&
                    static_cast<double>(run.cut.weight) <= budget)
                    ++hits;
            } catch (const NoCutFound&) {
            }
        }
        ok = ok && hits >= 9;
        d << b.tag << "=" << hits << "/10";
        if (std::string(b.tag) == "dumbbell") {
            std::sort(ratios.begin(), ratios.end());
            const double median = ratios.empty() ? 0.0 : ratios[ratios.size() / 2];
            ok = ok && median == 1.0;
            d << " median-ratio=" << median;
        }
        d << "  ";
    }
    r.pass = ok;
    r.detail = d.str();
    return r;
}

inline CriterionResult matula_end_to_end() {
    CriterionResult r = make_result(7, "certificate peeling returns (2+eps)-bounded cuts");
    const double eps = 0.5;
    auto wgt = gen_weighted_cut_instance(16, 4, 3, {2}, {2});
    const auto wgt_oracle = min_cut_exact(wgt);
    struct Bench {
        const char* tag;
        Multigraph g;
        bool match_members;
    };
    const std::vector<Bench> benches = {{"cycle16", cycle_graph(16), false},
                                        {"dumbbell", dumbbell_graph(5), false},
                                        {"weighted-cut", wgt, true}};
    bool ok = true;
    std::ostringstream d;
    for (const auto& b : benches) {
        const auto lambda = min_cut_exact(b.g).weight;
        const double budget = (2.0 + eps) * static_cast<double>(lambda);
        int hits = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            try {
                const auto run = matula_mincut(b.g, eps, seed, central());
                bool good = valid_cut(b.g, run.cut) &&
                            static_cast<double>(run.cut.weight) <= budget;
                if (b.match_members)
                    good = good && run.cut.canonical_members(b.g.node_count()) ==
                                       wgt_oracle.canonical_members(b.g.node_count());
                if (good) ++hits;
            } catch (const NoCutFound&) {
            }
        }
        ok = ok && hits >= 9;
        d << b.tag << "=" << hits << "/10  ";
    }
    r.pass = ok;
    r.detail = d.str();
    return r;
}

inline CriterionResult certificate_properties() {
    CriterionResult r = make_result(8, "sparse certificates are sparse and cover small cuts");
    int good = 0;
    const int total = 100;
    for (int seed = 1; seed <= total; ++seed) {
        const int n = 2 + seed % 9;
        auto g = random_multigraph(n, seed % 12, 1, static_cast<std::uint64_t>(seed));
        const int k = 1 + seed % 3;
        const auto star =
            sparse_certificate(g, EdgeSubset(g.edge_count()), k, central()).edges;

        bool ok = star.count() <= static_cast<std::int64_t>(k) * n;

        for (int mask = 1; ok && mask < (1 << (n - 1)); ++mask) {
            int crossing = 0;
            bool covered = true;
            for (int id = 0; id < g.edge_count(); ++id) {
                const auto& e = g.edge(id);
                const bool us = e.u != 0 && ((mask >> (e.u - 1)) & 1);
                const bool vs = e.v != 0 && ((mask >> (e.v - 1)) & 1);
                if (us != vs) {
                    ++crossing;
                    covered = covered && star.test(id);
                }
            }
            if (crossing <= k && !covered) ok = false;
        }

        std::vector<Edge> kept;
        for (int id : star.ids()) kept.push_back(g.edge(id));
        Multigraph certified(n, std::move(kept));
        const auto lambda = min_cut_exact(g).weight;
        ok = ok && min_cut_exact(certified).weight >=
                       std::min<std::int64_t>(k, lambda);
        if (ok) ++good;
    }
    r.pass = good == total;
    std::ostringstream d;
    d << good << "/" << total << " graphs satisfy all three properties";
    r.detail = d.str();
    return r;
}

inline CriterionResult family_invariants() {
    CriterionResult r = make_result(9, "benchmark family invariants hold exactly");
    bool ok = true;
    std::ostringstream d;

    const std::vector<std::pair<int, int>> bases = {{8, 2}, {12, 3}, {16, 2}, {16, 4}};
    for (auto [n, k] : bases) {
        const auto c_observed = verify_family(gen_base_H(n, k), k);
        const double bound = std::log2(static_cast<double>(n) / k);
        if (static_cast<double>(c_observed) > bound) ok = false;
        d << "H(" << n << "," << k << ")=" << c_observed << "<=" << bound << "  ";
    }

    for (const int alpha : {1, 3}) {
        auto g = gen_weighted_cut_instance(16, 4, alpha, {1, 2}, {2, 3});
        const auto c_observed = verify_family(g, 4);
        if (static_cast<double>(c_observed) > std::log2(4.0)) ok = false;
        const auto lambda = min_cut_exact(g).weight;
        if (lambda != 4) ok = false;
        d << "overlap-a" << alpha << "=" << lambda << "  ";
    }

    {
        auto g = gen_weighted_cut_instance(16, 4, 1, {1}, {2});
        const auto lambda = min_cut_exact(g).weight;
        if (lambda < 1 * 4 + 1) ok = false;
        d << "disjoint-a1=" << lambda << ">=5  ";
        auto h = gen_weighted_cut_instance(12, 3, 2, {1}, {2});
        const auto mu = min_cut_exact(h).weight;
        if (mu < 2 * 4 + 1) ok = false;
        d << "disjoint-a2=" << mu << ">=9";
    }

    r.pass = ok;
    r.detail = d.str();
    return r;
}

inline CriterionResult ledger_recomputation() {
    CriterionResult r = make_result(10, "ledger total matches independent recomputation");
    auto g = cycle_graph(16);
    CostLedger ledger;
    ExecPolicy policy = central();
    policy.ledger = &ledger;
    const auto run = layering_mincut(g, 0.5, 2, policy);

    bool ok = ledger.entries().size() == 6;
    const std::int64_t d = ok ? ledger.entries()[0].diameter : 0;
    std::int64_t expected = 0;
    if (ok) {
        const std::int64_t tests = static_cast<std::int64_t>(run.guesses_executed) *
                                   run.epochs_per_guess * (run.layers - 1) *
                                   (1 + run.experiments);
        ok = tests == run.test_instances;
        expected += ledger_charge("thurimella_multi", d, 16, run.approx_instances);
        expected += ledger_charge("connectivity_extra", d);
        expected += ledger_charge("thurimella_multi", d, 16, tests);
        expected += ledger_charge("bfs", d);
        expected += ledger_charge("convergecast", d);
        expected += ledger_charge("broadcast", d);
        ok = ok && ledger.total() == expected;
    }
    r.pass = ok;
    std::ostringstream detail;
    detail << "total=" << ledger.total() << " recomputed=" << expected;
    r.detail = detail.str();
    return r;
}

inline CriterionResult budget_enforcement() {
    CriterionResult r = make_result(11, "budget violations raise and defaults stay clean");
    bool raised = false;
    try {
        ExecPolicy tight;
        tight.budget = BitBudget::per_edge(1);
        sparse_certificate(dumbbell_graph(3), EdgeSubset(7), 1, tight);
    } catch (const BudgetViolation&) {
        raised = true;
    }

    bool clean = true;
    std::int64_t worst_margin = 0;
    try {
        const auto runs = [&](const Multigraph& g, auto&& body) {
            ExecPolicy sim;
            ExecStats stats;
            sim.stats = &stats;
            sim.budget = BitBudget::per_edge(
                8 * static_cast<std::int64_t>(std::ceil(std::log2(g.node_count()))));
            body(sim);
            worst_margin = std::max(worst_margin, stats.max_bits_per_edge_round);
        };
        runs(dumbbell_graph(5), [&](ExecPolicy& p) {
            auto g = dumbbell_graph(5);
            EdgeSubset sub = EdgeSubset::all(g.edge_count());
            sub.reset(dumbbell_bridge_id(g, 5));
            cut_tester(g, sub, 10.0, 0.125, 3, p, 1);
        });
        runs(dumbbell_graph(3), [&](ExecPolicy& p) {
            matula_core(dumbbell_graph(3), 1.0, 0.5, 9, p, 1);
        });
        runs(dumbbell_graph(3), [&](ExecPolicy& p) {
            collect_family_and_test(dumbbell_graph(3), 1.0, 0.5, 3, p, 1);
        });
        runs(cycle_graph(4), [&](ExecPolicy& p) {
            matula_mincut(cycle_graph(4), 0.5, 5, p, 1);
        });
    } catch (const BudgetViolation&) {
        clean = false;
    }

    r.pass = raised && clean;
    std::ostringstream d;
    d << "raised=" << (raised ? "yes" : "no") << " clean=" << (clean ? "yes" : "no")
      << " max-bits=" << worst_margin;
    r.detail = d.str();
    return r;
}

inline CriterionResult sampled_diameter() {
    CriterionResult r = make_result(12, "sampled subgraphs go wide or disconnect");
    auto graphs = gen_dissemination_graphs(256, 4);
    const double p = 1.0 / (4.0 * std::log2(256.0));
    const auto result = sampled_diameter_experiment(graphs.weighted, p, 50, 3);
    const double frac = result.fraction_at_least(256 / (32 * 4));
    r.pass = frac >= 0.2;
    std::ostringstream d;
    d << "fraction=" << frac << " disconnected=" << result.disconnected << "/50";
    r.detail = d.str();
    return r;
}

}  // namespace suite_detail

/**
 * Runs the full acceptance battery in order. The callback, when given, fires
 * after each criterion so front ends can stream one line per result.
 */
inline std::vector<CriterionResult> run_acceptance_suite(
    const std::function<void(const CriterionResult&)>& on_result = {}) {
    using Runner = CriterionResult (*)();
    const Runner runners[] = {
        suite_detail::oracle_cross_validation, suite_detail::sampling_threshold,
        suite_detail::approx_brackets,         suite_detail::tester_error_rates,
        suite_detail::epoch_family_success,    suite_detail::layering_end_to_end,
        suite_detail::matula_end_to_end,       suite_detail::certificate_properties,
        suite_detail::family_invariants,       suite_detail::ledger_recomputation,
        suite_detail::budget_enforcement,      suite_detail::sampled_diameter};

    std::vector<CriterionResult> results;
    for (const auto runner : runners) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r = runner();
        r.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (on_result) on_result(r);
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace congestcut
