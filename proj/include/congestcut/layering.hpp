#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "congestcut/cut_tester.hpp"
#include "congestcut/errors.hpp"
#include "congestcut/graph.hpp"
#include "congestcut/sampling.hpp"

namespace congestcut {

/** Selection key; lexicographic order picks the reported cut. */
struct CandidateTuple {
    int guess = 0;
    int epoch = 0;
    int layer = 0;
    int component_id = 0;
    auto operator<=>(const CandidateTuple&) const = default;
};

struct LayeringParams {
    double p = 0.0;
    int layers = 0;
    double kappa = 0.0;
    double delta = 0.125;
    int experiments = 0;
};

inline LayeringParams layering_params(int n, double lambda_prime, double eps, int c = 8) {
    if (!(lambda_prime >= 1.0)) throw InvalidParameter("guess must be at least 1");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
    if (n < 2) throw InvalidParameter("layering needs at least 2 nodes");
    const double lg = std::log2(static_cast<double>(n));
    LayeringParams out;
    out.p = std::min(1.0, eps * lg / (2.0 * lambda_prime));
    out.layers = static_cast<int>(std::ceil(20.0 * lg));
    out.kappa = 50.0 * lambda_prime / eps;
    out.experiments = static_cast<int>(std::ceil(c * lg / (out.delta * out.delta)));
    return out;
}

struct EpochCandidate {
    Cut cut;
    int layer = 0;
    int component_id = 0;
};

/**
 * One epoch: a random layering experiment followed by boundary tests on the
 * components of every proper prefix graph.  Candidates are deduplicated by
 * member set (keeping the earliest layer) and the lightest passing candidate
 * is returned, ties broken by (layer, componentID).  The simulate backend
 * runs the full tester per layer; the central backend draws each candidate's
 * hit count from the exact per-experiment hit probability.
 */
inline std::optional<EpochCandidate> collect_family_and_test(const Multigraph& g,
                                                             double lambda_prime, double eps,
                                                             std::uint64_t seed,
                                                             const ExecPolicy& policy = {},
                                                             int c = 8) {
    const int n = g.node_count();
    const auto params = layering_params(n, lambda_prime, eps, c);
    const auto outcome = layering_experiment(g, params.p, params.layers, seed);

    ExecPolicy inner = policy;
    inner.ledger = nullptr;

    std::map<std::vector<int>, EpochCandidate> candidates;
    if (policy.backend == Backend::Simulate) {
        for (int layer = 1; layer <= params.layers - 1; ++layer) {
            if (outcome.prefix_components[static_cast<std::size_t>(layer - 1)] < 2) continue;
            const auto prefix = outcome.prefix(layer);
            const auto verdict = cut_tester(g, prefix, params.kappa, params.delta,
                                            make_rng(seed, 0x7e57, layer)(), inner, c);
            for (auto& members : components(g, prefix).groups()) {
                if (static_cast<int>(members.size()) == n) continue;
                if (verdict.pass[static_cast<std::size_t>(members[0])] == 0) continue;
                if (candidates.count(members) != 0) continue;
                EpochCandidate cand;
                cand.layer = layer;
                cand.component_id = members[0];
                cand.cut.weight = cut_weight(g, members);
                cand.cut.members = members;
                candidates.emplace(std::move(members), std::move(cand));
            }
        }
    } else {
        std::map<std::vector<int>, int> first_layer;
        for (int layer = 1; layer <= params.layers - 1; ++layer) {
            if (outcome.prefix_components[static_cast<std::size_t>(layer - 1)] < 2) continue;
            for (auto& members : components(g, outcome.prefix(layer)).groups()) {
                if (static_cast<int>(members.size()) == n) continue;
                first_layer.emplace(std::move(members), layer);
            }
        }
        auto rng = make_rng(seed, 0xb10a);
        for (const auto& [members, layer] : first_layer) {
            const std::int64_t w = cut_weight(g, members);
            const double hit = 1.0 - std::exp2(-static_cast<double>(w) / params.kappa);
            const std::int64_t hits = binomial(rng, params.experiments, hit);
            if (2 * hits > params.experiments) continue;
            EpochCandidate cand;
            cand.layer = layer;
            cand.component_id = members[0];
            cand.cut.weight = w;
            cand.cut.members = members;
            candidates.emplace(members, std::move(cand));
        }
    }

    if (policy.ledger != nullptr)
        policy.ledger->charge("thurimella_multi", detail::ledger_diameter_of(g, policy), n,
                              static_cast<std::int64_t>(params.layers - 1) *
                                  (1 + params.experiments));

    std::optional<EpochCandidate> best;
    for (auto& [members, cand] : candidates) {
        if (!best) {
            best = cand;
            continue;
        }
        const auto key = std::make_tuple(cand.cut.weight, cand.layer, cand.component_id);
        const auto best_key =
            std::make_tuple(best->cut.weight, best->layer, best->component_id);
        if (key < best_key) best = cand;
    }
    return best;
}

struct LayeringResult {
    Cut cut;
    CandidateTuple tuple;
    double guess_value = 0.0;
    double epsilon = 0.0;
    std::int64_t lambda_tilde = 1;
    std::vector<double> guesses;   // deduplicated ascending guess values
    int guesses_executed = 0;
    int epochs_per_guess = 0;
    int layers = 0;
    int experiments = 0;           // tester experiments per layer
    std::int64_t approx_instances = 0;
    std::int64_t test_instances = 0;
};

/**
 * Full pipeline: edge-connectivity estimate, exponential guesses
 * lambda_tilde * 2^i for i in [-R, R] (clamped to >= 1, deduplicated,
 * ascending), n^eps * log2 n epochs per guess, stopping at the first guess
 * with a passing candidate and reporting its lightest passing cut.  All
 * component-identification instances are pipelined: the ledger receives one
 * consolidated charge plus the reporting BFS/convergecast/broadcast.
 */
inline LayeringResult layering_mincut(const Multigraph& g, double eps, std::uint64_t seed,
                                      const ExecPolicy& policy = {}, int c = 8, int c1 = 2) {
    const int n = g.node_count();
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
    if (n < 2) throw InvalidParameter("layering needs at least 2 nodes");
    if (components(g).count != 1) throw InvalidParameter("graph must be connected");

    ExecPolicy inner = policy;
    inner.ledger = nullptr;

    LayeringResult out;
    out.epsilon = eps;

    const auto approx = approx_edge_connectivity(g, make_rng(seed, 0x3a9d)(), inner);
    out.lambda_tilde = approx.lambda_tilde;
    out.approx_instances =
        static_cast<std::int64_t>(approx.grid) * approx.trials_per_level;

    const double lg = std::log2(static_cast<double>(n));
    const int radius = static_cast<int>(
        std::ceil(c1 * std::log2(std::max(2.0, lg))));
    for (int i = -radius; i <= radius; ++i) {
        const double guess =
            std::max(1.0, static_cast<double>(out.lambda_tilde) * std::exp2(i));
        if (out.guesses.empty() || guess > out.guesses.back()) out.guesses.push_back(guess);
    }
    out.epochs_per_guess =
        static_cast<int>(std::ceil(std::pow(static_cast<double>(n), eps) * lg));

    auto master = make_rng(seed, 0xe90c);
    std::optional<EpochCandidate> best;
    CandidateTuple best_tuple;
    double best_guess = 0.0;
    for (std::size_t gi = 0; gi < out.guesses.size(); ++gi) {
        const auto params = layering_params(n, out.guesses[gi], eps, c);
        out.layers = params.layers;
        out.experiments = params.experiments;
        for (int epoch = 0; epoch < out.epochs_per_guess; ++epoch) {
            auto cand = collect_family_and_test(g, out.guesses[gi], eps, master(), inner, c);
            out.test_instances +=
                static_cast<std::int64_t>(params.layers - 1) * (1 + params.experiments);
            if (!cand) continue;
            CandidateTuple tuple{static_cast<int>(gi), epoch, cand->layer, cand->component_id};
            if (!best || std::make_tuple(cand->cut.weight, tuple) <
                             std::make_tuple(best->cut.weight, best_tuple)) {
                best = cand;
                best_tuple = tuple;
                best_guess = out.guesses[gi];
            }
        }
        ++out.guesses_executed;
        if (best) break;  // smallest guess with a passer wins
    }

    if (policy.ledger != nullptr) {
        const std::int64_t d = detail::ledger_diameter_of(g, policy);
        policy.ledger->charge("thurimella_multi", d, n, out.approx_instances);
        policy.ledger->charge("connectivity_extra", d);
        policy.ledger->charge("thurimella_multi", d, n, out.test_instances);
        policy.ledger->charge("bfs", d);
        policy.ledger->charge("convergecast", d);
        policy.ledger->charge("broadcast", d);
    }

    if (!best) throw NoCutFound("no candidate passed at any guess");
    out.cut = best->cut;
    out.tuple = best_tuple;
    out.guess_value = best_guess;
    return out;
}

}  // namespace congestcut
