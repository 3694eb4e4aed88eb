#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "congestcut/errors.hpp"
#include "congestcut/graph.hpp"
#include "congestcut/primitives.hpp"
#include "congestcut/rng.hpp"

namespace congestcut {

/**
 * Per-node verdicts of the randomized boundary tester.  Nodes sharing a
 * component of the tested subgraph always hold identical flags.
 */
struct CutTestVerdict {
    std::vector<char> pass;
    std::vector<int> hits;       // experiments whose sample reached outside
    std::vector<int> component;  // componentID = min node id in (V, sub)
    double kappa = 0.0;
    double delta = 0.0;
    double p_prime = 0.0;        // per-unit sampling probability 1 - 2^(-1/kappa)
    int experiments = 0;
};

/**
 * Tests every component of (V, sub) against threshold kappa: samples each
 * available unit edge with probability 1-2^(-1/kappa) per experiment and
 * counts experiments in which the component's min or max neighbour label
 * changes.  A component passes when at most half the experiments hit its
 * boundary; boundaries of weight <= kappa/(1+delta) pass and boundaries of
 * weight >= kappa(1+delta) fail with high probability.
 */
inline CutTestVerdict cut_tester(const Multigraph& g, const EdgeSubset& sub, double kappa,
                                 double delta, std::uint64_t seed, const ExecPolicy& policy = {},
                                 int c = 8) {
    if (!(kappa > 0.0)) throw InvalidParameter("kappa must be positive");
    if (!(delta > 0.0 && delta < 0.25)) throw InvalidParameter("delta must lie in (0, 1/4)");
    if (c < 1) throw InvalidParameter("experiment constant must be positive");
    if (sub.universe_size() != g.edge_count())
        throw InvalidParameter("subgraph universe does not match graph");

    const int n = g.node_count();
    CutTestVerdict out;
    out.kappa = kappa;
    out.delta = delta;
    out.p_prime = 1.0 - std::exp2(-1.0 / kappa);
    out.experiments =
        n >= 2 ? static_cast<int>(std::ceil(c * std::log2(static_cast<double>(n)) / (delta * delta)))
               : 0;

    out.component = component_id_multi(g, {sub}, policy)[0].label;

    auto rng = make_rng(seed, 0xc7e5);
    std::vector<int> outside;
    for (int id = 0; id < g.edge_count(); ++id)
        if (!sub.test(id)) outside.push_back(id);
    bool uniform = !outside.empty();
    for (int id : outside)
        if (g.edge(id).w != g.edge(outside[0]).w) {
            uniform = false;
            break;
        }

    std::vector<EdgeSubset> augmented;
    augmented.reserve(static_cast<std::size_t>(out.experiments));
    if (uniform) {
        // equal weights allow geometric jumps between sampled edges
        const double hit = 1.0 - std::exp2(-static_cast<double>(g.edge(outside[0]).w) / kappa);
        const double log_miss = std::log1p(-hit);
        for (int j = 0; j < out.experiments; ++j) {
            EdgeSubset aug = sub;
            std::size_t idx = 0;
            while (idx < outside.size()) {
                const double u = uniform01(rng);
                if (u <= 0.0) break;
                const double skip = std::floor(std::log(u) / log_miss);
                if (skip >= static_cast<double>(outside.size() - idx)) break;
                idx += static_cast<std::size_t>(skip);
                aug.set(outside[idx]);
                ++idx;
            }
            augmented.push_back(std::move(aug));
        }
    } else {
        for (int j = 0; j < out.experiments; ++j) {
            EdgeSubset aug = sub;
            for (int id : outside) {
                const double hit = 1.0 - std::exp2(-static_cast<double>(g.edge(id).w) / kappa);
                if (bernoulli(rng, hit)) aug.set(id);
            }
            augmented.push_back(std::move(aug));
        }
    }

    out.hits.assign(static_cast<std::size_t>(n), 0);
    const auto extrema = component_extrema_multi(g, augmented, out.component, policy);
    for (const auto& ext : extrema)
        for (int v = 0; v < n; ++v) {
            const auto i = static_cast<std::size_t>(v);
            if (ext.low[i] != out.component[i] || ext.high[i] != out.component[i]) ++out.hits[i];
        }

    out.pass.assign(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        const auto i = static_cast<std::size_t>(v);
        out.pass[i] = 2 * out.hits[i] <= out.experiments ? 1 : 0;
    }
    return out;
}

}  // namespace congestcut
