#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "congestcut/errors.hpp"
#include "congestcut/graph.hpp"
#include "congestcut/primitives.hpp"
#include "congestcut/rng.hpp"

namespace congestcut {

/**
 * Result of one random layering experiment: every sampled unit edge lands in a
 * uniform layer, prefix graphs G_i accumulate layers 1..i, and the candidate
 * family collects one cut per component of each proper prefix.
 */
struct LayeringOutcome {
    double p = 0.0;
    int layers = 0;
    std::vector<EdgeSubset> layer_edges;    // S_1..S_L as edge-id presence
    std::vector<int> prefix_components;     // M_1..M_L
    std::vector<Cut> family;                // F, deduplicated by member set
    bool final_connected = false;

    /** Union S_1 ∪ .. ∪ S_i for 1-based i. */
    EdgeSubset prefix(int i) const {
        if (i < 1 || i > layers) throw InvalidParameter("prefix index out of range");
        EdgeSubset acc = layer_edges.empty() ? EdgeSubset(0) : layer_edges[0];
        for (int j = 1; j < i; ++j) acc = acc.united(layer_edges[j]);
        return acc;
    }
};

/**
 * Samples every unit of every edge independently with probability p, assigns
 * sampled units uniform layers from {1..L}, and reports the prefix component
 * structure plus the candidate cut family. Deterministic per seed.
 */
inline LayeringOutcome layering_experiment(const Multigraph& g, double p, int layers,
                                           std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidProbability(p);
    if (layers < 2) throw InvalidParameter("layering needs at least 2 layers");

    LayeringOutcome out;
    out.p = p;
    out.layers = layers;
    out.layer_edges.assign(layers, EdgeSubset(g.edge_count()));

    auto rng = make_rng(seed, 0x14e3);
    for (int id = 0; id < g.edge_count(); ++id) {
        const std::int64_t units = g.edge(id).w;
        for (std::int64_t u = 0; u < units; ++u)
            if (bernoulli(rng, p)) out.layer_edges[uniform_int(rng, 1, layers) - 1].set(id);
    }

    std::set<std::vector<int>> seen;
    EdgeSubset acc(g.edge_count());
    for (int i = 0; i < layers; ++i) {
        acc = acc.united(out.layer_edges[i]);
        auto comp = components(g, acc);
        out.prefix_components.push_back(comp.count);
        if (i + 1 <= layers - 1 && comp.count >= 2 && g.node_count() >= 2) {
            for (auto& members : comp.groups()) {
                if (!seen.insert(members).second) continue;
                Cut cut;
                cut.weight = cut_weight(g, members);
                cut.members = std::move(members);
                out.family.push_back(std::move(cut));
            }
        }
    }
    out.final_connected = out.prefix_components.back() == 1;
    return out;
}

/** Fraction of independent layering experiments whose full sample is connected. */
inline double connectivity_rate(const Multigraph& g, double p, int layers, int trials,
                                std::uint64_t seed) {
    if (trials < 1) throw InvalidParameter("connectivity_rate needs at least one trial");
    auto master = make_rng(seed, 0x7a1e);
    int connected = 0;
    for (int t = 0; t < trials; ++t)
        if (layering_experiment(g, p, layers, master()).final_connected) ++connected;
    return static_cast<double>(connected) / trials;
}

struct ApproxConnectivity {
    std::int64_t lambda_tilde = 1;
    int i_star = 0;                     // 0 when no level passed
    bool fallback = false;
    int grid = 0;                       // sampling levels 1..grid
    int trials_per_level = 0;
    std::vector<int> connected_counts;  // X_1..X_grid
};

namespace detail {

/** ceil(log2(x)) for x >= 1. */
inline int ceil_log2(std::int64_t x) {
    int b = 0;
    while ((std::int64_t{1} << b) < x) ++b;
    return b;
}

}  // namespace detail

/**
 * Edge-connectivity approximation by sampling at probabilities 2^-i. Every
 * sampled subgraph keeps an edge id when at least one of its weight-many units
 * survives; all subgraphs are tested for connectivity in one pipelined pass
 * and the output is 2^i for the sparsest level whose connected-trial count
 * reaches 9/10. The level grid extends past ceil(log2 n) up to the smallest
 * degree weight so that heavily weighted graphs stay in range. If no level
 * passes, returns 1 with the fallback flag set.
 */
inline ApproxConnectivity approx_edge_connectivity(const Multigraph& g, std::uint64_t seed,
                                                   const ExecPolicy& policy = {}, int c = 4) {
    const int n = g.node_count();
    if (n < 2) throw InvalidParameter("edge connectivity needs at least 2 nodes");
    if (components(g).count != 1) throw InvalidParameter("graph must be connected");
    if (c < 1) throw InvalidParameter("trial constant must be positive");

    std::int64_t min_degree = g.degree_weight(0);
    for (int v = 1; v < n; ++v) min_degree = std::min(min_degree, g.degree_weight(v));

    ApproxConnectivity out;
    const int lg = detail::ceil_log2(n);
    out.grid = std::max({1, lg, detail::ceil_log2(std::max<std::int64_t>(1, min_degree)) + 2});
    out.trials_per_level = c * std::max(1, lg);

    auto rng = make_rng(seed, 0xa99c);
    std::vector<EdgeSubset> instances;
    instances.reserve(static_cast<std::size_t>(out.grid) * out.trials_per_level);
    for (int i = 1; i <= out.grid; ++i) {
        const double p = std::ldexp(1.0, -i);
        for (int t = 0; t < out.trials_per_level; ++t) {
            EdgeSubset sub(g.edge_count());
            for (int id = 0; id < g.edge_count(); ++id) {
                const double keep = 1.0 - std::pow(1.0 - p, static_cast<double>(g.edge(id).w));
                if (bernoulli(rng, keep)) sub.set(id);
            }
            instances.push_back(std::move(sub));
        }
    }

    const auto verdicts = connectivity_test_multi(g, instances, policy);
    out.connected_counts.assign(out.grid, 0);
    for (int i = 0; i < out.grid; ++i)
        for (int t = 0; t < out.trials_per_level; ++t)
            if (verdicts[static_cast<std::size_t>(i) * out.trials_per_level + t])
                ++out.connected_counts[i];

    for (int i = out.grid; i >= 1; --i) {
        if (10 * out.connected_counts[i - 1] >= 9 * out.trials_per_level) {
            out.i_star = i;
            out.lambda_tilde = std::int64_t{1} << i;
            return out;
        }
    }
    out.fallback = true;
    return out;
}

}  // namespace congestcut
