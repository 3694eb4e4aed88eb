#pragma once

#include <cstdint>
#include <vector>

#include "congestcut/errors.hpp"
#include "congestcut/graph.hpp"
#include "congestcut/rng.hpp"

namespace congestcut {

/** Cycle 0-1-...-(n-1)-0; every edge has the given multiplicity. */
inline Multigraph cycle_graph(int n, std::int64_t multiplicity = 1) {
    if (n < 3) throw InvalidParameter("cycle needs at least three nodes");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, multiplicity});
    return Multigraph(n, std::move(edges));
}

inline Multigraph path_graph(int n, std::int64_t weight = 1) {
    if (n < 2) throw InvalidParameter("path needs at least two nodes");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    return Multigraph(n, std::move(edges));
}

/** Star with center 0 and n-1 unit leaves. */
inline Multigraph star_graph(int n) {
    if (n < 2) throw InvalidParameter("star needs at least two nodes");
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({0, i, 1});
    return Multigraph(n, std::move(edges));
}

inline Multigraph complete_graph(int n, std::int64_t weight = 1) {
    if (n < 2) throw InvalidParameter("complete graph needs at least two nodes");
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v, weight});
    return Multigraph(n, std::move(edges));
}

/** Two nodes joined by a single edge of the given weight. */
inline Multigraph weighted_pair(std::int64_t weight) {
    return Multigraph(2, {{0, 1, weight}});
}

/**
 * Two cliques K_c on nodes 0..c-1 and c..2c-1 joined by one bridge edge
 * (0, c) of weight bridge_weight.  The bridge is the unique minimum cut.
 */
inline Multigraph dumbbell_graph(int clique_size = 5, std::int64_t bridge_weight = 1) {
    if (clique_size < 2) throw InvalidParameter("dumbbell cliques need at least two nodes");
    const int n = 2 * clique_size;
    std::vector<Edge> edges;
    for (int u = 0; u < clique_size; ++u)
        for (int v = u + 1; v < clique_size; ++v) edges.push_back({u, v, 1});
    for (int u = clique_size; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1});
    edges.push_back({0, clique_size, bridge_weight});
    return Multigraph(n, std::move(edges));
}

/** Deterministic pseudo-random connected multigraph for property tests. */
inline Multigraph random_multigraph(int n, int extra_edges, std::int64_t max_weight,
                                    std::uint64_t seed) {
    if (n < 2) throw InvalidParameter("random multigraph needs at least two nodes");
    auto rng = make_rng(seed, 0xbeef);
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) {
        int u = static_cast<int>(uniform_int(rng, 0, v - 1));
        edges.push_back({u, v, uniform_int(rng, 1, max_weight)});
    }
    for (int i = 0; i < extra_edges; ++i) {
        int u = static_cast<int>(uniform_int(rng, 0, n - 1));
        int v = static_cast<int>(uniform_int(rng, 0, n - 1));
        if (u == v) continue;
        edges.push_back({u, v, uniform_int(rng, 1, max_weight)});
    }
    return Multigraph(n, std::move(edges));
}

}  // namespace congestcut
