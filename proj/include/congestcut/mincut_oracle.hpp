#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "congestcut/errors.hpp"
#include "congestcut/graph.hpp"

namespace congestcut {

/**
 * Deterministic global minimum cut via repeated maximum-adjacency search
 * (Stoer-Wagner).  Parallel edges are folded into one weighted adjacency
 * entry, which leaves all cut weights unchanged.  On a disconnected graph a
 * zero-weight cut separating components is returned.
 */
inline Cut min_cut_exact(const Multigraph& g) {
    const int n = g.node_count();
    if (n < 2) throw InvalidParameter("minimum cut needs at least two nodes");

    std::vector<std::vector<std::int64_t>> w(static_cast<std::size_t>(n),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    for (const Edge& e : g.edges()) {
        w[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] += e.w;
        w[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] += e.w;
    }
    std::vector<std::vector<int>> members(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) members[static_cast<std::size_t>(v)] = {v};
    std::vector<int> active(static_cast<std::size_t>(n));
    std::iota(active.begin(), active.end(), 0);

    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    std::vector<int> best_members;

    while (active.size() > 1) {
        const std::size_t k = active.size();
        std::vector<std::int64_t> conn(k, 0);
        std::vector<char> added(k, 0);
        std::size_t prev = 0, last = 0;
        for (std::size_t step = 0; step < k; ++step) {
            std::size_t pick = k;
            for (std::size_t j = 0; j < k; ++j) {
                if (added[j]) continue;
                if (pick == k || conn[j] > conn[pick]) pick = j;
            }
            added[pick] = 1;
            prev = last;
            last = pick;
            for (std::size_t j = 0; j < k; ++j) {
                if (!added[j])
                    conn[j] += w[static_cast<std::size_t>(active[pick])][static_cast<std::size_t>(active[j])];
            }
        }
        if (conn[last] < best) {
            best = conn[last];
            best_members = members[static_cast<std::size_t>(active[last])];
        }
        const int s = active[prev];
        const int t = active[last];
        auto& ms = members[static_cast<std::size_t>(s)];
        auto& mt = members[static_cast<std::size_t>(t)];
        ms.insert(ms.end(), mt.begin(), mt.end());
        for (int u : active) {
            if (u == s || u == t) continue;
            w[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)] +=
                w[static_cast<std::size_t>(t)][static_cast<std::size_t>(u)];
            w[static_cast<std::size_t>(u)][static_cast<std::size_t>(s)] =
                w[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)];
        }
        active.erase(std::find(active.begin(), active.end(), t));
    }

    std::sort(best_members.begin(), best_members.end());
    return {std::move(best_members), best};
}

/** Exhaustive minimum cut over all 2^(n-1)-1 proper sides; n is capped at 20. */
inline Cut min_cut_bruteforce(const Multigraph& g) {
    const int n = g.node_count();
    if (n < 2) throw InvalidParameter("minimum cut needs at least two nodes");
    if (n > 20) throw SizeLimit("brute-force minimum cut is capped at 20 nodes");

    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    std::uint32_t best_mask = 0;
    const std::uint32_t limit = 1u << (n - 1);
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        std::int64_t weight = 0;
        for (const Edge& e : g.edges()) {
            const bool iu = e.u > 0 && ((mask >> (e.u - 1)) & 1u);
            const bool iv = e.v > 0 && ((mask >> (e.v - 1)) & 1u);
            if (iu != iv) weight += e.w;
        }
        if (weight < best) {
            best = weight;
            best_mask = mask;
        }
    }
    std::vector<int> members;
    for (int v = 1; v < n; ++v)
        if ((best_mask >> (v - 1)) & 1u) members.push_back(v);
    return {std::move(members), best};
}

/** Edge connectivity of g (weight of a global minimum cut). */
inline std::int64_t edge_connectivity(const Multigraph& g) { return min_cut_exact(g).weight; }

}  // namespace congestcut
