#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "congestcut/errors.hpp"
#include "congestcut/graph.hpp"
#include "congestcut/rng.hpp"

namespace congestcut {

/**
 * Hard graph family H(n, k) and its derived benchmark instances.
 *
 * Nodes 0..n-1 are arranged as k parallel paths: node i lies on path
 * (i mod k), group h is the node block hk..(h+1)k-1.  The edge set has
 * three parts: path edges (i, i+k), shortcut edges (i, i+k*2^s) for
 * i = 0 mod k*2^s, and group stars (i, i+d) for i = 0 mod k,
 * 0 < d <= k-1.
 */
namespace hfamily {

inline void check_params(int n, int k) {
    if (k < 1 || n < 2 || n % k != 0 || n / k < 2)
        throw InvalidParameter("H family needs k >= 1 and n a multiple of k with n/k >= 2");
}

inline std::vector<std::pair<int, int>> path_pairs(int n, int k) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i + k <= n - 1; ++i) pairs.emplace_back(i, i + k);
    return pairs;
}

inline std::vector<std::pair<int, int>> shortcut_pairs(int n, int k, int min_s = 1) {
    std::vector<std::pair<int, int>> pairs;
    for (int s = min_s;; ++s) {
        const std::int64_t step = static_cast<std::int64_t>(k) << s;
        if (step > n - 1) break;
        for (std::int64_t i = 0; i + step <= n - 1; i += step)
            pairs.emplace_back(static_cast<int>(i), static_cast<int>(i + step));
    }
    return pairs;
}

inline std::vector<std::pair<int, int>> star_pairs(int n, int k) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i <= n - 1; i += k)
        for (int d = 1; d <= k - 1 && i + d <= n - 1; ++d) pairs.emplace_back(i, i + d);
    return pairs;
}

}  // namespace hfamily

/**
 * Base family H(n, k), unit weights.  Shortcut exponents default to
 * s >= 1; include_unit_shortcuts adds the s = 0 edges (parallel to the
 * path-0 edges) for sensitivity checks.
 */
inline Multigraph gen_base_H(int n, int k, bool include_unit_shortcuts = false) {
    hfamily::check_params(n, k);
    std::vector<Edge> edges;
    for (auto [u, v] : hfamily::path_pairs(n, k)) edges.push_back({u, v, 1});
    for (auto [u, v] : hfamily::shortcut_pairs(n, k, include_unit_shortcuts ? 0 : 1))
        edges.push_back({u, v, 1});
    for (auto [u, v] : hfamily::star_pairs(n, k)) edges.push_back({u, v, 1});
    return Multigraph(n, std::move(edges));
}

inline void check_promise(int k, const std::set<int>& X, const std::set<int>& Y) {
    for (const auto& side : {X, Y})
        for (int x : side)
            if (x < 1 || x > k - 1)
                throw InvalidParameter("set elements must lie in 1..k-1");
    int common = 0;
    for (int x : X) common += Y.count(x);
    if (common > 1) throw InvalidPromise("|X intersect Y| must be at most 1");
}

/**
 * Weighted disjointness instance on H(n, k).  Path edges weigh
 * alpha*l+1; a first-group star edge (0, x) is heavy unless x is in X,
 * a last-group star edge is heavy unless its offset is in Y; everything
 * else weighs 1.  When X and Y share exactly one element z, the nodes
 * of path z form the unique minimum cut, of weight l = n/k.
 */
inline Multigraph gen_weighted_cut_instance(int n, int k, int alpha, const std::set<int>& X,
                                            const std::set<int>& Y) {
    hfamily::check_params(n, k);
    if (alpha < 1) throw InvalidParameter("alpha must be >= 1");
    check_promise(k, X, Y);
    const std::int64_t l = n / k;
    const std::int64_t heavy = static_cast<std::int64_t>(alpha) * l + 1;
    const int last = n - k;
    std::vector<Edge> edges;
    for (auto [u, v] : hfamily::path_pairs(n, k)) edges.push_back({u, v, heavy});
    for (auto [u, v] : hfamily::shortcut_pairs(n, k)) edges.push_back({u, v, 1});
    for (auto [u, v] : hfamily::star_pairs(n, k)) {
        std::int64_t w = 1;
        if (u == 0) w = X.count(v - u) ? 1 : heavy;
        if (u == last) w = Y.count(v - u) ? 1 : heavy;
        edges.push_back({u, v, w});
    }
    return Multigraph(n, std::move(edges));
}

/** Node ids of path z in H(n, k): z, z+k, z+2k, ... */
inline std::vector<int> path_members(int n, int k, int z) {
    std::vector<int> members;
    for (int i = z; i < n; i += k) members.push_back(i);
    return members;
}

/**
 * Simple unweighted variant: every original node becomes a clique
 * K_{alpha*lambda+1}, heavy relations become complete bipartite
 * expansions, weight-1 relations a single edge between the lowest-id
 * clique nodes.  Interior vertical stars appear only at columns placed
 * greedily at spacing 2*l/lambda, budget lambda-2.
 */
inline Multigraph gen_simple_cut_instance(int k, int l, int alpha, int lambda,
                                          const std::set<int>& X, const std::set<int>& Y) {
    if (k < 2 || l < 2) throw InvalidParameter("simple instance needs k >= 2 and l >= 2");
    if (alpha < 1 || lambda < 2) throw InvalidParameter("need alpha >= 1 and lambda >= 2");
    if (l < lambda) throw InvalidParameter("column spacing needs l >= lambda");
    check_promise(k, X, Y);
    const int n = l * k;
    const int s = alpha * lambda + 1;
    const int last = n - k;

    std::vector<Edge> edges;
    auto bipartite = [&](int a, int b) {
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) edges.push_back({a * s + i, b * s + j, 1});
    };
    auto single = [&](int a, int b) { edges.push_back({a * s, b * s, 1}); };

    for (int a = 0; a < n; ++a)
        for (int i = 0; i < s; ++i)
            for (int j = i + 1; j < s; ++j) edges.push_back({a * s + i, a * s + j, 1});

    for (auto [u, v] : hfamily::path_pairs(n, k)) bipartite(u, v);
    for (auto [u, v] : hfamily::shortcut_pairs(n, k)) single(u, v);

    std::vector<int> columns = {0, l - 1};
    const double spacing = 2.0 * l / lambda;
    for (int j = 1; static_cast<int>(columns.size()) < lambda; ++j) {
        const int h = static_cast<int>(std::llround(spacing * j));
        if (h > l - 2) break;
        if (h >= 1 && h != columns.back()) columns.push_back(h);
    }
    for (int h : columns) {
        const int base = h * k;
        for (int d = 1; d <= k - 1; ++d) {
            bool light = true;
            if (base == 0) light = X.count(d) > 0;
            if (base == last) light = Y.count(d) > 0;
            if (light)
                single(base, base + d);
            else
                bipartite(base, base + d);
        }
    }
    return Multigraph(n * s, std::move(edges));
}

/** Clique-expanded node ids of path z inside a simple instance. */
inline std::vector<int> path_clique_members(int n, int k, int z, int clique_size) {
    std::vector<int> members;
    for (int orig : path_members(n, k, z))
        for (int j = 0; j < clique_size; ++j) members.push_back(orig * clique_size + j);
    std::sort(members.begin(), members.end());
    return members;
}

/**
 * Maximum over h of the total edge weight between {0..h} and
 * {h+k+1..n-1}.  Membership in the G(n, k, c) family means this never
 * exceeds c; for H(n, k) the bound is log2(n/k).
 */
inline std::int64_t verify_family(const Multigraph& g, int k) {
    if (k < 0) throw InvalidParameter("gap width must be nonnegative");
    const int n = g.node_count();
    std::int64_t worst = 0;
    for (int h = 0; h < n; ++h) {
        std::int64_t crossing = 0;
        for (const Edge& e : g.edges()) {
            const int lo = std::min(e.u, e.v);
            const int hi = std::max(e.u, e.v);
            if (lo <= h && hi >= h + k + 1) crossing += e.w;
        }
        worst = std::max(worst, crossing);
    }
    return worst;
}

struct DisseminationGraphs {
    Multigraph weighted;  // weight-lambda path plus unit shortcut edges
    Multigraph simple;    // lambda-th power of the path, shortcut edges added where absent
};

inline DisseminationGraphs gen_dissemination_graphs(int n, int lambda) {
    if (n < 4 || lambda < 1) throw InvalidParameter("need n >= 4 and lambda >= 1");
    const auto shortcuts = hfamily::shortcut_pairs(n, 1);

    std::vector<Edge> weighted;
    for (int i = 0; i + 1 < n; ++i) weighted.push_back({i, i + 1, lambda});
    for (auto [u, v] : shortcuts) weighted.push_back({u, v, 1});

    std::vector<Edge> simple;
    for (int i = 0; i < n; ++i)
        for (int d = 1; d <= lambda && i + d < n; ++d) simple.push_back({i, i + d, 1});
    for (auto [u, v] : shortcuts)
        if (v - u > lambda) simple.push_back({u, v, 1});

    return {Multigraph(n, std::move(weighted)), Multigraph(n, std::move(simple))};
}

struct SampledDiameterResult {
    std::vector<std::int64_t> diameters;  // kInfiniteDiameter when disconnected
    int disconnected = 0;

    /** Fraction of trials whose diameter reached the threshold (infinite counts). */
    double fraction_at_least(std::int64_t threshold) const {
        if (diameters.empty()) return 0.0;
        std::int64_t hits = 0;
        for (auto d : diameters)
            if (d >= threshold) ++hits;
        return static_cast<double>(hits) / static_cast<double>(diameters.size());
    }
};

/**
 * Keeps each edge with probability 1-(1-p)^w (some unit copy survives)
 * and measures the hop diameter of the surviving topology, per trial.
 */
inline SampledDiameterResult sampled_diameter_experiment(const Multigraph& g, double p,
                                                         int trials, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw InvalidProbability(p);
    if (trials < 1) throw InvalidParameter("need at least one trial");
    SampledDiameterResult result;
    for (int t = 0; t < trials; ++t) {
        auto rng = make_rng(seed, 0xd1a7, static_cast<std::uint64_t>(t));
        EdgeSubset kept(g.edge_count());
        for (int id = 0; id < g.edge_count(); ++id) {
            const double keep = 1.0 - std::pow(1.0 - p, static_cast<double>(g.edge(id).w));
            if (bernoulli(rng, keep)) kept.set(id);
        }
        const std::int64_t d = diameter(g, kept);
        if (d == kInfiniteDiameter) ++result.disconnected;
        result.diameters.push_back(d);
    }
    return result;
}

}  // namespace congestcut
