#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "congestcut/errors.hpp"
#include "congestcut/rng.hpp"

namespace congestcut {

/** A weighted edge; weight w models w parallel unit edges. */
struct Edge {
    int u;
    int v;
    std::int64_t w;
};

inline constexpr std::int64_t kInfiniteDiameter = std::numeric_limits<std::int64_t>::max();

/**
 * Undirected multigraph with dense edge ids 0..m-1.  Parallel edges are kept
 * as distinct entries; self-loops are rejected.  Node ids are 0..n-1.
 */
class Multigraph {
public:
    Multigraph() : n_(0) {}

    Multigraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n_ < 1) throw InvalidParameter("multigraph needs at least one node");
        for (const Edge& e : edges_) {
            if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
                throw InvalidParameter("edge endpoint out of range");
            if (e.u == e.v) throw InvalidParameter("self-loops are not allowed");
            if (e.w < 1) throw InvalidParameter("edge weights must be >= 1");
        }
        build_adjacency();
    }

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }

    /** Total unit-edge count (sum of weights). */
    std::int64_t total_weight() const {
        std::int64_t t = 0;
        for (const Edge& e : edges_) t += e.w;
        return t;
    }

    std::int64_t max_weight() const {
        std::int64_t t = 0;
        for (const Edge& e : edges_) t = std::max(t, e.w);
        return t;
    }

    const std::vector<int>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }

    int other_end(int edge_id, int v) const {
        const Edge& e = edges_[static_cast<std::size_t>(edge_id)];
        return e.u == v ? e.v : e.u;
    }

    /** Sum of incident edge weights. */
    std::int64_t degree_weight(int v) const {
        std::int64_t t = 0;
        for (int id : incident(v)) t += edges_[static_cast<std::size_t>(id)].w;
        return t;
    }

    /** Enforces the configurable weight cap w <= n^exponent. */
    void validate_weight_cap(int exponent = 3) const {
        double cap = std::pow(static_cast<double>(n_), static_cast<double>(exponent));
        for (const Edge& e : edges_) {
            if (static_cast<double>(e.w) > cap)
                throw InvalidParameter("edge weight " + std::to_string(e.w) +
                                       " exceeds n^" + std::to_string(exponent));
        }
    }

private:
    void build_adjacency() {
        incident_.assign(static_cast<std::size_t>(n_), {});
        for (int id = 0; id < edge_count(); ++id) {
            incident_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(id)].u)].push_back(id);
            incident_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(id)].v)].push_back(id);
        }
    }

    int n_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incident_;
};

/** Set of edge ids over a graph with m edges, stored as a bitmask. */
class EdgeSubset {
public:
    EdgeSubset() : m_(0) {}
    explicit EdgeSubset(int m) : m_(m), words_((static_cast<std::size_t>(m) + 63) / 64, 0) {}

    static EdgeSubset all(int m) {
        EdgeSubset s(m);
        for (int i = 0; i < m; ++i) s.set(i);
        return s;
    }

    int universe_size() const { return m_; }

    void set(int id) {
        check(id);
        words_[static_cast<std::size_t>(id) / 64] |= 1ull << (id % 64);
    }

    void reset(int id) {
        check(id);
        words_[static_cast<std::size_t>(id) / 64] &= ~(1ull << (id % 64));
    }

    bool test(int id) const {
        check(id);
        return (words_[static_cast<std::size_t>(id) / 64] >> (id % 64)) & 1ull;
    }

    int count() const {
        int c = 0;
        for (std::uint64_t w : words_) c += __builtin_popcountll(w);
        return c;
    }

    EdgeSubset complement() const {
        EdgeSubset out(m_);
        for (int i = 0; i < m_; ++i)
            if (!test(i)) out.set(i);
        return out;
    }

    EdgeSubset united(const EdgeSubset& other) const {
        if (other.m_ != m_) throw InvalidParameter("edge subset universes differ");
        EdgeSubset out(m_);
        for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] | other.words_[i];
        return out;
    }

    std::vector<int> ids() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count()));
        for (int i = 0; i < m_; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    bool operator==(const EdgeSubset& other) const {
        return m_ == other.m_ && words_ == other.words_;
    }

private:
    void check(int id) const {
        if (id < 0 || id >= m_) throw InvalidParameter("edge id out of range");
    }

    int m_;
    std::vector<std::uint64_t> words_;
};

/** One side of a cut plus its crossing weight. */
struct Cut {
    std::vector<int> members;
    std::int64_t weight = 0;

    /** Canonical side: the one containing node 0, members sorted. */
    std::vector<int> canonical_members(int n) const {
        std::vector<char> in(static_cast<std::size_t>(n), 0);
        for (int v : members) in[static_cast<std::size_t>(v)] = 1;
        std::vector<int> out;
        if (!members.empty() && in[0]) {
            out = members;
        } else {
            for (int v = 0; v < n; ++v)
                if (!in[static_cast<std::size_t>(v)]) out.push_back(v);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

/** Crossing weight of the cut (members, V \ members). */
inline std::int64_t cut_weight(const Multigraph& g, const std::vector<int>& members) {
    const int n = g.node_count();
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    int distinct = 0;
    for (int v : members) {
        if (v < 0 || v >= n) throw InvalidCut("cut member out of range");
        if (!in[static_cast<std::size_t>(v)]) {
            in[static_cast<std::size_t>(v)] = 1;
            ++distinct;
        }
    }
    if (distinct == 0 || distinct == n)
        throw InvalidCut("cut side must be a nonempty proper subset");
    std::int64_t w = 0;
    for (const Edge& e : g.edges())
        if (in[static_cast<std::size_t>(e.u)] != in[static_cast<std::size_t>(e.v)]) w += e.w;
    return w;
}

/** Disjoint-set forest with union by size. */
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
        parent_[static_cast<std::size_t>(b)] = a;
        size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

/** Component labels: every node carries the min (and max) node id of its component. */
struct Components {
    std::vector<int> label;
    std::vector<int> label_max;
    int count = 0;

    std::vector<std::vector<int>> groups() const {
        std::vector<std::vector<int>> by_label;
        std::vector<int> order;
        std::vector<int> slot(label.size(), -1);
        for (int v = 0; v < static_cast<int>(label.size()); ++v) {
            int l = label[static_cast<std::size_t>(v)];
            if (slot[static_cast<std::size_t>(l)] < 0) {
                slot[static_cast<std::size_t>(l)] = static_cast<int>(by_label.size());
                by_label.emplace_back();
            }
            by_label[static_cast<std::size_t>(slot[static_cast<std::size_t>(l)])].push_back(v);
        }
        return by_label;
    }
};

namespace detail {

template <typename EdgePred>
Components components_filtered(const Multigraph& g, EdgePred keep) {
    const int n = g.node_count();
    UnionFind uf(n);
    for (int id = 0; id < g.edge_count(); ++id) {
        if (keep(id)) uf.unite(g.edge(id).u, g.edge(id).v);
    }
    Components out;
    out.label.assign(static_cast<std::size_t>(n), 0);
    out.label_max.assign(static_cast<std::size_t>(n), 0);
    std::vector<int> mins(static_cast<std::size_t>(n), std::numeric_limits<int>::max());
    std::vector<int> maxs(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
        int r = uf.find(v);
        mins[static_cast<std::size_t>(r)] = std::min(mins[static_cast<std::size_t>(r)], v);
        maxs[static_cast<std::size_t>(r)] = std::max(maxs[static_cast<std::size_t>(r)], v);
    }
    int count = 0;
    for (int v = 0; v < n; ++v)
        if (maxs[static_cast<std::size_t>(v)] >= 0) ++count;
    for (int v = 0; v < n; ++v) {
        int r = uf.find(v);
        out.label[static_cast<std::size_t>(v)] = mins[static_cast<std::size_t>(r)];
        out.label_max[static_cast<std::size_t>(v)] = maxs[static_cast<std::size_t>(r)];
    }
    out.count = count;
    return out;
}

}  // namespace detail

inline Components components(const Multigraph& g) {
    return detail::components_filtered(g, [](int) { return true; });
}

inline Components components(const Multigraph& g, const EdgeSubset& sub) {
    if (sub.universe_size() != g.edge_count())
        throw InvalidParameter("edge subset universe does not match graph");
    return detail::components_filtered(g, [&](int id) { return sub.test(id); });
}

struct ContractResult {
    Multigraph graph;
    std::vector<int> node_map;
};

/**
 * Contracts every edge in `contracted`.  Supernodes are numbered densely in
 * increasing order of the minimum original node id they contain; surviving
 * edges keep their weights and stay parallel.
 */
inline ContractResult contract(const Multigraph& g, const EdgeSubset& contracted) {
    Components comp = components(g, contracted);
    std::vector<int> labels;
    labels.reserve(comp.label.size());
    for (int v = 0; v < g.node_count(); ++v)
        if (comp.label[static_cast<std::size_t>(v)] == v) labels.push_back(v);
    std::vector<int> dense(static_cast<std::size_t>(g.node_count()), -1);
    for (int i = 0; i < static_cast<int>(labels.size()); ++i)
        dense[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] = i;

    std::vector<int> node_map(static_cast<std::size_t>(g.node_count()));
    for (int v = 0; v < g.node_count(); ++v)
        node_map[static_cast<std::size_t>(v)] = dense[static_cast<std::size_t>(comp.label[static_cast<std::size_t>(v)])];

    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        int a = node_map[static_cast<std::size_t>(e.u)];
        int b = node_map[static_cast<std::size_t>(e.v)];
        if (a != b) edges.push_back({a, b, e.w});
    }
    return {Multigraph(static_cast<int>(labels.size()), std::move(edges)), std::move(node_map)};
}

namespace detail {

template <typename EdgePred>
std::int64_t diameter_filtered(const Multigraph& g, EdgePred keep) {
    const int n = g.node_count();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int id = 0; id < g.edge_count(); ++id) {
        if (!keep(id)) continue;
        adj[static_cast<std::size_t>(g.edge(id).u)].push_back(g.edge(id).v);
        adj[static_cast<std::size_t>(g.edge(id).v)].push_back(g.edge(id).u);
    }
    std::int64_t best = 0;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> queue(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        int head = 0, tail = 0;
        dist[static_cast<std::size_t>(s)] = 0;
        queue[static_cast<std::size_t>(tail++)] = s;
        while (head < tail) {
            int v = queue[static_cast<std::size_t>(head++)];
            for (int u : adj[static_cast<std::size_t>(v)]) {
                if (dist[static_cast<std::size_t>(u)] < 0) {
                    dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                    queue[static_cast<std::size_t>(tail++)] = u;
                }
            }
        }
        for (int v = 0; v < n; ++v) {
            if (dist[static_cast<std::size_t>(v)] < 0) return kInfiniteDiameter;
            best = std::max(best, static_cast<std::int64_t>(dist[static_cast<std::size_t>(v)]));
        }
    }
    return best;
}

}  // namespace detail

/** Hop diameter; kInfiniteDiameter when disconnected. */
inline std::int64_t diameter(const Multigraph& g) {
    return detail::diameter_filtered(g, [](int) { return true; });
}

inline std::int64_t diameter(const Multigraph& g, const EdgeSubset& sub) {
    if (sub.universe_size() != g.edge_count())
        throw InvalidParameter("edge subset universe does not match graph");
    return detail::diameter_filtered(g, [&](int id) { return sub.test(id); });
}

/**
 * A sample of unit edges, stored lazily as per-edge copy counts.  Copies of a
 * weight-w edge are indexed 0..w-1; a sample holding k copies of edge e is
 * canonically the set {(e,0), ..., (e,k-1)} unless stated otherwise.
 */
struct UnitSample {
    std::vector<std::int64_t> count;
    std::int64_t total = 0;

    EdgeSubset topology() const {
        EdgeSubset out(static_cast<int>(count.size()));
        for (int id = 0; id < static_cast<int>(count.size()); ++id)
            if (count[static_cast<std::size_t>(id)] > 0) out.set(id);
        return out;
    }
};

/** Includes every unit edge independently with probability p. */
inline UnitSample sample_edges(const Multigraph& g, double p, std::mt19937_64& rng) {
    if (p < 0.0 || p > 1.0) throw InvalidProbability(p);
    UnitSample s;
    s.count.assign(static_cast<std::size_t>(g.edge_count()), 0);
    for (int id = 0; id < g.edge_count(); ++id) {
        std::int64_t c = binomial(rng, g.edge(id).w, p);
        s.count[static_cast<std::size_t>(id)] = c;
        s.total += c;
    }
    return s;
}

/** Text format: first line "n m", then m lines "u v w". */
inline void write_graph(std::ostream& os, const Multigraph& g) {
    os << g.node_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

inline Multigraph read_graph(std::istream& is) {
    int n = 0, m = 0;
    if (!(is >> n >> m)) throw InvalidParameter("bad graph header; expected \"n m\"");
    if (n < 1 || m < 0) throw InvalidParameter("bad graph header values");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Edge e{};
        if (!(is >> e.u >> e.v >> e.w)) throw InvalidParameter("truncated graph edge list");
        edges.push_back(e);
    }
    return Multigraph(n, std::move(edges));
}

inline std::string graph_to_string(const Multigraph& g) {
    std::ostringstream os;
    write_graph(os, g);
    return os.str();
}

inline Multigraph graph_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_graph(is);
}

}  // namespace congestcut
