#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "congestcut/bits.hpp"
#include "congestcut/errors.hpp"
#include "congestcut/graph.hpp"
#include "congestcut/ledger.hpp"
#include "congestcut/sim.hpp"

namespace congestcut {

enum class Backend { Simulate, Central };

/** Accumulated measurements from the simulate backend. */
struct ExecStats {
    std::int64_t measured_rounds = 0;
    std::int64_t max_bits_per_edge_round = 0;
    std::int64_t total_bits_sent = 0;
    std::int64_t sim_runs = 0;

    void absorb(const SimResult& r) {
        measured_rounds += r.rounds_used;
        max_bits_per_edge_round = std::max(max_bits_per_edge_round, r.max_bits_per_edge_round);
        total_bits_sent += r.total_bits_sent;
        ++sim_runs;
    }
};

/**
 * How a primitive executes: message-faithful simulation or the
 * centralized mirror (identical outputs, no traffic).  The ledger, when
 * attached, receives the analytical charge either way.
 */
struct ExecPolicy {
    Backend backend = Backend::Simulate;
    std::uint64_t seed = 1;
    int round_cap = 5'000'000;
    std::optional<BitBudget> budget;
    CostLedger* ledger = nullptr;
    ExecStats* stats = nullptr;
    std::int64_t ledger_diameter = -1;  // analytic D; computed from g when < 0

    BitBudget budget_for(const Multigraph& g) const {
        return budget ? *budget : BitBudget::defaults_for(std::max(2, g.node_count()));
    }
};

namespace detail {

inline std::int64_t ledger_diameter_of(const Multigraph& g, const ExecPolicy& policy) {
    if (policy.ledger_diameter >= 0) return policy.ledger_diameter;
    std::int64_t d = diameter(g);
    return d == kInfiniteDiameter ? g.node_count() : d;
}

inline void absorb_stats(const ExecPolicy& policy, const SimResult& r) {
    if (policy.stats != nullptr) policy.stats->absorb(r);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// BFS tree
// ---------------------------------------------------------------------------

struct BfsTree {
    int root = 0;
    std::vector<int> parent_edge;  // -1 at root and unreached nodes
    std::vector<int> parent_node;
    std::vector<std::int64_t> depth;  // -1 when unreached
    std::vector<char> reached;
    std::int64_t height = 0;
};

namespace detail {

/**
 * Token wave: the root floods a one-bit token; a node adopts as parent
 * the smallest edge id that delivered the token first, forwards once,
 * and halts.  Unreached nodes halt after n rounds, flagged.
 */
class BfsProgram : public NodeProgram {
public:
    explicit BfsProgram(int root) : root_(root) {}

    void init(NodeEnv env) override {
        env_ = std::move(env);
        if (env_.node == root_) {
            depth_ = 0;
            reached_ = true;
        }
    }

    void step(int round, const std::vector<InboundMessage>& inbox, Outbox& out) override {
        if (env_.node == root_ && round == 1) {
            send_token(out);
            done_ = true;
            return;
        }
        if (!reached_ && !inbox.empty()) {
            reached_ = true;
            depth_ = round - 1;
            parent_edge_ = env_.links[static_cast<std::size_t>(inbox.front().link)].edge_id;
            parent_node_ = env_.links[static_cast<std::size_t>(inbox.front().link)].peer;
            for (const auto& m : inbox) {
                int eid = env_.links[static_cast<std::size_t>(m.link)].edge_id;
                if (eid < parent_edge_) {
                    parent_edge_ = eid;
                    parent_node_ = env_.links[static_cast<std::size_t>(m.link)].peer;
                }
            }
            send_token(out);
            done_ = true;
            return;
        }
        if (round > env_.n) done_ = true;
    }

    bool halted() const override { return done_; }

    bool reached() const { return reached_; }
    std::int64_t depth() const { return depth_; }
    int parent_edge() const { return parent_edge_; }
    int parent_node() const { return parent_node_; }

private:
    void send_token(Outbox& out) {
        BitString token;
        token.append(1, 1);
        for (int i = 0; i < static_cast<int>(env_.links.size()); ++i) out.send(i, token);
    }

    NodeEnv env_;
    int root_;
    bool reached_ = false;
    bool done_ = false;
    std::int64_t depth_ = -1;
    int parent_edge_ = -1;
    int parent_node_ = -1;
};

}  // namespace detail

inline BfsTree bfs_tree(const Multigraph& g, int root, const ExecPolicy& policy = {}) {
    const int n = g.node_count();
    if (root < 0 || root >= n) throw InvalidParameter("bfs root out of range");

    BfsTree tree;
    tree.root = root;
    tree.parent_edge.assign(static_cast<std::size_t>(n), -1);
    tree.parent_node.assign(static_cast<std::size_t>(n), -1);
    tree.depth.assign(static_cast<std::size_t>(n), -1);
    tree.reached.assign(static_cast<std::size_t>(n), 0);

    if (policy.backend == Backend::Simulate) {
        auto programs = make_programs<detail::BfsProgram>(n, root);
        auto result = run_sync(g, programs, policy.budget_for(g), policy.round_cap, policy.seed);
        detail::absorb_stats(policy, result);
        for (int v = 0; v < n; ++v) {
            auto& p = program_as<detail::BfsProgram>(programs, v);
            tree.reached[static_cast<std::size_t>(v)] = p.reached() ? 1 : 0;
            tree.depth[static_cast<std::size_t>(v)] = p.depth();
            tree.parent_edge[static_cast<std::size_t>(v)] = p.parent_edge();
            tree.parent_node[static_cast<std::size_t>(v)] = p.parent_node();
        }
    } else {
        std::vector<int> queue;
        queue.push_back(root);
        tree.reached[static_cast<std::size_t>(root)] = 1;
        tree.depth[static_cast<std::size_t>(root)] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int v = queue[head];
            for (int id : g.incident(v)) {
                int u = g.other_end(id, v);
                if (!tree.reached[static_cast<std::size_t>(u)]) {
                    tree.reached[static_cast<std::size_t>(u)] = 1;
                    tree.depth[static_cast<std::size_t>(u)] =
                        tree.depth[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(u);
                }
            }
        }
        std::sort(queue.begin(), queue.end());
        for (int v : queue) {
            if (v == root) continue;
            for (int id : g.incident(v)) {
                int u = g.other_end(id, v);
                if (tree.reached[static_cast<std::size_t>(u)] &&
                    tree.depth[static_cast<std::size_t>(u)] ==
                        tree.depth[static_cast<std::size_t>(v)] - 1 &&
                    (tree.parent_edge[static_cast<std::size_t>(v)] < 0 ||
                     id < tree.parent_edge[static_cast<std::size_t>(v)])) {
                    tree.parent_edge[static_cast<std::size_t>(v)] = id;
                    tree.parent_node[static_cast<std::size_t>(v)] = u;
                }
            }
        }
    }

    for (int v = 0; v < n; ++v)
        if (tree.reached[static_cast<std::size_t>(v)])
            tree.height = std::max(tree.height, tree.depth[static_cast<std::size_t>(v)]);
    if (policy.ledger != nullptr)
        policy.ledger->charge("bfs", detail::ledger_diameter_of(g, policy));
    return tree;
}

// ---------------------------------------------------------------------------
// Convergecast / broadcast over a BFS tree
// ---------------------------------------------------------------------------

namespace detail {

/** Sends the running minimum to the parent every round for height+1 rounds. */
class ConvergecastProgram : public NodeProgram {
public:
    ConvergecastProgram(std::shared_ptr<const std::vector<std::int64_t>> values,
                        std::shared_ptr<const BfsTree> tree, int value_bits)
        : values_(std::move(values)), tree_(std::move(tree)), value_bits_(value_bits) {}

    void init(NodeEnv env) override {
        env_ = std::move(env);
        min_ = (*values_)[static_cast<std::size_t>(env_.node)];
        const int pe = tree_->parent_edge[static_cast<std::size_t>(env_.node)];
        for (int i = 0; i < static_cast<int>(env_.links.size()); ++i)
            if (env_.links[static_cast<std::size_t>(i)].edge_id == pe) parent_link_ = i;
        total_rounds_ = static_cast<int>(tree_->height) + 1;
    }

    void step(int round, const std::vector<InboundMessage>& inbox, Outbox& out) override {
        for (const auto& m : inbox) {
            std::size_t pos = 0;
            min_ = std::min(min_, static_cast<std::int64_t>(m.payload.read(pos, value_bits_)));
        }
        if (round > total_rounds_) {
            done_ = true;
            return;
        }
        if (parent_link_ >= 0) {
            BitString msg;
            msg.append(static_cast<std::uint64_t>(min_), value_bits_);
            out.send(parent_link_, msg);
        }
    }

    bool halted() const override { return done_; }
    std::int64_t output() const override { return min_; }

private:
    NodeEnv env_;
    std::shared_ptr<const std::vector<std::int64_t>> values_;
    std::shared_ptr<const BfsTree> tree_;
    int value_bits_;
    int parent_link_ = -1;
    int total_rounds_ = 0;
    std::int64_t min_ = 0;
    bool done_ = false;
};

/** Floods a value from the root outward, one forward per node. */
class BroadcastProgram : public NodeProgram {
public:
    BroadcastProgram(int root, std::int64_t value, int value_bits)
        : root_(root), value_bits_(value_bits), value_(value) {}

    void init(NodeEnv env) override {
        env_ = std::move(env);
        knows_ = env_.node == root_;
        if (!knows_) value_ = 0;
    }

    void step(int round, const std::vector<InboundMessage>& inbox, Outbox& out) override {
        if (!knows_ && !inbox.empty()) {
            std::size_t pos = 0;
            value_ = static_cast<std::int64_t>(inbox.front().payload.read(pos, value_bits_));
            knows_ = true;
        }
        if (knows_) {
            BitString msg;
            msg.append(static_cast<std::uint64_t>(value_), value_bits_);
            for (int i = 0; i < static_cast<int>(env_.links.size()); ++i) out.send(i, msg);
            done_ = true;
            return;
        }
        if (round > env_.n) done_ = true;
    }

    bool halted() const override { return done_; }
    std::int64_t output() const override { return value_; }

private:
    NodeEnv env_;
    int root_;
    int value_bits_;
    std::int64_t value_;
    bool knows_ = false;
    bool done_ = false;
};

inline int value_bits_for(const std::vector<std::int64_t>& values) {
    std::uint64_t biggest = 1;
    for (auto v : values) {
        if (v < 0) throw InvalidParameter("aggregated values must be nonnegative");
        biggest = std::max(biggest, static_cast<std::uint64_t>(v));
    }
    return bit_width_for(biggest);
}

}  // namespace detail

/** Minimum of the reached nodes' values, aggregated toward the tree root. */
inline std::int64_t convergecast_min(const Multigraph& g, const BfsTree& tree,
                                     const std::vector<std::int64_t>& values,
                                     const ExecPolicy& policy = {}) {
    const int n = g.node_count();
    if (static_cast<int>(values.size()) != n) throw InvalidParameter("need one value per node");

    std::int64_t result;
    if (policy.backend == Backend::Simulate) {
        auto shared_values = std::make_shared<const std::vector<std::int64_t>>(values);
        auto shared_tree = std::make_shared<const BfsTree>(tree);
        const int vb = detail::value_bits_for(values);
        auto programs =
            make_programs<detail::ConvergecastProgram>(n, shared_values, shared_tree, vb);
        auto sim = run_sync(g, programs, policy.budget_for(g), policy.round_cap, policy.seed);
        detail::absorb_stats(policy, sim);
        result = sim.outputs[static_cast<std::size_t>(tree.root)];
    } else {
        result = values[static_cast<std::size_t>(tree.root)];
        for (int v = 0; v < n; ++v)
            if (tree.reached[static_cast<std::size_t>(v)])
                result = std::min(result, values[static_cast<std::size_t>(v)]);
    }
    if (policy.ledger != nullptr)
        policy.ledger->charge("convergecast", detail::ledger_diameter_of(g, policy));
    return result;
}

/** Delivers the root's value to every node of a connected graph. */
inline std::vector<std::int64_t> broadcast_value(const Multigraph& g, const BfsTree& tree,
                                                 std::int64_t value,
                                                 const ExecPolicy& policy = {}) {
    const int n = g.node_count();
    std::vector<std::int64_t> out;
    if (policy.backend == Backend::Simulate) {
        const int vb = detail::value_bits_for({value});
        auto programs = make_programs<detail::BroadcastProgram>(n, tree.root, value, vb);
        auto sim = run_sync(g, programs, policy.budget_for(g), policy.round_cap, policy.seed);
        detail::absorb_stats(policy, sim);
        out = sim.outputs;
    } else {
        out.assign(static_cast<std::size_t>(n), value);
    }
    if (policy.ledger != nullptr)
        policy.ledger->charge("broadcast", detail::ledger_diameter_of(g, policy));
    return out;
}

// ---------------------------------------------------------------------------
// Multi-instance component labeling and connectivity
// ---------------------------------------------------------------------------

namespace detail {

struct LabelFloodConfig {
    int n = 0;
    int num_instances = 0;
    int batches = 1;      // NB: instance j belongs to batch j % NB
    int id_bits = 1;
    int phases = 1;       // propagation rounds per batch
    bool connectivity = false;
    int flag_chunks = 0;  // disconnect-mask chunks, each <= budget bits
    int flag_bits = 0;    // bits per full chunk
    std::shared_ptr<const std::vector<EdgeSubset>> instances;
    std::shared_ptr<const std::vector<int>> values;  // flooded value per node; node id if absent

    int label_rounds() const { return batches * phases; }
    int compare_rounds() const { return connectivity ? batches : 0; }
    int flag_rounds() const { return connectivity ? flag_chunks * phases : 0; }
    int total_rounds() const { return label_rounds() + compare_rounds() + flag_rounds() + 1; }
};

inline LabelFloodConfig make_flood_config(const Multigraph& g,
                                          std::shared_ptr<const std::vector<EdgeSubset>> instances,
                                          const BitBudget& budget, bool connectivity,
                                          std::shared_ptr<const std::vector<int>> values = nullptr) {
    LabelFloodConfig cfg;
    cfg.n = g.node_count();
    cfg.num_instances = static_cast<int>(instances->size());
    cfg.id_bits = bit_width_for(static_cast<std::uint64_t>(std::max(1, cfg.n - 1)));
    cfg.phases = std::max(1, cfg.n - 1);
    cfg.connectivity = connectivity;
    cfg.instances = std::move(instances);
    cfg.values = std::move(values);

    const std::int64_t flat = budget.mode == BitBudget::Mode::PerEdge
                                  ? budget.bits
                                  : budget.bits;  // per-weight only grows the allowance
    const int capacity = static_cast<int>(flat / (2 * cfg.id_bits));
    if (capacity < 1)
        throw InvalidParameter("bit budget too small for one label pair per message");
    cfg.batches = std::max(1, (cfg.num_instances + capacity - 1) / capacity);
    if (connectivity) {
        cfg.flag_bits = static_cast<int>(std::min<std::int64_t>(flat, cfg.num_instances));
        cfg.flag_chunks = (cfg.num_instances + cfg.flag_bits - 1) / cfg.flag_bits;
    }
    return cfg;
}

/**
 * Pipelined min/max-label flooding.  Batch b is served in rounds
 * r = b+1, b+1+NB, ...; a message on an edge carries the label pairs of
 * every batch instance containing that edge, in ascending instance
 * order.  The optional connectivity tail compares final labels across
 * all graph edges and floods the per-instance disconnect flags.
 */
class LabelFloodProgram : public NodeProgram {
public:
    explicit LabelFloodProgram(LabelFloodConfig cfg) : cfg_(std::move(cfg)) {}

    void init(NodeEnv env) override {
        env_ = std::move(env);
        const int v0 =
            cfg_.values ? (*cfg_.values)[static_cast<std::size_t>(env_.node)] : env_.node;
        min_.assign(static_cast<std::size_t>(cfg_.num_instances), v0);
        max_.assign(static_cast<std::size_t>(cfg_.num_instances), v0);
        disconnected_.assign(static_cast<std::size_t>(cfg_.num_instances), 0);
        link_instances_.resize(env_.links.size());
        for (std::size_t i = 0; i < env_.links.size(); ++i) {
            const int eid = env_.links[i].edge_id;
            for (int j = 0; j < cfg_.num_instances; ++j)
                if ((*cfg_.instances)[static_cast<std::size_t>(j)].test(eid))
                    link_instances_[i].push_back(j);
        }
    }

    void step(int round, const std::vector<InboundMessage>& inbox, Outbox& out) override {
        const int label_end = cfg_.label_rounds();
        const int compare_end = label_end + cfg_.compare_rounds();
        const int flag_end = compare_end + cfg_.flag_rounds();

        absorb(round, inbox);
        if (round > flag_end) {
            done_ = true;
            return;
        }

        if (round <= label_end) {
            const int batch = (round - 1) % cfg_.batches;
            for (std::size_t i = 0; i < env_.links.size(); ++i) {
                BitString msg;
                for (int j : link_instances_[i]) {
                    if (j % cfg_.batches != batch) continue;
                    msg.append(static_cast<std::uint64_t>(min_[static_cast<std::size_t>(j)]),
                               cfg_.id_bits);
                    msg.append(static_cast<std::uint64_t>(max_[static_cast<std::size_t>(j)]),
                               cfg_.id_bits);
                }
                if (!msg.empty()) out.send(static_cast<int>(i), msg);
            }
        } else if (round <= compare_end) {
            const int batch = round - label_end - 1;
            BitString msg;
            for (int j = batch; j < cfg_.num_instances; j += cfg_.batches)
                msg.append(static_cast<std::uint64_t>(min_[static_cast<std::size_t>(j)]),
                           cfg_.id_bits);
            if (!msg.empty())
                for (int i = 0; i < static_cast<int>(env_.links.size()); ++i) out.send(i, msg);
        } else if (round <= flag_end) {
            const int chunk = (round - compare_end - 1) % std::max(1, cfg_.flag_chunks);
            const int lo = chunk * cfg_.flag_bits;
            const int hi = std::min(cfg_.num_instances, lo + cfg_.flag_bits);
            BitString msg;
            for (int j = lo; j < hi; ++j)
                msg.append(disconnected_[static_cast<std::size_t>(j)] ? 1 : 0, 1);
            if (!msg.empty())
                for (int i = 0; i < static_cast<int>(env_.links.size()); ++i) out.send(i, msg);
        }
    }

    bool halted() const override { return done_; }

    const std::vector<int>& min_labels() const { return min_; }
    const std::vector<int>& max_labels() const { return max_; }
    const std::vector<char>& disconnect_flags() const { return disconnected_; }

private:
    void absorb(int round, const std::vector<InboundMessage>& inbox) {
        const int label_end = cfg_.label_rounds();
        const int compare_end = label_end + cfg_.compare_rounds();
        // messages seen in round r were sent in round r-1
        const int sent = round - 1;
        if (sent < 1) return;
        if (sent <= label_end) {
            const int batch = (sent - 1) % cfg_.batches;
            for (const auto& m : inbox) {
                std::size_t pos = 0;
                for (int j : link_instances_[static_cast<std::size_t>(m.link)]) {
                    if (j % cfg_.batches != batch) continue;
                    const int lo = static_cast<int>(m.payload.read(pos, cfg_.id_bits));
                    const int hi = static_cast<int>(m.payload.read(pos, cfg_.id_bits));
                    min_[static_cast<std::size_t>(j)] =
                        std::min(min_[static_cast<std::size_t>(j)], lo);
                    max_[static_cast<std::size_t>(j)] =
                        std::max(max_[static_cast<std::size_t>(j)], hi);
                }
            }
        } else if (sent <= compare_end) {
            const int batch = sent - label_end - 1;
            for (const auto& m : inbox) {
                std::size_t pos = 0;
                for (int j = batch; j < cfg_.num_instances; j += cfg_.batches) {
                    const int peer = static_cast<int>(m.payload.read(pos, cfg_.id_bits));
                    if (peer != min_[static_cast<std::size_t>(j)])
                        disconnected_[static_cast<std::size_t>(j)] = 1;
                }
            }
        } else {
            const int chunk = (sent - compare_end - 1) % std::max(1, cfg_.flag_chunks);
            const int lo = chunk * cfg_.flag_bits;
            const int hi = std::min(cfg_.num_instances, lo + cfg_.flag_bits);
            for (const auto& m : inbox) {
                std::size_t pos = 0;
                for (int j = lo; j < hi; ++j)
                    if (m.payload.read(pos, 1) != 0) disconnected_[static_cast<std::size_t>(j)] = 1;
            }
        }
    }

    NodeEnv env_;
    LabelFloodConfig cfg_;
    std::vector<int> min_;
    std::vector<int> max_;
    std::vector<char> disconnected_;
    std::vector<std::vector<int>> link_instances_;
    bool done_ = false;
};

}  // namespace detail

/**
 * Component labels for every instance subgraph; all instances run in one
 * pipelined execution and the ledger is charged once.
 */
inline std::vector<Components> component_id_multi(const Multigraph& g,
                                                  const std::vector<EdgeSubset>& instances,
                                                  const ExecPolicy& policy = {}) {
    const int n = g.node_count();
    for (const auto& inst : instances)
        if (inst.universe_size() != g.edge_count())
            throw InvalidParameter("instance universe does not match graph");

    std::vector<Components> out;
    if (instances.empty()) return out;

    if (policy.backend == Backend::Simulate) {
        auto shared = std::make_shared<const std::vector<EdgeSubset>>(instances);
        auto cfg = detail::make_flood_config(g, shared, policy.budget_for(g), false);
        auto programs = make_programs<detail::LabelFloodProgram>(n, cfg);
        auto sim = run_sync(g, programs, policy.budget_for(g), policy.round_cap, policy.seed);
        detail::absorb_stats(policy, sim);
        for (std::size_t j = 0; j < instances.size(); ++j) {
            Components comp;
            comp.label.assign(static_cast<std::size_t>(n), 0);
            comp.label_max.assign(static_cast<std::size_t>(n), 0);
            for (int v = 0; v < n; ++v) {
                auto& p = program_as<detail::LabelFloodProgram>(programs, v);
                comp.label[static_cast<std::size_t>(v)] = p.min_labels()[j];
                comp.label_max[static_cast<std::size_t>(v)] = p.max_labels()[j];
            }
            comp.count = 0;
            for (int v = 0; v < n; ++v)
                if (comp.label[static_cast<std::size_t>(v)] == v) ++comp.count;
            out.push_back(std::move(comp));
        }
    } else {
        for (const auto& inst : instances) out.push_back(components(g, inst));
    }

    if (policy.ledger != nullptr)
        policy.ledger->charge("thurimella_multi", detail::ledger_diameter_of(g, policy), n,
                              static_cast<std::int64_t>(instances.size()));
    return out;
}

struct ComponentExtrema {
    std::vector<int> low;   // per node: min value in its instance component
    std::vector<int> high;  // per node: max value in its instance component
};

/**
 * Min/max of a per-node value over every instance component; values must lie
 * in [0, n).  Pipelined like component_id_multi with one ledger charge.
 */
inline std::vector<ComponentExtrema> component_extrema_multi(const Multigraph& g,
                                                             const std::vector<EdgeSubset>& instances,
                                                             const std::vector<int>& values,
                                                             const ExecPolicy& policy = {}) {
    const int n = g.node_count();
    if (static_cast<int>(values.size()) != n)
        throw InvalidParameter("one value per node required");
    for (int v : values)
        if (v < 0 || v >= std::max(1, n)) throw InvalidParameter("value out of label range");
    for (const auto& inst : instances)
        if (inst.universe_size() != g.edge_count())
            throw InvalidParameter("instance universe does not match graph");

    std::vector<ComponentExtrema> out;
    if (instances.empty()) return out;

    if (policy.backend == Backend::Simulate) {
        auto shared = std::make_shared<const std::vector<EdgeSubset>>(instances);
        auto shared_values = std::make_shared<const std::vector<int>>(values);
        auto cfg =
            detail::make_flood_config(g, shared, policy.budget_for(g), false, shared_values);
        auto programs = make_programs<detail::LabelFloodProgram>(n, cfg);
        auto sim = run_sync(g, programs, policy.budget_for(g), policy.round_cap, policy.seed);
        detail::absorb_stats(policy, sim);
        for (std::size_t j = 0; j < instances.size(); ++j) {
            ComponentExtrema ext;
            ext.low.assign(static_cast<std::size_t>(n), 0);
            ext.high.assign(static_cast<std::size_t>(n), 0);
            for (int v = 0; v < n; ++v) {
                auto& p = program_as<detail::LabelFloodProgram>(programs, v);
                ext.low[static_cast<std::size_t>(v)] = p.min_labels()[j];
                ext.high[static_cast<std::size_t>(v)] = p.max_labels()[j];
            }
            out.push_back(std::move(ext));
        }
    } else {
        for (const auto& inst : instances) {
            auto comp = components(g, inst);
            ComponentExtrema ext;
            ext.low.assign(static_cast<std::size_t>(n), 0);
            ext.high.assign(static_cast<std::size_t>(n), 0);
            std::vector<int> lo(static_cast<std::size_t>(n), n);
            std::vector<int> hi(static_cast<std::size_t>(n), -1);
            for (int v = 0; v < n; ++v) {
                const auto root = static_cast<std::size_t>(comp.label[static_cast<std::size_t>(v)]);
                lo[root] = std::min(lo[root], values[static_cast<std::size_t>(v)]);
                hi[root] = std::max(hi[root], values[static_cast<std::size_t>(v)]);
            }
            for (int v = 0; v < n; ++v) {
                const auto root = static_cast<std::size_t>(comp.label[static_cast<std::size_t>(v)]);
                ext.low[static_cast<std::size_t>(v)] = lo[root];
                ext.high[static_cast<std::size_t>(v)] = hi[root];
            }
            out.push_back(std::move(ext));
        }
    }

    if (policy.ledger != nullptr)
        policy.ledger->charge("thurimella_multi", detail::ledger_diameter_of(g, policy), n,
                              static_cast<std::int64_t>(instances.size()));
    return out;
}

/**
 * Whether each instance subgraph spans the (connected) graph.  Labeling
 * plus label comparison across every edge plus a flooded disconnect flag;
 * every node ends up holding the same verdicts.
 */
inline std::vector<char> connectivity_test_multi(const Multigraph& g,
                                                 const std::vector<EdgeSubset>& instances,
                                                 const ExecPolicy& policy = {}) {
    const int n = g.node_count();
    for (const auto& inst : instances)
        if (inst.universe_size() != g.edge_count())
            throw InvalidParameter("instance universe does not match graph");

    std::vector<char> out;
    if (instances.empty()) return out;

    if (policy.backend == Backend::Simulate) {
        auto shared = std::make_shared<const std::vector<EdgeSubset>>(instances);
        auto cfg = detail::make_flood_config(g, shared, policy.budget_for(g), true);
        auto programs = make_programs<detail::LabelFloodProgram>(n, cfg);
        auto sim = run_sync(g, programs, policy.budget_for(g), policy.round_cap, policy.seed);
        detail::absorb_stats(policy, sim);
        out.assign(instances.size(), 0);
        for (std::size_t j = 0; j < instances.size(); ++j) {
            bool connected = true;
            for (int v = 0; v < n; ++v) {
                auto& p = program_as<detail::LabelFloodProgram>(programs, v);
                if (p.disconnect_flags()[j]) connected = false;
            }
            out[j] = connected ? 1 : 0;
        }
    } else {
        for (const auto& inst : instances) out.push_back(components(g, inst).count == 1 ? 1 : 0);
    }

    if (policy.ledger != nullptr) {
        const std::int64_t d = detail::ledger_diameter_of(g, policy);
        policy.ledger->charge("thurimella_multi", d, n,
                              static_cast<std::int64_t>(instances.size()));
        policy.ledger->charge("connectivity_extra", d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Minimum spanning forest
// ---------------------------------------------------------------------------

namespace detail {

/** Kruskal under the total order (weight, edge id). */
inline EdgeSubset kruskal(const Multigraph& g, const std::vector<std::int64_t>& weights) {
    const int m = g.edge_count();
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return weights[static_cast<std::size_t>(a)] < weights[static_cast<std::size_t>(b)];
    });
    UnionFind uf(g.node_count());
    EdgeSubset chosen(m);
    for (int id : order)
        if (uf.unite(g.edge(id).u, g.edge(id).v)) chosen.set(id);
    return chosen;
}

/**
 * One fragment-merging phase per ceil(log2 n) phases: exchange fragment
 * ids, flood the fragment's best outgoing edge under (weight, edge id),
 * request the merge across it, then flood the merged fragment id.
 */
class BoruvkaProgram : public NodeProgram {
public:
    BoruvkaProgram(std::shared_ptr<const std::vector<std::int64_t>> weights, int edge_bits,
                   int weight_bits)
        : weights_(std::move(weights)), edge_bits_(edge_bits), weight_bits_(weight_bits) {}

    void init(NodeEnv env) override {
        env_ = std::move(env);
        id_bits_ = bit_width_for(static_cast<std::uint64_t>(std::max(1, env_.n - 1)));
        frag_ = env_.node;
        peer_frag_.assign(env_.links.size(), -1);
        chosen_.assign(env_.links.size(), 0);
        hop_rounds_ = std::max(1, env_.n - 1);
        phase_rounds_ = 2 * hop_rounds_ + 2;
        phases_ = 1;
        while ((1 << phases_) < env_.n) ++phases_;
        if (env_.n <= 1) phases_ = 0;
        total_rounds_ = phases_ * phase_rounds_;
    }

    void step(int round, const std::vector<InboundMessage>& inbox, Outbox& out) override {
        absorb(round - 1, inbox);
        if (round > total_rounds_) {
            done_ = true;
            return;
        }
        const int sub = (round - 1) % phase_rounds_;
        if (sub == 0) {
            // announce fragment id on every link
            BitString msg;
            msg.append(static_cast<std::uint64_t>(frag_), id_bits_);
            for (int i = 0; i < static_cast<int>(env_.links.size()); ++i) out.send(i, msg);
        } else if (sub <= hop_rounds_) {
            if (sub == 1) pick_candidate();
            send_candidate(out);
        } else if (sub == hop_rounds_ + 1) {
            // the winning edge's inside endpoints request the merge
            if (best_valid_) {
                for (std::size_t i = 0; i < env_.links.size(); ++i) {
                    if (env_.links[i].edge_id == best_edge_ && peer_frag_[i] != frag_) {
                        BitString msg;
                        msg.append(1, 1);
                        out.send(static_cast<int>(i), msg);
                        chosen_[i] = 1;
                    }
                }
            }
        } else {
            // flood the minimum fragment id over the merged fragment
            BitString msg;
            msg.append(static_cast<std::uint64_t>(frag_), id_bits_);
            for (std::size_t i = 0; i < env_.links.size(); ++i)
                if (chosen_[i]) out.send(static_cast<int>(i), msg);
        }
    }

    bool halted() const override { return done_; }

    const std::vector<char>& chosen_links() const { return chosen_; }
    const NodeEnv& env() const { return env_; }

private:
    void absorb(int sent, const std::vector<InboundMessage>& inbox) {
        if (sent < 1 || inbox.empty()) return;
        const int sub = (sent - 1) % phase_rounds_;
        if (sub == 0) {
            for (const auto& m : inbox) {
                std::size_t pos = 0;
                peer_frag_[static_cast<std::size_t>(m.link)] =
                    static_cast<int>(m.payload.read(pos, id_bits_));
            }
        } else if (sub <= hop_rounds_) {
            for (const auto& m : inbox) {
                std::size_t pos = 0;
                if (m.payload.read(pos, 1) == 0) continue;
                const std::int64_t w = static_cast<std::int64_t>(m.payload.read(pos, weight_bits_));
                const int e = static_cast<int>(m.payload.read(pos, edge_bits_));
                consider(w, e);
            }
        } else if (sub == hop_rounds_ + 1) {
            for (const auto& m : inbox) chosen_[static_cast<std::size_t>(m.link)] = 1;
        } else {
            for (const auto& m : inbox) {
                std::size_t pos = 0;
                frag_ = std::min(frag_, static_cast<int>(m.payload.read(pos, id_bits_)));
            }
        }
    }

    void pick_candidate() {
        best_valid_ = false;
        best_weight_ = 0;
        best_edge_ = 0;
        for (std::size_t i = 0; i < env_.links.size(); ++i) {
            if (peer_frag_[i] == frag_) continue;
            consider((*weights_)[static_cast<std::size_t>(env_.links[i].edge_id)],
                     env_.links[i].edge_id);
        }
    }

    void consider(std::int64_t w, int e) {
        if (!best_valid_ || w < best_weight_ || (w == best_weight_ && e < best_edge_)) {
            best_valid_ = true;
            best_weight_ = w;
            best_edge_ = e;
        }
    }

    void send_candidate(Outbox& out) {
        BitString msg;
        msg.append(best_valid_ ? 1 : 0, 1);
        if (best_valid_) {
            msg.append(static_cast<std::uint64_t>(best_weight_), weight_bits_);
            msg.append(static_cast<std::uint64_t>(best_edge_), edge_bits_);
        }
        for (std::size_t i = 0; i < env_.links.size(); ++i)
            if (chosen_[i]) out.send(static_cast<int>(i), msg);
    }

    NodeEnv env_;
    std::shared_ptr<const std::vector<std::int64_t>> weights_;
    int edge_bits_;
    int weight_bits_;
    int id_bits_ = 1;
    int frag_ = 0;
    std::vector<int> peer_frag_;
    std::vector<char> chosen_;
    int hop_rounds_ = 1;
    int phase_rounds_ = 4;
    int phases_ = 0;
    int total_rounds_ = 0;
    bool best_valid_ = false;
    std::int64_t best_weight_ = 0;
    int best_edge_ = 0;
    bool done_ = false;
};

}  // namespace detail

/**
 * Minimum-weight spanning forest under the supplied per-edge weights,
 * ties broken by edge id (the forest is unique and runs reproducible).
 */
inline EdgeSubset mst_weighted(const Multigraph& g, const std::vector<std::int64_t>& weights,
                               const ExecPolicy& policy = {}) {
    if (static_cast<int>(weights.size()) != g.edge_count())
        throw InvalidParameter("need one weight per edge");
    for (auto w : weights)
        if (w < 0) throw InvalidParameter("mst weights must be nonnegative");

    EdgeSubset chosen(g.edge_count());
    if (policy.backend == Backend::Simulate) {
        std::uint64_t max_w = 1;
        for (auto w : weights) max_w = std::max(max_w, static_cast<std::uint64_t>(w));
        const int wb = bit_width_for(max_w);
        const int eb = bit_width_for(static_cast<std::uint64_t>(std::max(1, g.edge_count() - 1)));
        auto shared = std::make_shared<const std::vector<std::int64_t>>(weights);
        auto programs =
            make_programs<detail::BoruvkaProgram>(g.node_count(), shared, eb, wb);
        auto sim = run_sync(g, programs, policy.budget_for(g), policy.round_cap, policy.seed);
        detail::absorb_stats(policy, sim);
        for (int v = 0; v < g.node_count(); ++v) {
            auto& p = program_as<detail::BoruvkaProgram>(programs, v);
            for (std::size_t i = 0; i < p.chosen_links().size(); ++i)
                if (p.chosen_links()[i]) chosen.set(p.env().links[i].edge_id);
        }
    } else {
        chosen = detail::kruskal(g, weights);
    }

    if (policy.ledger != nullptr)
        policy.ledger->charge("thurimella_multi", detail::ledger_diameter_of(g, policy),
                              g.node_count(), 1);
    return chosen;
}

/** Spanning forest under the graph's own edge weights. */
inline EdgeSubset mst(const Multigraph& g, const ExecPolicy& policy = {}) {
    std::vector<std::int64_t> weights;
    weights.reserve(static_cast<std::size_t>(g.edge_count()));
    for (const Edge& e : g.edges()) weights.push_back(e.w);
    return mst_weighted(g, weights, policy);
}

// ---------------------------------------------------------------------------
// Sparse certificates
// ---------------------------------------------------------------------------

struct Certificate {
    EdgeSubset edges;  // E*, disjoint from the contracted base
    int k = 0;
    EdgeSubset base;   // E_c
};

/**
 * Generalized sparse certificate for k-edge-connectivity of the quotient
 * graph G/E_c.  k spanning-forest iterations under weights 0 (E_c),
 * 1 (fresh), 2 (already chosen); each tree's non-E_c edges join E*.
 * Every quotient cut crossed by at most k edges ends up entirely in E*.
 * Cut multiplicity here counts edge ids, so weighted graphs should be
 * unit-expanded first.
 */
inline Certificate sparse_certificate(const Multigraph& g, const EdgeSubset& base, int k,
                                      const ExecPolicy& policy = {}) {
    if (k < 1) throw InvalidParameter("certificate parameter k must be >= 1");
    if (base.universe_size() != g.edge_count())
        throw InvalidParameter("contracted set universe does not match graph");

    ExecPolicy inner = policy;
    inner.ledger = nullptr;  // charged once for the pipelined batch below

    Certificate cert;
    cert.k = k;
    cert.base = base;
    cert.edges = EdgeSubset(g.edge_count());

    std::vector<std::int64_t> weights(static_cast<std::size_t>(g.edge_count()), 1);
    for (int id = 0; id < g.edge_count(); ++id)
        if (base.test(id)) weights[static_cast<std::size_t>(id)] = 0;

    for (int iter = 0; iter < k; ++iter) {
        EdgeSubset tree = mst_weighted(g, weights, inner);
        for (int id = 0; id < g.edge_count(); ++id) {
            if (!tree.test(id) || base.test(id)) continue;
            cert.edges.set(id);
            weights[static_cast<std::size_t>(id)] = 2;
        }
    }

    if (policy.ledger != nullptr)
        policy.ledger->charge("thurimella_multi", detail::ledger_diameter_of(g, policy),
                              g.node_count(), k);
    return cert;
}

}  // namespace congestcut
