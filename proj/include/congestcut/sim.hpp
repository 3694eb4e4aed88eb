#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "congestcut/bits.hpp"
#include "congestcut/errors.hpp"
#include "congestcut/graph.hpp"
#include "congestcut/rng.hpp"

namespace congestcut {

/**
 * Per-edge, per-direction, per-round bit allowance.  PerEdge grants a flat
 * number of bits; PerWeight scales it by the edge weight (a weight-w edge
 * stands for w parallel unit edges, each carrying its own message).
 */
struct BitBudget {
    enum class Mode { PerEdge, PerWeight };

    Mode mode = Mode::PerEdge;
    std::int64_t bits = 64;

    static BitBudget per_edge(std::int64_t b) {
        if (b < 1) throw InvalidParameter("budget must be at least one bit");
        return {Mode::PerEdge, b};
    }

    static BitBudget per_weight(std::int64_t b) {
        if (b < 1) throw InvalidParameter("budget must be at least one bit");
        return {Mode::PerWeight, b};
    }

    /** Default used by algorithm runs: 8 * ceil(log2 n) bits, flat per edge. */
    static BitBudget defaults_for(int n) {
        if (n < 1) throw InvalidParameter("budget needs a positive node count");
        const int logn = n <= 2 ? 1 : std::bit_width(static_cast<unsigned>(n - 1));
        return per_edge(8ll * logn);
    }

    std::int64_t limit_for(std::int64_t edge_weight) const {
        return mode == Mode::PerEdge ? bits : bits * edge_weight;
    }
};

/** One incident edge as seen from a node. */
struct NeighborLink {
    int edge_id;
    int peer;
    std::int64_t weight;
};

/** Everything a node knows at startup: its id, n, incident links, RNG stream. */
struct NodeEnv {
    int node = 0;
    int n = 0;
    std::vector<NeighborLink> links;
    std::mt19937_64 rng;
};

struct InboundMessage {
    int link;  // index into the receiver's links
    BitString payload;
};

/** Collects at most one outgoing message per link per round. */
class Outbox {
public:
    explicit Outbox(int link_count) : slots_(static_cast<std::size_t>(link_count)) {}

    void send(int link, BitString payload) {
        if (link < 0 || link >= static_cast<int>(slots_.size()))
            throw InvalidParameter("send on unknown link");
        if (slots_[static_cast<std::size_t>(link)].has_value())
            throw InvalidParameter("duplicate send on one link in one round");
        slots_[static_cast<std::size_t>(link)] = std::move(payload);
    }

    const std::optional<BitString>& slot(int link) const {
        return slots_[static_cast<std::size_t>(link)];
    }

private:
    std::vector<std::optional<BitString>> slots_;
};

/**
 * A synchronous per-node state machine.  init runs once before round 1;
 * step runs every round while halted() is false, receiving the messages
 * sent to this node in the previous round.  A message sent in round r is
 * delivered at round r+1.
 */
class NodeProgram {
public:
    virtual ~NodeProgram() = default;
    virtual void init(NodeEnv env) = 0;
    virtual void step(int round, const std::vector<InboundMessage>& inbox, Outbox& out) = 0;
    virtual bool halted() const = 0;
    /** Canonical scalar output; richer results stay on the concrete program. */
    virtual std::int64_t output() const { return 0; }
};

struct SimResult {
    std::vector<std::int64_t> outputs;
    int rounds_used = 0;
    std::int64_t max_bits_per_edge_round = 0;
    std::int64_t total_bits_sent = 0;
    std::int64_t messages_sent = 0;
};

/**
 * Runs one program instance per node, lock-step, until every node has
 * halted.  Budget violations and the round cap raise; on success the
 * result records measured rounds and bit usage.  Fully deterministic in
 * (g, programs, budget, round_cap, seed).
 */
inline SimResult run_sync(const Multigraph& g,
                          std::vector<std::unique_ptr<NodeProgram>>& programs,
                          const BitBudget& budget, int round_cap, std::uint64_t seed) {
    const int n = g.node_count();
    if (static_cast<int>(programs.size()) != n)
        throw InvalidParameter("need exactly one program per node");
    if (round_cap < 1) throw InvalidParameter("round cap must be >= 1");

    const char* trace_env = std::getenv("CONGESTCUT_TRACE");
    const bool trace = trace_env != nullptr && std::string(trace_env) == "1";

    std::vector<std::vector<NeighborLink>> links(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        for (int id : g.incident(v)) links[static_cast<std::size_t>(v)].push_back(
            {id, g.other_end(id, v), g.edge(id).w});
    // link index of each edge at each endpoint, for routing deliveries
    std::vector<std::pair<int, int>> link_at(static_cast<std::size_t>(g.edge_count()), {-1, -1});
    for (int v = 0; v < n; ++v) {
        const auto& ls = links[static_cast<std::size_t>(v)];
        for (int i = 0; i < static_cast<int>(ls.size()); ++i) {
            const Edge& e = g.edge(ls[static_cast<std::size_t>(i)].edge_id);
            auto& at = link_at[static_cast<std::size_t>(ls[static_cast<std::size_t>(i)].edge_id)];
            (v == e.u ? at.first : at.second) = i;
        }
    }

    for (int v = 0; v < n; ++v) {
        NodeEnv env;
        env.node = v;
        env.n = n;
        env.links = links[static_cast<std::size_t>(v)];
        env.rng = make_rng(seed, 0x5eed, static_cast<std::uint64_t>(v));
        programs[static_cast<std::size_t>(v)]->init(std::move(env));
    }

    SimResult result;
    result.outputs.assign(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<InboundMessage>> inbox(static_cast<std::size_t>(n));
    std::vector<std::vector<InboundMessage>> next_inbox(static_cast<std::size_t>(n));

    int round = 0;
    while (true) {
        bool all_halted = true;
        for (int v = 0; v < n; ++v)
            if (!programs[static_cast<std::size_t>(v)]->halted()) all_halted = false;
        if (all_halted) break;
        if (round >= round_cap) throw RoundCapExceeded(round_cap);
        ++round;

        for (int v = 0; v < n; ++v) {
            auto& prog = *programs[static_cast<std::size_t>(v)];
            if (prog.halted()) continue;
            Outbox out(static_cast<int>(links[static_cast<std::size_t>(v)].size()));
            prog.step(round, inbox[static_cast<std::size_t>(v)], out);
            const auto& ls = links[static_cast<std::size_t>(v)];
            for (int i = 0; i < static_cast<int>(ls.size()); ++i) {
                const auto& slot = out.slot(i);
                if (!slot.has_value()) continue;
                const NeighborLink& link = ls[static_cast<std::size_t>(i)];
                const std::int64_t bits = slot->size_bits();
                const std::int64_t limit = budget.limit_for(link.weight);
                if (bits > limit) throw BudgetViolation(link.edge_id, round, bits, limit);
                if (trace)
                    std::cerr << "{\"round\":" << round << ",\"edge\":" << link.edge_id
                              << ",\"bits\":" << bits << "}\n";
                result.max_bits_per_edge_round = std::max(result.max_bits_per_edge_round, bits);
                result.total_bits_sent += bits;
                ++result.messages_sent;
                const auto& at = link_at[static_cast<std::size_t>(link.edge_id)];
                const int peer_link = (g.edge(link.edge_id).u == v) ? at.second : at.first;
                next_inbox[static_cast<std::size_t>(link.peer)].push_back({peer_link, *slot});
            }
        }

        for (int v = 0; v < n; ++v) {
            inbox[static_cast<std::size_t>(v)] = std::move(next_inbox[static_cast<std::size_t>(v)]);
            next_inbox[static_cast<std::size_t>(v)].clear();
        }
    }

    result.rounds_used = round;
    for (int v = 0; v < n; ++v)
        result.outputs[static_cast<std::size_t>(v)] = programs[static_cast<std::size_t>(v)]->output();
    return result;
}

/** Builds one default-constructed program of type P per node. */
template <typename P, typename... Args>
std::vector<std::unique_ptr<NodeProgram>> make_programs(int n, Args&&... args) {
    std::vector<std::unique_ptr<NodeProgram>> programs;
    programs.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) programs.push_back(std::make_unique<P>(args...));
    return programs;
}

template <typename P>
P& program_as(std::vector<std::unique_ptr<NodeProgram>>& programs, int v) {
    return *static_cast<P*>(programs[static_cast<std::size_t>(v)].get());
}

}  // namespace congestcut
