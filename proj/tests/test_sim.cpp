#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>

#include "congestcut/families.hpp"
#include "congestcut/ledger.hpp"
#include "congestcut/sim.hpp"

using namespace congestcut;

namespace {

/** Round 1: send own id everywhere. Round 2: record received ids, halt. */
class SendIdOnce : public NodeProgram {
public:
    void init(NodeEnv env) override { env_ = std::move(env); }

    void step(int round, const std::vector<InboundMessage>& inbox, Outbox& out) override {
        if (round == 1) {
            for (int i = 0; i < static_cast<int>(env_.links.size()); ++i) {
                BitString msg;
                msg.append(static_cast<std::uint64_t>(env_.node), 16);
                out.send(i, msg);
            }
        } else {
            for (const auto& m : inbox) {
                std::size_t pos = 0;
                received_.push_back(static_cast<int>(m.payload.read(pos, 16)));
            }
            done_ = true;
        }
    }

    bool halted() const override { return done_; }
    const std::vector<int>& received() const { return received_; }

private:
    NodeEnv env_;
    bool done_ = false;
    std::vector<int> received_;
};

/** Sends a fixed number of bits on link 0 in round 1, then halts. */
class SendBits : public NodeProgram {
public:
    explicit SendBits(std::int64_t bits) : bits_(bits) {}

    void init(NodeEnv env) override { env_ = std::move(env); }

    void step(int, const std::vector<InboundMessage>&, Outbox& out) override {
        if (env_.node == 0 && !env_.links.empty()) {
            BitString msg;
            for (std::int64_t i = 0; i < bits_; ++i) msg.append(1, 1);
            out.send(0, msg);
        }
        done_ = true;
    }

    bool halted() const override { return done_; }

private:
    NodeEnv env_;
    std::int64_t bits_;
    bool done_ = false;
};

class NeverHalts : public NodeProgram {
public:
    void init(NodeEnv env) override { env_ = std::move(env); }
    void step(int, const std::vector<InboundMessage>&, Outbox&) override {}
    bool halted() const override { return false; }

private:
    NodeEnv env_;
};

/** Floods the max of (value, received) for a fixed number of rounds. */
class FloodMax : public NodeProgram {
public:
    FloodMax(std::int64_t special_node, std::int64_t special_value, int rounds)
        : special_node_(special_node), special_value_(special_value), rounds_(rounds) {}

    void init(NodeEnv env) override {
        env_ = std::move(env);
        value_ = env_.node == special_node_ ? special_value_ : env_.node;
    }

    void step(int round, const std::vector<InboundMessage>& inbox, Outbox& out) override {
        for (const auto& m : inbox) {
            std::size_t pos = 0;
            value_ = std::max(value_, static_cast<std::int64_t>(m.payload.read(pos, 32)));
        }
        if (round > rounds_) {
            done_ = true;
            return;
        }
        for (int i = 0; i < static_cast<int>(env_.links.size()); ++i) {
            BitString msg;
            msg.append(static_cast<std::uint64_t>(value_), 32);
            out.send(i, msg);
        }
    }

    bool halted() const override { return done_; }
    std::int64_t output() const override { return value_; }

private:
    NodeEnv env_;
    std::int64_t special_node_;
    std::int64_t special_value_;
    int rounds_;
    std::int64_t value_ = 0;
    bool done_ = false;
};

/** Each node draws one word from its seeded stream as output. */
class DrawRandom : public NodeProgram {
public:
    void init(NodeEnv env) override {
        env_ = std::move(env);
        value_ = static_cast<std::int64_t>(env_.rng() >> 1);
    }
    void step(int, const std::vector<InboundMessage>&, Outbox&) override { done_ = true; }
    bool halted() const override { return done_; }
    std::int64_t output() const override { return value_; }

private:
    NodeEnv env_;
    std::int64_t value_ = 0;
    bool done_ = false;
};

class DoubleSend : public NodeProgram {
public:
    void init(NodeEnv env) override { env_ = std::move(env); }
    void step(int, const std::vector<InboundMessage>&, Outbox& out) override {
        if (env_.node == 0) {
            BitString msg;
            msg.append(1, 1);
            out.send(0, msg);
            out.send(0, msg);
        }
        done_ = true;
    }
    bool halted() const override { return done_; }

private:
    NodeEnv env_;
    bool done_ = false;
};

}  // namespace

TEST_CASE("bit strings") {
    BitString b;
    CHECK(b.empty());
    b.append(5, 3);
    b.append(1, 1);
    b.append(0xffffffffffffffffull, 64);
    CHECK(b.size_bits() == 68);
    std::size_t pos = 0;
    CHECK(b.read(pos, 3) == 5);
    CHECK(b.read(pos, 1) == 1);
    CHECK(b.read(pos, 64) == 0xffffffffffffffffull);
    CHECK(pos == 68);
    CHECK_THROWS_AS(b.read(pos, 1), InvalidParameter);
    CHECK_THROWS_AS(b.append(4, 2), InvalidParameter);
    CHECK_THROWS_AS(b.append(0, 65), InvalidParameter);
    BitString c;
    c.append(5, 3);
    BitString d;
    d.append(5, 3);
    CHECK(c == d);
    d.append(0, 1);
    CHECK_FALSE(c == d);
    CHECK(bit_width_for(0) == 1);
    CHECK(bit_width_for(1) == 1);
    CHECK(bit_width_for(2) == 2);
    CHECK(bit_width_for(255) == 8);
    CHECK(bit_width_for(256) == 9);
}

TEST_CASE("bit budget modes") {
    CHECK(BitBudget::per_edge(16).limit_for(100) == 16);
    CHECK(BitBudget::per_weight(4).limit_for(8) == 32);
    CHECK(BitBudget::defaults_for(16).bits == 32);
    CHECK(BitBudget::defaults_for(17).bits == 40);
    CHECK(BitBudget::defaults_for(2).bits == 8);
    CHECK(BitBudget::defaults_for(3).bits == 16);
    CHECK_THROWS_AS(BitBudget::per_edge(0), InvalidParameter);
}

TEST_CASE("send my id once on a 4-cycle") {
    auto g = cycle_graph(4);
    auto programs = make_programs<SendIdOnce>(4);
    auto result = run_sync(g, programs, BitBudget::per_edge(64), 100, 1);
    CHECK(result.rounds_used == 2);
    CHECK(result.messages_sent == 8);
    CHECK(result.max_bits_per_edge_round == 16);
    for (int v = 0; v < 4; ++v) {
        auto got = program_as<SendIdOnce>(programs, v).received();
        std::sort(got.begin(), got.end());
        std::vector<int> want = {(v + 3) % 4, (v + 1) % 4};
        std::sort(want.begin(), want.end());
        CHECK(got == want);
    }
}

TEST_CASE("per edge budget violation") {
    auto g = path_graph(2);
    auto programs = make_programs<SendBits>(2, 128);
    CHECK_THROWS_MATCHES(run_sync(g, programs, BitBudget::per_edge(64), 10, 1),
                         BudgetViolation, Catch::Matchers::Predicate<BudgetViolation>(
                                              [](const BudgetViolation& e) {
                                                  return e.edge == 0 && e.round == 1 &&
                                                         e.bits == 128 && e.limit == 64;
                                              }));
}

TEST_CASE("per weight budget threshold") {
    Multigraph g(2, {{0, 1, 8}});
    {
        auto programs = make_programs<SendBits>(2, 32);
        auto result = run_sync(g, programs, BitBudget::per_weight(4), 10, 1);
        CHECK(result.max_bits_per_edge_round == 32);
    }
    {
        auto programs = make_programs<SendBits>(2, 33);
        CHECK_THROWS_AS(run_sync(g, programs, BitBudget::per_weight(4), 10, 1), BudgetViolation);
    }
}

TEST_CASE("round cap") {
    auto g = path_graph(3);
    auto programs = make_programs<NeverHalts>(3);
    CHECK_THROWS_AS(run_sync(g, programs, BitBudget::per_edge(8), 25, 1), RoundCapExceeded);
}

TEST_CASE("duplicate send on a link is rejected") {
    auto g = path_graph(2);
    auto programs = make_programs<DoubleSend>(2);
    CHECK_THROWS_AS(run_sync(g, programs, BitBudget::per_edge(8), 10, 1), InvalidParameter);
}

TEST_CASE("information travels one hop per round") {
    auto g = path_graph(6);
    for (int rounds : {3, 4, 5, 6}) {
        auto base = make_programs<FloodMax>(6, 5, 50, rounds);
        auto perturbed = make_programs<FloodMax>(6, 5, 1000, rounds);
        run_sync(g, base, BitBudget::per_edge(64), 100, 7);
        run_sync(g, perturbed, BitBudget::per_edge(64), 100, 7);
        auto base_out = program_as<FloodMax>(base, 0).output();
        auto pert_out = program_as<FloodMax>(perturbed, 0).output();
        INFO("rounds " << rounds);
        if (rounds < 5)
            CHECK(base_out == pert_out);  // node 5 is 5 hops from node 0
        else
            CHECK(base_out != pert_out);
    }
}

TEST_CASE("identical seeds give identical runs") {
    auto g = cycle_graph(5);
    auto p1 = make_programs<DrawRandom>(5);
    auto p2 = make_programs<DrawRandom>(5);
    auto r1 = run_sync(g, p1, BitBudget::per_edge(8), 10, 42);
    auto r2 = run_sync(g, p2, BitBudget::per_edge(8), 10, 42);
    CHECK(r1.outputs == r2.outputs);
    CHECK(r1.rounds_used == r2.rounds_used);
    auto p3 = make_programs<DrawRandom>(5);
    auto r3 = run_sync(g, p3, BitBudget::per_edge(8), 10, 43);
    CHECK(r1.outputs != r3.outputs);
}

TEST_CASE("trace emits one json line per message") {
    setenv("CONGESTCUT_TRACE", "1", 1);
    std::ostringstream captured;
    auto* old = std::cerr.rdbuf(captured.rdbuf());
    auto g = path_graph(2);
    auto programs = make_programs<SendBits>(2, 8);
    run_sync(g, programs, BitBudget::per_edge(16), 10, 1);
    std::cerr.rdbuf(old);
    unsetenv("CONGESTCUT_TRACE");
    CHECK(captured.str() == "{\"round\":1,\"edge\":0,\"bits\":8}\n");
}

TEST_CASE("ledger charges") {
    CHECK(log_star(1.0) == 0);
    CHECK(log_star(2.0) == 1);
    CHECK(log_star(4.0) == 2);
    CHECK(log_star(16.0) == 3);
    CHECK(log_star(65536.0) == 4);
    CHECK(ceil_sqrt(16) == 4);
    CHECK(ceil_sqrt(17) == 5);
    CHECK(ceil_sqrt(1) == 1);
    CHECK(ceil_sqrt(0) == 0);

    CHECK(ledger_charge("thurimella_multi", 3, 16, 2) == 27);
    CHECK(ledger_charge("thurimella_multi", 3, 16, 1) == 15);
    CHECK(ledger_charge("bfs", 5) == 6);
    CHECK(ledger_charge("connectivity_extra", 7) == 7);
    CHECK(ledger_charge("broadcast", 4) == 4);
    CHECK(ledger_charge("convergecast", 4) == 4);
    CHECK_THROWS_AS(ledger_charge("warp_drive", 1), UnknownPrimitive);

    CostLedger ledger;
    ledger.charge("thurimella_multi", 3, 16, 2);
    ledger.charge("bfs", 5);
    CHECK(ledger.total() == 33);
    CHECK(ledger.pipelined_instances() == 2);
    CostLedger other;
    other.charge("broadcast", 4);
    ledger.merge(other);
    CHECK(ledger.total() == 37);
    CHECK(ledger.entries().size() == 3);
    ledger.clear();
    CHECK(ledger.total() == 0);
}
