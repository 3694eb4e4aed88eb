#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace congestcut {

/** Raised when a single message exceeds the per-edge bit budget. */
class BudgetViolation : public std::runtime_error {
public:
    BudgetViolation(int edge_id, int round_no, std::int64_t sent_bits, std::int64_t limit_bits)
        : std::runtime_error("budget violation on edge " + std::to_string(edge_id) +
                             " in round " + std::to_string(round_no) + ": " +
                             std::to_string(sent_bits) + " bits, limit " +
                             std::to_string(limit_bits)),
          edge(edge_id),
          round(round_no),
          bits(sent_bits),
          limit(limit_bits) {}

    int edge;
    int round;
    std::int64_t bits;
    std::int64_t limit;
};

class RoundCapExceeded : public std::runtime_error {
public:
    explicit RoundCapExceeded(int cap)
        : std::runtime_error("round cap " + std::to_string(cap) +
                             " reached before all nodes halted"),
          cap(cap) {}
    int cap;
};

class NoCutFound : public std::runtime_error {
public:
    NoCutFound() : std::runtime_error("no cut passed the test at any guess") {}
    explicit NoCutFound(const std::string& what) : std::runtime_error(what) {}
};

class InvalidCut : public std::invalid_argument {
public:
    explicit InvalidCut(const std::string& what) : std::invalid_argument(what) {}
};

class InvalidProbability : public std::invalid_argument {
public:
    explicit InvalidProbability(double p)
        : std::invalid_argument("probability out of range: " + std::to_string(p)) {}
};

class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

/** Disjointness promise |X ∩ Y| <= 1 violated. */
class InvalidPromise : public std::invalid_argument {
public:
    explicit InvalidPromise(const std::string& what) : std::invalid_argument(what) {}
};

class SizeLimit : public std::invalid_argument {
public:
    explicit SizeLimit(const std::string& what) : std::invalid_argument(what) {}
};

class UnknownPrimitive : public std::invalid_argument {
public:
    explicit UnknownPrimitive(const std::string& name)
        : std::invalid_argument("unknown ledger primitive: " + name) {}
};

}  // namespace congestcut
