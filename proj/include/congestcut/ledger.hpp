#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "congestcut/errors.hpp"

namespace congestcut {

/** Iterated logarithm: number of times log2 is applied until the value is <= 1. */
inline int log_star(double x) {
    int c = 0;
    while (x > 1.0) {
        x = std::log2(x);
        ++c;
    }
    return c;
}

inline std::int64_t ceil_sqrt(std::int64_t n) {
    if (n < 0) throw InvalidParameter("ceil_sqrt of negative value");
    std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r < n) ++r;
    while (r > 0 && (r - 1) * (r - 1) >= n) --r;
    return r;
}

/**
 * Closed-form analytical round charge for a primitive, with unit constants.
 * These mirror stated complexities and are recorded alongside, never mixed
 * with, measured simulation rounds.
 */
inline std::int64_t ledger_charge(const std::string& primitive, std::int64_t diameter,
                                  std::int64_t n = 0, std::int64_t k = 1) {
    if (diameter < 0 || n < 0 || k < 0) throw InvalidParameter("ledger parameters must be >= 0");
    if (primitive == "thurimella_multi")
        return diameter + k * ceil_sqrt(n) * log_star(static_cast<double>(n));
    if (primitive == "connectivity_extra") return diameter;
    if (primitive == "bfs") return diameter + 1;
    if (primitive == "broadcast" || primitive == "convergecast") return diameter;
    throw UnknownPrimitive(primitive);
}

struct LedgerEntry {
    std::string primitive;
    std::int64_t diameter = 0;
    std::int64_t n = 0;
    std::int64_t k = 1;
    std::int64_t rounds = 0;
};

/** Ordered record of analytical round charges. */
class CostLedger {
public:
    std::int64_t charge(const std::string& primitive, std::int64_t diameter, std::int64_t n = 0,
                        std::int64_t k = 1) {
        std::int64_t rounds = ledger_charge(primitive, diameter, n, k);
        entries_.push_back({primitive, diameter, n, k, rounds});
        return rounds;
    }

    void merge(const CostLedger& other) {
        entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
    }

    const std::vector<LedgerEntry>& entries() const { return entries_; }

    std::int64_t total() const {
        std::int64_t t = 0;
        for (const LedgerEntry& e : entries_) t += e.rounds;
        return t;
    }

    /** Sum of the k parameters of every thurimella_multi entry. */
    std::int64_t pipelined_instances() const {
        std::int64_t t = 0;
        for (const LedgerEntry& e : entries_)
            if (e.primitive == "thurimella_multi") t += e.k;
        return t;
    }

    void clear() { entries_.clear(); }

private:
    std::vector<LedgerEntry> entries_;
};

}  // namespace congestcut
