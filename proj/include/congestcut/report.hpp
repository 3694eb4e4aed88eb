#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "congestcut/graph.hpp"
#include "congestcut/ledger.hpp"
#include "json.hpp"

namespace congestcut {

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::json cut_to_json(const Cut& cut, int n) {
    return {{"members", cut.canonical_members(n)}, {"weight", cut.weight}};
}

inline nlohmann::json ledger_to_json(const CostLedger& ledger) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : ledger.entries())
        entries.push_back({{"primitive", e.primitive},
                           {"diameter", e.diameter},
                           {"n", e.n},
                           {"k", e.k},
                           {"rounds", e.rounds}});
    return {{"entries", std::move(entries)},
            {"total", ledger.total()},
            {"pipelined_instances", ledger.pipelined_instances()}};
}

/** One seeded run inside an experiment; ratio is 0 when no oracle is attached. */
struct RunRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    std::int64_t cut_weight = 0;
    std::int64_t oracle_weight = 0;
    double ratio = 0.0;
    std::int64_t measured_rounds = 0;
    std::int64_t ledger_rounds = 0;
};

inline nlohmann::json to_json(const RunRecord& r) {
    return {{"trial", r.trial},
            {"seed", r.seed},
            {"cut_weight", r.cut_weight},
            {"oracle_weight", r.oracle_weight},
            {"ratio", r.ratio},
            {"measured_rounds", r.measured_rounds},
            {"ledger_rounds", r.ledger_rounds}};
}

inline constexpr const char* kRunRecordCsvHeader =
    "trial,seed,cut_weight,oracle_weight,ratio,measured_rounds,ledger_rounds";

inline std::string to_csv_row(const RunRecord& r) {
    std::ostringstream out;
    out << r.trial << ',' << r.seed << ',' << r.cut_weight << ',' << r.oracle_weight << ','
        << r.ratio << ',' << r.measured_rounds << ',' << r.ledger_rounds;
    return out.str();
}

/**
 * Versioned multi-run report. Records stay in (seed, trial) order regardless
 * of how runs were executed; the CSV's column order is frozen by
 * kRunRecordCsvHeader and the JSON form is the source of truth.
 */
struct ExperimentReport {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    std::vector<RunRecord> records;

    void sort_records() {
        std::stable_sort(records.begin(), records.end(),
                         [](const RunRecord& a, const RunRecord& b) {
                             return std::pair(a.seed, a.trial) < std::pair(b.seed, b.trial);
                         });
    }

    nlohmann::json aggregate() const {
        nlohmann::json agg{{"runs", records.size()}};
        if (records.empty()) return agg;
        std::vector<double> ratios;
        std::int64_t worst = records[0].cut_weight;
        double sum = 0.0;
        for (const auto& r : records) {
            ratios.push_back(r.ratio);
            sum += r.ratio;
            worst = std::max(worst, r.cut_weight);
        }
        std::sort(ratios.begin(), ratios.end());
        agg["mean_ratio"] = sum / static_cast<double>(ratios.size());
        agg["median_ratio"] = ratios[ratios.size() / 2];
        agg["max_ratio"] = ratios.back();
        agg["max_cut_weight"] = worst;
        return agg;
    }

    nlohmann::json to_json() const {
        nlohmann::json records_json = nlohmann::json::array();
        for (const auto& r : records) records_json.push_back(congestcut::to_json(r));
        return {{"schema_version", kReportSchemaVersion},
                {"command", command},
                {"params", params},
                {"records", std::move(records_json)},
                {"aggregate", aggregate()}};
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << kRunRecordCsvHeader << '\n';
        for (const auto& r : records) out << to_csv_row(r) << '\n';
        return out.str();
    }
};

/** Companion metadata emitted next to generated graph files. */
inline nlohmann::json sidecar_json(const std::string& family, nlohmann::json params,
                                   std::int64_t expected_lambda,
                                   const std::vector<int>* expected_members) {
    nlohmann::json side{{"schema_version", kReportSchemaVersion},
                        {"family", family},
                        {"params", std::move(params)},
                        {"expected_lambda", expected_lambda}};
    if (expected_members != nullptr)
        side["expected_min_cut_members"] = *expected_members;
    else
        side["expected_min_cut_members"] = nullptr;
    return side;
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot open output file: " + path);
    out << body;
    if (body.empty() || body.back() != '\n') out << '\n';
}

inline void write_graph_file(const std::string& path, const Multigraph& g) {
    std::ostringstream out;
    out << g.node_count() << ' ' << g.edge_count() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
    write_text_file(path, out.str());
}

}  // namespace congestcut
