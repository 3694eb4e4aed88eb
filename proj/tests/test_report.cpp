#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "congestcut/families.hpp"
#include "congestcut/ledger.hpp"
#include "congestcut/report.hpp"

using namespace congestcut;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("cut json uses canonical members") {
    Cut cut;
    cut.members = {3, 1};
    cut.weight = 7;
    const json j = cut_to_json(cut, 4);
    CHECK(j["weight"] == 7);
    CHECK(j["members"] == json({0, 2}));
}

TEST_CASE("ledger json mirrors entries and totals") {
    CostLedger ledger;
    ledger.charge("thurimella_multi", 3, 10, 2);
    ledger.charge("bfs", 3, 10, 1);
    const json j = ledger_to_json(ledger);
    REQUIRE(j["entries"].size() == 2);
    CHECK(j["entries"][0]["primitive"] == "thurimella_multi");
    CHECK(j["entries"][0]["diameter"] == 3);
    CHECK(j["entries"][0]["n"] == 10);
    CHECK(j["entries"][0]["k"] == 2);
    CHECK(j["entries"][0]["rounds"] == ledger.entries()[0].rounds);
    CHECK(j["entries"][1]["primitive"] == "bfs");
    CHECK(j["total"] == ledger.total());
    CHECK(j["pipelined_instances"] == ledger.pipelined_instances());
}

TEST_CASE("run record csv row matches the frozen header order") {
    CHECK(std::string(kRunRecordCsvHeader) ==
          "trial,seed,cut_weight,oracle_weight,ratio,measured_rounds,ledger_rounds");
    RunRecord r;
    r.trial = 2;
    r.seed = 9;
    r.cut_weight = 4;
    r.oracle_weight = 2;
    r.ratio = 2.0;
    r.measured_rounds = 100;
    r.ledger_rounds = 50;
    CHECK(to_csv_row(r) == "2,9,4,2,2,100,50");
    const json j = to_json(r);
    CHECK(j["trial"] == 2);
    CHECK(j["seed"] == 9);
    CHECK(j["ratio"] == 2.0);
}

TEST_CASE("experiment report sorts, aggregates, and serializes") {
    ExperimentReport rep;
    rep.command = "layering";
    rep.params = {{"epsilon", 0.5}};

    RunRecord a;
    a.trial = 1;
    a.seed = 2;
    a.cut_weight = 6;
    a.ratio = 3.0;
    RunRecord b;
    b.trial = 0;
    b.seed = 2;
    b.cut_weight = 2;
    b.ratio = 1.0;
    RunRecord c;
    c.trial = 5;
    c.seed = 1;
    c.cut_weight = 4;
    c.ratio = 2.0;
    rep.records = {a, b, c};
    rep.sort_records();
    CHECK(rep.records[0].seed == 1);
    CHECK(rep.records[1].trial == 0);
    CHECK(rep.records[2].trial == 1);

    const json agg = rep.aggregate();
    CHECK(agg["runs"] == 3);
    CHECK(agg["mean_ratio"] == Catch::Approx(2.0));
    CHECK(agg["median_ratio"] == 2.0);
    CHECK(agg["max_ratio"] == 3.0);
    CHECK(agg["max_cut_weight"] == 6);

    const json j = rep.to_json();
    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["command"] == "layering");
    CHECK(j["params"]["epsilon"] == 0.5);
    REQUIRE(j["records"].size() == 3);
    CHECK(j["records"][0]["seed"] == 1);
    CHECK(j["aggregate"]["runs"] == 3);

    const std::string csv = rep.to_csv();
    CHECK(csv.substr(0, std::string(kRunRecordCsvHeader).size()) == kRunRecordCsvHeader);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("empty report aggregates to a bare run count") {
    ExperimentReport rep;
    const json agg = rep.aggregate();
    CHECK(agg["runs"] == 0);
    CHECK_FALSE(agg.contains("mean_ratio"));
}

TEST_CASE("sidecar json records the oracle or an explicit null") {
    const std::vector<int> members{0, 2};
    const json with = sidecar_json("cycle", {{"n", 4}}, 2, &members);
    CHECK(with["schema_version"] == kReportSchemaVersion);
    CHECK(with["family"] == "cycle");
    CHECK(with["params"]["n"] == 4);
    CHECK(with["expected_lambda"] == 2);
    CHECK(with["expected_min_cut_members"] == json({0, 2}));

    const json without = sidecar_json("random", json::object(), 3, nullptr);
    CHECK(without["expected_min_cut_members"].is_null());
}

TEST_CASE("text files gain exactly one trailing newline") {
    const std::string path = "report_text_probe.txt";
    write_text_file(path, "alpha\nbeta");
    CHECK(slurp(path) == "alpha\nbeta\n");
    write_text_file(path, "gamma\n");
    CHECK(slurp(path) == "gamma\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_text_file("no_such_dir/x.txt", "y"), InvalidParameter);
}

TEST_CASE("graph files round trip through the text format") {
    const auto g = dumbbell_graph(3, 2);
    const std::string path = "report_graph_probe.graph";
    write_graph_file(path, g);

    std::ifstream in(path);
    REQUIRE(in.good());
    const auto back = read_graph(in);
    std::remove(path.c_str());

    REQUIRE(back.node_count() == g.node_count());
    REQUIRE(back.edge_count() == g.edge_count());
    CHECK(back.total_weight() == g.total_weight());
    CHECK(graph_to_string(back) == graph_to_string(g));
}
