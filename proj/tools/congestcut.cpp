#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "congestcut/report.hpp"
#include "congestcut/suite.hpp"

using namespace congestcut;
using nlohmann::json;

namespace {

Multigraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open graph file: " + path);
    return read_graph(in);
}

struct PolicyFlags {
    std::string backend = "central";
    std::int64_t budget_bits = 0;
    std::string budget_mode = "per-edge";

    void attach(CLI::App* cmd) {
        cmd->add_option("--backend", backend, "execution backend")
            ->check(CLI::IsMember({"central", "simulate"}));
        cmd->add_option("--budget-bits", budget_bits, "per-round bit budget (simulate)");
        cmd->add_option("--budget-mode", budget_mode, "budget scaling")
            ->check(CLI::IsMember({"per-edge", "per-weight"}));
    }

    ExecPolicy policy(CostLedger* ledger, ExecStats* stats) const {
        ExecPolicy p;
        p.backend = backend == "simulate" ? Backend::Simulate : Backend::Central;
        if (budget_bits > 0)
            p.budget = budget_mode == "per-weight" ? BitBudget::per_weight(budget_bits)
                                                   : BitBudget::per_edge(budget_bits);
        p.ledger = ledger;
        p.stats = stats;
        return p;
    }
};

/** stdout gets the JSON; --out gets JSON or, when the path ends in .csv, CSV. */
void emit(const json& doc, const std::string& out_path, const std::string& csv) {
    const bool want_csv = out_path.ends_with(".csv");
    if (want_csv && csv.empty()) throw InvalidParameter("this command has no CSV form");
    std::printf("%s\n", doc.dump(2).c_str());
    if (out_path.empty()) return;
    write_text_file(out_path, want_csv ? csv : doc.dump(2));
}

json base_doc(const std::string& command, json params) {
    return {{"schema_version", kReportSchemaVersion},
            {"command", command},
            {"params", std::move(params)}};
}

int run_gen(const std::string& family, int n, int k, int alpha, int lambda, int l,
            std::int64_t mult, int clique, std::int64_t bridge, int extra,
            std::int64_t max_weight, std::uint64_t seed, bool seed_given,
            bool unit_shortcuts, const std::string& variant, const std::vector<int>& xs,
            const std::vector<int>& ys, const std::string& graph_out,
            const std::string& sidecar_out) {
    const std::set<int> x(xs.begin(), xs.end());
    const std::set<int> y(ys.begin(), ys.end());

    Multigraph g(2, {{0, 1, 1}});
    json params{{"family", family}};
    if (family == "weighted-cut") {
        g = gen_weighted_cut_instance(n, k, alpha, x, y);
        params.update({{"n", n}, {"k", k}, {"alpha", alpha}, {"x", xs}, {"y", ys}});
    } else if (family == "simple-cut") {
        g = gen_simple_cut_instance(k, l, alpha, lambda, x, y);
        params.update(
            {{"k", k}, {"l", l}, {"alpha", alpha}, {"lambda", lambda}, {"x", xs}, {"y", ys}});
    } else if (family == "base-h") {
        g = gen_base_H(n, k, unit_shortcuts);
        params.update({{"n", n}, {"k", k}, {"unit_shortcuts", unit_shortcuts}});
    } else if (family == "dissemination") {
        auto pair = gen_dissemination_graphs(n, lambda);
        g = variant == "simple" ? pair.simple : pair.weighted;
        params.update({{"n", n}, {"lambda", lambda}, {"variant", variant}});
    } else if (family == "cycle") {
        g = cycle_graph(n, mult);
        params.update({{"n", n}, {"multiplicity", mult}});
    } else if (family == "dumbbell") {
        g = dumbbell_graph(clique, bridge);
        params.update({{"clique", clique}, {"bridge_weight", bridge}});
    } else if (family == "star") {
        g = star_graph(n);
        params.update({{"n", n}});
    } else if (family == "random") {
        if (!seed_given) throw InvalidParameter("--seed is required for --family random");
        g = random_multigraph(n, extra, max_weight, seed);
        params.update(
            {{"n", n}, {"extra", extra}, {"max_weight", max_weight}, {"seed", seed}});
    } else {
        throw InvalidParameter("unknown family: " + family);
    }

    const auto oracle = min_cut_exact(g);
    const auto members = oracle.canonical_members(g.node_count());
    json side = sidecar_json(family, params, oracle.weight, &members);
    side["nodes"] = g.node_count();
    side["edges"] = g.edge_count();

    write_graph_file(graph_out, g);
    if (!sidecar_out.empty()) write_text_file(sidecar_out, side.dump(2));
    std::printf("%s\n", side.dump(2).c_str());
    return 0;
}

int run_exact(const std::string& graph_path, const std::string& out_path) {
    const auto g = load_graph(graph_path);
    const auto cut = min_cut_exact(g);
    json doc = base_doc("exact", {{"graph", graph_path}});
    doc.update(cut_to_json(cut, g.node_count()));
    emit(doc, out_path, "");
    return 0;
}

int run_approx_conn(const std::string& graph_path, std::uint64_t seed,
                    const PolicyFlags& flags, bool ledger_only,
                    const std::string& out_path) {
    const auto g = load_graph(graph_path);
    CostLedger ledger;
    ExecStats stats;
    const auto r = approx_edge_connectivity(g, seed, flags.policy(&ledger, &stats));

    json doc = base_doc("approx-conn",
                        {{"graph", graph_path}, {"seed", seed}, {"backend", flags.backend}});
    doc["ledger"] = ledger_to_json(ledger);
    if (!ledger_only) {
        doc.update({{"lambda_tilde", r.lambda_tilde},
                    {"i_star", r.i_star},
                    {"fallback", r.fallback},
                    {"grid", r.grid},
                    {"trials_per_level", r.trials_per_level},
                    {"connected_counts", r.connected_counts},
                    {"measured_rounds", stats.measured_rounds},
                    {"ledger_rounds", ledger.total()}});
    }
    emit(doc, out_path, "");
    return 0;
}

int run_layering(const std::string& graph_path, double epsilon, std::uint64_t seed,
                 const PolicyFlags& flags, bool ledger_only, const std::string& out_path) {
    const auto g = load_graph(graph_path);
    CostLedger ledger;
    ExecStats stats;
    const auto r = layering_mincut(g, epsilon, seed, flags.policy(&ledger, &stats));
    const auto oracle = min_cut_exact(g);

    json doc = base_doc("layering", {{"graph", graph_path},
                                     {"seed", seed},
                                     {"epsilon", epsilon},
                                     {"backend", flags.backend}});
    doc["ledger"] = ledger_to_json(ledger);
    if (!ledger_only) {
        doc.update({{"epsilon", r.epsilon},
                    {"lambda_tilde", r.lambda_tilde},
                    {"guess", r.guess_value},
                    {"epoch", r.tuple.epoch},
                    {"layer", r.tuple.layer},
                    {"cut_weight", r.cut.weight},
                    {"members", r.cut.canonical_members(g.node_count())},
                    {"measured_rounds", stats.measured_rounds},
                    {"ledger_rounds", ledger.total()},
                    {"oracle_weight", oracle.weight},
                    {"ratio", static_cast<double>(r.cut.weight) /
                                  static_cast<double>(oracle.weight)},
                    {"guesses", r.guesses},
                    {"guesses_executed", r.guesses_executed},
                    {"epochs_per_guess", r.epochs_per_guess},
                    {"layers", r.layers},
                    {"experiments", r.experiments}});
    }
    emit(doc, out_path, "");
    return 0;
}

int run_matula(const std::string& graph_path, double epsilon, std::uint64_t seed,
               const PolicyFlags& flags, bool ledger_only, const std::string& out_path) {
    const auto g = load_graph(graph_path);
    CostLedger ledger;
    ExecStats stats;
    const auto r = matula_mincut(g, epsilon, seed, flags.policy(&ledger, &stats));
    const auto oracle = min_cut_exact(g);

    json doc = base_doc("matula", {{"graph", graph_path},
                                   {"seed", seed},
                                   {"epsilon", epsilon},
                                   {"backend", flags.backend}});
    doc["ledger"] = ledger_to_json(ledger);
    if (!ledger_only) {
        doc.update({{"epsilon", r.epsilon},
                    {"lambda_tilde", r.lambda_tilde},
                    {"guess", r.guess},
                    {"presample_p", r.presample_p},
                    {"cut_weight", r.cut.weight},
                    {"members", r.cut.canonical_members(g.node_count())},
                    {"measured_rounds", stats.measured_rounds},
                    {"ledger_rounds", ledger.total()},
                    {"oracle_weight", oracle.weight},
                    {"ratio", static_cast<double>(r.cut.weight) /
                                  static_cast<double>(oracle.weight)},
                    {"guesses_executed", r.guesses_executed},
                    {"iterations", r.iterations},
                    {"certificate_sizes", r.certificate_sizes}});
    }
    emit(doc, out_path, "");
    return 0;
}

int run_sample_exp(const std::string& graph_path, std::uint64_t seed, int trials, int layers,
                   std::vector<double> probs, const std::string& out_path) {
    const auto g = load_graph(graph_path);
    if (probs.empty())
        for (double p = 0.5; p * g.node_count() >= 1.0; p /= 2.0) probs.push_back(p);

    CostLedger ledger;
    ExecStats stats;
    ExecPolicy policy;
    policy.backend = Backend::Central;
    policy.ledger = &ledger;
    policy.stats = &stats;
    const auto approx = approx_edge_connectivity(g, seed, policy);

    json records = json::array();
    std::ostringstream csv;
    csv << "p,layers,trials,connected_rate\n";
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double rate =
            connectivity_rate(g, probs[i], layers, trials, seed + static_cast<std::uint64_t>(i));
        records.push_back({{"p", probs[i]},
                           {"layers", layers},
                           {"trials", trials},
                           {"connected_rate", rate}});
        csv << probs[i] << ',' << layers << ',' << trials << ',' << rate << '\n';
    }

    json doc = base_doc("sample-exp", {{"graph", graph_path},
                                       {"seed", seed},
                                       {"trials", trials},
                                       {"layers", layers}});
    doc.update({{"records", records},
                {"lambda_tilde", approx.lambda_tilde},
                {"ledger_rounds", ledger.total()}});
    emit(doc, out_path, csv.str());
    return 0;
}

int run_diam_exp(const std::string& graph_path, std::uint64_t seed, int trials, double p,
                 std::int64_t threshold, const std::string& out_path) {
    const auto g = load_graph(graph_path);
    const auto r = sampled_diameter_experiment(g, p, trials, seed);

    json diameters = json::array();
    std::ostringstream csv;
    csv << "trial,diameter\n";
    for (std::size_t i = 0; i < r.diameters.size(); ++i) {
        const auto d = r.diameters[i];
        diameters.push_back(d == kInfiniteDiameter ? json() : json(d));
        csv << i << ',' << (d == kInfiniteDiameter ? std::string("inf") : std::to_string(d))
            << '\n';
    }

    json doc = base_doc(
        "diam-exp",
        {{"graph", graph_path}, {"seed", seed}, {"trials", trials}, {"p", p}});
    doc.update({{"diameters", diameters}, {"disconnected", r.disconnected}});
    if (threshold > 0) {
        doc["threshold"] = threshold;
        doc["fraction_at_least"] = r.fraction_at_least(threshold);
    }
    emit(doc, out_path, csv.str());
    return 0;
}

int run_lb_verify(const std::string& graph_path, int k, const std::string& out_path) {
    const auto g = load_graph(graph_path);
    const auto c_observed = verify_family(g, k);
    const double bound = std::log2(static_cast<double>(g.node_count()) / k);
    const bool ok = static_cast<double>(c_observed) <= bound;

    json doc = base_doc("lb-verify", {{"graph", graph_path}, {"k", k}});
    doc.update({{"c_observed", c_observed}, {"bound", bound}, {"ok", ok}});
    emit(doc, out_path, "");
    return ok ? 0 : 1;
}

int run_suite(const std::string& out_path) {
    const auto results = run_acceptance_suite([](const CriterionResult& r) {
        std::fprintf(stderr, "criterion %2d %s  %s: %s  (%.1fs)\n", r.id,
                     r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.seconds);
    });

    json criteria = json::array();
    std::ostringstream csv;
    csv << "id,pass,name,seconds\n";
    bool all_pass = true;
    for (const auto& r : results) {
        criteria.push_back({{"id", r.id},
                            {"name", r.name},
                            {"pass", r.pass},
                            {"detail", r.detail},
                            {"seconds", r.seconds}});
        csv << r.id << ',' << (r.pass ? 1 : 0) << ',' << r.name << ',' << r.seconds << '\n';
        all_pass = all_pass && r.pass;
    }

    json doc = base_doc("suite", json::object());
    doc.update({{"criteria", criteria}, {"all_pass", all_pass}});
    emit(doc, out_path, csv.str());
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synchronous message-passing min cut toolkit"};
    app.require_subcommand(1);

    std::string graph_path, graph_out, sidecar_out, out_path;
    std::string family, variant = "weighted";
    std::vector<int> xs, ys;
    std::vector<double> probs;
    std::uint64_t seed = 0;
    double epsilon = 0.5, p = 0.5;
    int n = 16, k = 4, alpha = 1, lambda = 2, l = 4, clique = 5, extra = 0, trials = 100,
        layers = 2;
    std::int64_t mult = 1, bridge = 1, max_weight = 1, threshold = 0;
    bool unit_shortcuts = false, ledger_only = false;
    PolicyFlags flags;

    auto* gen = app.add_subcommand("gen", "generate a benchmark graph file");
    gen->add_option("--family", family, "graph family")->required();
    gen->add_option("--n", n, "node parameter");
    gen->add_option("--k", k, "path-group parameter");
    gen->add_option("--alpha", alpha, "weight scale");
    gen->add_option("--lambda", lambda, "connectivity parameter");
    gen->add_option("--l", l, "path length parameter");
    gen->add_option("--mult", mult, "cycle edge multiplicity");
    gen->add_option("--clique", clique, "dumbbell clique size");
    gen->add_option("--bridge-weight", bridge, "dumbbell bridge weight");
    gen->add_option("--extra", extra, "extra random edges");
    gen->add_option("--max-weight", max_weight, "maximum random weight");
    auto* gen_seed = gen->add_option("--seed", seed, "random family seed");
    gen->add_flag("--unit-shortcuts", unit_shortcuts, "add unit shortcut edges");
    gen->add_option("--variant", variant, "dissemination variant")
        ->check(CLI::IsMember({"weighted", "simple"}));
    gen->add_option("--x", xs, "light star groups")->delimiter(',');
    gen->add_option("--y", ys, "light tail groups")->delimiter(',');
    gen->add_option("--graph-out", graph_out, "graph file destination")->required();
    gen->add_option("--sidecar-out", sidecar_out, "sidecar JSON destination");

    auto* exact = app.add_subcommand("exact", "exact minimum cut of a graph file");
    exact->add_option("--graph", graph_path, "graph file")->required();
    exact->add_option("--out", out_path, "report destination");

    auto* approx = app.add_subcommand("approx-conn", "sampled edge-connectivity estimate");
    approx->add_option("--graph", graph_path, "graph file")->required();
    approx->add_option("--seed", seed, "run seed")->required();
    approx->add_option("--out", out_path, "report destination");
    approx->add_flag("--ledger-only", ledger_only, "emit only the cost ledger");
    flags.attach(approx);

    auto* layering = app.add_subcommand("layering", "layered sampling cut approximation");
    layering->add_option("--graph", graph_path, "graph file")->required();
    layering->add_option("--seed", seed, "run seed")->required();
    layering->add_option("--epsilon", epsilon, "approximation parameter");
    layering->add_option("--out", out_path, "report destination");
    layering->add_flag("--ledger-only", ledger_only, "emit only the cost ledger");
    flags.attach(layering);

    auto* matula = app.add_subcommand("matula", "certificate peeling cut approximation");
    matula->add_option("--graph", graph_path, "graph file")->required();
    matula->add_option("--seed", seed, "run seed")->required();
    matula->add_option("--epsilon", epsilon, "approximation parameter");
    matula->add_option("--out", out_path, "report destination");
    matula->add_flag("--ledger-only", ledger_only, "emit only the cost ledger");
    flags.attach(matula);

    auto* sample = app.add_subcommand("sample-exp", "connectivity rate sweep");
    sample->add_option("--graph", graph_path, "graph file")->required();
    sample->add_option("--seed", seed, "run seed")->required();
    sample->add_option("--trials", trials, "trials per probability");
    sample->add_option("--layers", layers, "layer count");
    sample->add_option("--p", probs, "sampling probabilities")->delimiter(',');
    sample->add_option("--out", out_path, "report destination");

    auto* diam = app.add_subcommand("diam-exp", "sampled subgraph diameter experiment");
    diam->add_option("--graph", graph_path, "graph file")->required();
    diam->add_option("--seed", seed, "run seed")->required();
    diam->add_option("--trials", trials, "trial count");
    diam->add_option("--p", p, "per-unit sampling probability")->required();
    diam->add_option("--threshold", threshold, "diameter threshold to report against");
    diam->add_option("--out", out_path, "report destination");

    auto* lbv = app.add_subcommand("lb-verify", "verify benchmark family membership");
    lbv->add_option("--graph", graph_path, "graph file")->required();
    lbv->add_option("--k", k, "family parameter")->required();
    lbv->add_option("--out", out_path, "report destination");

    auto* suite = app.add_subcommand("suite", "run the full acceptance battery");
    suite->add_option("--out", out_path, "report destination");

    try {
        app.parse(argc, argv);
        if (gen->parsed())
            return run_gen(family, n, k, alpha, lambda, l, mult, clique, bridge, extra,
                           max_weight, seed, gen_seed->count() > 0, unit_shortcuts, variant,
                           xs, ys, graph_out, sidecar_out);
        if (exact->parsed()) return run_exact(graph_path, out_path);
        if (approx->parsed())
            return run_approx_conn(graph_path, seed, flags, ledger_only, out_path);
        if (layering->parsed())
            return run_layering(graph_path, epsilon, seed, flags, ledger_only, out_path);
        if (matula->parsed())
            return run_matula(graph_path, epsilon, seed, flags, ledger_only, out_path);
        if (sample->parsed())
            return run_sample_exp(graph_path, seed, trials, layers, probs, out_path);
        if (diam->parsed())
            return run_diam_exp(graph_path, seed, trials, p, threshold, out_path);
        if (lbv->parsed()) return run_lb_verify(graph_path, k, out_path);
        if (suite->parsed()) return run_suite(out_path);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const NoCutFound& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 3;
    } catch (const BudgetViolation& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
}
