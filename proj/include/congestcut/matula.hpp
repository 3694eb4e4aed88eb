#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "congestcut/cut_tester.hpp"
#include "congestcut/errors.hpp"
#include "congestcut/graph.hpp"
#include "congestcut/primitives.hpp"
#include "congestcut/sampling.hpp"

namespace congestcut {

/** Expands every weight-w edge into w parallel unit edges. */
inline Multigraph unit_expand(const Multigraph& g) {
    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        for (std::int64_t t = 0; t < e.w; ++t) edges.push_back({e.u, e.v, 1});
    return Multigraph(g.node_count(), std::move(edges));
}

inline double karger_probability(int n, double lambda_hat, double eps) {
    if (!(lambda_hat >= 1.0)) throw InvalidParameter("presample estimate must be at least 1");
    if (!(eps > 0.0)) throw InvalidParameter("epsilon must be positive");
    const double lg = std::log2(static_cast<double>(std::max(2, n)));
    return std::min(1.0, 100.0 * lg / (eps * eps * lambda_hat));
}

/**
 * Unit-expands g and keeps each unit edge independently with probability
 * min(1, 100 log2 n / (eps^2 lambda_hat)).  The result is a unit multigraph
 * whose connectivity concentrates around p times the original one.
 */
inline Multigraph karger_presample(const Multigraph& g, double lambda_hat, double eps,
                                   std::uint64_t seed) {
    const double p = karger_probability(g.node_count(), lambda_hat, eps);
    auto rng = make_rng(seed, 0x6a96);
    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        for (std::int64_t t = 0; t < e.w; ++t)
            if (bernoulli(rng, p)) edges.push_back({e.u, e.v, 1});
    return Multigraph(g.node_count(), std::move(edges));
}

struct MatulaCoreResult {
    std::optional<Cut> cut;
    int iterations = 0;
    std::vector<std::int64_t> certificate_sizes;
    int eta_final = 0;  // components of the final H = (V, E minus E*)
    double kappa = 0.0;
};

/**
 * One guess of the certificate peeling loop.  Repeatedly contracts the
 * complement of the current certificate and recomputes a sparse certificate
 * for ceil(lambda_hat (1+eps/5)) edge connectivity while the component count
 * of H = (V, E minus E*) keeps dropping by a (1-eps/10) factor; then tests
 * the components of H against kappa = lambda_hat (2+eps/3) and returns the
 * passing one with the smallest id.  Cut multiplicity counts edge ids, so
 * weighted graphs should be unit-expanded first.
 */
inline MatulaCoreResult matula_core(const Multigraph& g, double lambda_hat, double eps,
                                    std::uint64_t seed, const ExecPolicy& policy = {}, int c = 8) {
    if (!(lambda_hat >= 1.0)) throw InvalidParameter("guess must be at least 1");
    if (!(eps > 0.0)) throw InvalidParameter("epsilon must be positive");

    const int n = g.node_count();
    MatulaCoreResult out;
    out.kappa = lambda_hat * (2.0 + eps / 3.0);
    if (n < 2) return out;

    const int k_cert = static_cast<int>(std::ceil(lambda_hat * (1.0 + eps / 5.0)));
    const int cap = static_cast<int>(std::ceil(
        std::log(static_cast<double>(n)) / std::log(1.0 / (1.0 - eps / 10.0))));

    EdgeSubset star = EdgeSubset::all(g.edge_count());
    int eta_old = n;
    int eta_new = n;
    while (true) {
        star = sparse_certificate(g, star.complement(), k_cert, policy).edges;
        eta_new = component_id_multi(g, {star.complement()}, policy)[0].count;
        out.certificate_sizes.push_back(star.count());
        ++out.iterations;
        if (!(eta_new >= 2 && eta_new <= eta_old * (1.0 - eps / 10.0))) break;
        if (out.iterations >= cap) break;
        eta_old = eta_new;
    }
    out.eta_final = eta_new;

    const auto verdict =
        cut_tester(g, star.complement(), out.kappa, eps / 20.0, make_rng(seed, 0x3a7e)(),
                   policy, c);
    for (auto& members : components(g, star.complement()).groups()) {
        if (static_cast<int>(members.size()) == n) continue;
        if (verdict.pass[static_cast<std::size_t>(members[0])] == 0) continue;
        Cut cut;
        cut.members = std::move(members);
        cut.weight = cut_weight(g, cut.members);
        out.cut = std::move(cut);
        break;
    }
    return out;
}

struct MatulaResult {
    Cut cut;            // re-weighed in the input graph
    double guess = 0.0; // original-scale estimate behind the winning cut
    double presample_p = 1.0;
    double epsilon = 0.0;
    std::int64_t lambda_tilde = 1;
    std::vector<double> guesses;  // descending original-scale schedule
    int guesses_executed = 0;
    int iterations = 0;           // winning guess diagnostics
    std::vector<std::int64_t> certificate_sizes;
};

/**
 * Guess wrapper: estimates the connectivity, then walks guesses
 * lambda_tilde * (1+eps/10)^i for i in [-span, span], enough to cover
 * [lambda_tilde / (cprime log2 n), lambda_tilde * cprime log2 n]; the
 * estimate can sit a log factor off on either side.  Each guess presamples
 * once and runs the core on the presampled unit graph with the rescaled
 * guess; the lightest cut re-weighed in g wins.
 */
inline MatulaResult matula_mincut(const Multigraph& g, double eps, std::uint64_t seed,
                                  const ExecPolicy& policy = {}, int c = 8, int cprime = 16) {
    const int n = g.node_count();
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidParameter("epsilon must lie in (0, 1]");
    if (n < 2) throw InvalidParameter("cut approximation needs at least 2 nodes");
    if (components(g).count != 1) throw InvalidParameter("graph must be connected");

    MatulaResult out;
    out.epsilon = eps;

    const auto approx = approx_edge_connectivity(g, make_rng(seed, 0x3a9d)(), policy);
    out.lambda_tilde = approx.lambda_tilde;

    const double step = 1.0 + eps / 10.0;
    const double lg = std::log2(static_cast<double>(std::max(2, n)));
    const int span =
        static_cast<int>(std::ceil(std::log(cprime * lg) / std::log(step)));
    for (int i = span; i >= -span; --i) {
        const double guess =
            std::max(1.0, static_cast<double>(out.lambda_tilde) * std::pow(step, i));
        if (out.guesses.empty() || guess < out.guesses.back()) out.guesses.push_back(guess);
    }

    auto master = make_rng(seed, 0x3347);
    bool found = false;
    for (const double guess : out.guesses) {
        const double p = karger_probability(n, guess, eps);
        const auto sampled = karger_presample(g, guess, eps, master());
        const auto core =
            matula_core(sampled, std::max(1.0, guess * p), eps, master(), policy, c);
        ++out.guesses_executed;
        if (!core.cut) continue;
        Cut cut;
        cut.members = core.cut->members;
        cut.weight = cut_weight(g, cut.members);
        if (!found || cut.weight < out.cut.weight) {
            found = true;
            out.cut = std::move(cut);
            out.guess = guess;
            out.presample_p = p;
            out.iterations = core.iterations;
            out.certificate_sizes = core.certificate_sizes;
        }
    }
    if (!found) throw NoCutFound("no guess produced a passing component");
    return out;
}

}  // namespace congestcut
