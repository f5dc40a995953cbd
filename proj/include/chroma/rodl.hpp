#pragma once

#include "fractional.hpp"
#include "graph.hpp"
#include "kneser.hpp"
#include "logmath.hpp"
#include "rational.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace chroma {

namespace detail {

// ln f(x, l) given ln l, so that l itself never has to be representable.
inline LogValue f_from_log_l(double x, double log_l)
{
    double log_z = std::log(x) + 7.0 * log_l;
    double z = std::exp(log_z);
    if (!std::isfinite(z))
        return {0.0, false, true};
    return LogValue::from_log(std::log(x) + 3.0 * (lanczos_lgamma(z + 1.0) - lanczos_lgamma(x + 1.0)));
}

} // namespace detail

/// f(x, l) = x (Gamma(x l^7 + 1) / Gamma(x + 1))^3 as a logarithm.
inline LogValue f_threshold(double x, double l)
{
    if (!(x >= 1.0) || !(l >= 1.0) || !std::isfinite(x) || !std::isfinite(l))
        throw InvalidArgument("f(x, l) needs x >= 1 and l >= 1");
    if (l == 1.0)
        return LogValue::from_log(std::log(x), true);
    return detail::f_from_log_l(x, std::log(l));
}

/// (x+1)(1 - 1/(6(x+1)))^7 <= x, with the left side required to clear x by 1e-9 x.
inline bool recursive_bound_holds(double x)
{
    if (!(x > 0.0))
        throw InvalidArgument("recursive bound needs x > 0");
    double lhs = (x + 1.0) * std::exp(7.0 * std::log1p(-1.0 / (6.0 * (x + 1.0))));
    return lhs + 1e-9 * x <= x;
}

/// The left side of the recursive bound, for reporting.
inline double recursive_bound_lhs(double x)
{
    return (x + 1.0) * std::exp(7.0 * std::log1p(-1.0 / (6.0 * (x + 1.0))));
}

struct DescentOptions {
    std::size_t max_length = 4096;
};

/// Approximate length of descent_sequence(x, l): the product of the ratios is
/// Gamma(x+1) Gamma(x+n+5/6) / (Gamma(x+5/6) Gamma(x+n+1)), searched for the first n
/// that brings l below 2.
inline double descent_length_estimate(double x, double l)
{
    if (l < 2.0)
        return 1.0;
    auto log_product = [&](double n) {
        return lanczos_lgamma(x + 1.0) + lanczos_lgamma(x + n + 5.0 / 6.0) - lanczos_lgamma(x + 5.0 / 6.0) -
               lanczos_lgamma(x + n + 1.0);
    };
    double target = std::log(2.0 / l);
    double hi = 1.0;
    while (log_product(hi) >= target && hi < 1e300)
        hi *= 2.0;
    double lo = hi / 2.0;
    for (int it = 0; it < 200 && hi - lo > 0.5; ++it) {
        double mid = (lo + hi) / 2.0;
        (log_product(mid) >= target ? lo : hi) = mid;
    }
    return std::ceil(hi) + 1.0;
}

/// l_0 = l, l_i = l_{i-1} (1 - 1/(6(x+i))), stopping at the first value below 2.
/// Returns [l] when l < 2. Exact; throws CapExceeded past opts.max_length elements.
inline std::vector<Rational> descent_sequence(const Rational& x, const Rational& l, const DescentOptions& opts = {})
{
    if (x < 1 || l < 1)
        throw InvalidArgument("descent sequence needs x >= 1 and l >= 1");
    std::vector<Rational> seq{l};
    for (long long i = 1; seq.back() >= 2; ++i) {
        if (seq.size() >= opts.max_length)
            throw CapExceeded("descent sequence longer than " + std::to_string(opts.max_length) +
                              " elements (estimated " +
                              std::to_string(static_cast<long long>(descent_length_estimate(to_double(x), to_double(l)))) +
                              ")");
        seq.push_back(seq.back() * (1 - 1 / (6 * (x + i))));
    }
    return seq;
}

/// k_0 = x and k_t = f(x, k_{t-1}); once a value overflows every later one is tagged too.
inline std::vector<LogValue> tower_k(double x, int t_max)
{
    if (!(x >= 1.0) || t_max < 0)
        throw InvalidArgument("tower needs x >= 1 and t_max >= 0");
    std::vector<LogValue> out{LogValue::from_log(std::log(x), true)};
    for (int t = 1; t <= t_max; ++t) {
        const auto& prev = out.back();
        if (prev.overflow) {
            out.push_back({0.0, false, true});
            continue;
        }
        if (prev.log == 0.0) {
            out.push_back(LogValue::from_log(std::log(x), prev.exact));
            continue;
        }
        out.push_back(detail::f_from_log_l(x, prev.log));
    }
    return out;
}

struct CatalogOptions {
    int mycielski_depth = 3;  ///< Mycielski steps above C5
    int kneser_k_max = 4;     ///< KG(3k-1, k) for 2 <= k <= this
    int odd_cycle_k_max = 5;  ///< C_{2k+1} for 2 <= k <= this
};

/// A catalog member: its description, order, and known chi_f. The graph is built only
/// for the member returned by witness_r_upper.
struct CatalogEntry {
    std::string name;
    std::uint64_t order = 0;
    Rational chi_f;
};

/// Triangle-free catalog: K1, odd cycles, the Mycielski tower over C5, and KG(3k-1, k).
inline std::vector<CatalogEntry> witness_catalog(const CatalogOptions& opts = {})
{
    std::vector<CatalogEntry> out;
    out.push_back({"K1", 1, Rational(1)});
    for (int k = 2; k <= opts.odd_cycle_k_max; ++k)
        out.push_back({"C" + std::to_string(2 * k + 1), static_cast<std::uint64_t>(2 * k + 1), 2 + Rational(1, k)});
    Rational f(5, 2);
    std::uint64_t order = 5;
    for (int d = 1; d <= opts.mycielski_depth; ++d) {
        f += 1 / f;
        order = 2 * order + 1;
        out.push_back({"M" + std::to_string(d) + "(C5)", order, f});
    }
    for (int k = 2; k <= opts.kneser_k_max; ++k)
        out.push_back({"KG(" + std::to_string(3 * k - 1) + "," + std::to_string(k) + ")", binomial(3 * k - 1, k),
                       3 - Rational(1, k)});
    return out;
}

inline Graph build_catalog_graph(const CatalogEntry& e)
{
    if (e.name == "K1")
        return Graph(1);
    if (e.name[0] == 'C')
        return generate::cycle(static_cast<int>(e.order));
    if (e.name[0] == 'M') {
        Graph g = generate::cycle(5);
        int depth = std::stoi(e.name.substr(1));
        for (int d = 0; d < depth; ++d)
            g = generate::mycielskian(g);
        return g;
    }
    int k = std::stoi(e.name.substr(e.name.find(',') + 1));
    return kneser(3 * k - 1, k);
}

struct Witness {
    CatalogEntry entry;
    Graph graph;
};

/// Smallest catalog member with chi_f >= x (ties: catalog order); none when the
/// catalog tops out below x.
inline std::optional<Witness> witness_r_upper(const Rational& x, const CatalogOptions& opts = {})
{
    if (x < 1)
        throw InvalidArgument("witness search needs x >= 1");
    std::optional<CatalogEntry> best;
    for (auto& e : witness_catalog(opts))
        if (e.chi_f >= x && (!best || e.order < best->order))
            best = e;
    if (!best)
        return std::nullopt;
    return Witness{*best, build_catalog_graph(*best)};
}

struct DescentStep {
    std::vector<Vertex> vertices;   ///< current graph, as original vertex ids
    Rational threshold;
    std::optional<Vertex> pivot;    ///< original id
    Rational pivot_left_chi_f;      ///< chi_f of the pivot's left neighborhood (0 without pivot)
    std::vector<Rational> weights;  ///< alpha_f weights of the current graph
};

enum class DescentOutcome { clique_witness, bounded_left_chi_f };

inline const char* to_string(DescentOutcome o)
{
    return o == DescentOutcome::clique_witness ? "clique-witness" : "bounded-left-chi_f";
}

struct DescentTrace {
    std::vector<DescentStep> steps;
    DescentOutcome outcome = DescentOutcome::bounded_left_chi_f;

    std::vector<Vertex> pivots() const
    {
        std::vector<Vertex> out;
        for (const auto& s : steps)
            if (s.pivot)
                out.push_back(*s.pivot);
        return out;
    }
};

/// Thresholds are consumed from last to first. Each step weights the current graph by
/// alpha_f weights, scans vertices in weight order for the first whose left
/// neighborhood has chi_f above the threshold, and moves into that neighborhood.
inline DescentTrace rodl_descent(const Graph& g, const std::vector<Rational>& thresholds,
                                 const FractionalOptions& opts = {})
{
    if (thresholds.empty())
        throw InvalidArgument("descent needs at least one threshold");
    for (const auto& t : thresholds)
        if (t <= 0)
            throw InvalidArgument("descent thresholds must be positive");

    DescentTrace trace;
    std::vector<Vertex> current(static_cast<std::size_t>(g.order()));
    for (Vertex v = 0; v < g.order(); ++v)
        current[v] = v;

    for (auto t = thresholds.size(); t-- > 0;) {
        auto sub = induced(g, current);
        DescentStep step{current, thresholds[t], std::nullopt, Rational(0), {}};
        auto weights = alpha_f_weights(sub.graph, opts).weights;
        step.weights = weights.values();
        auto ord = weights.order();
        std::vector<Vertex> next;
        for (int pos = 0; pos < ord.size() && !step.pivot; ++pos) {
            Vertex v = ord.at(pos);
            auto left = left_neighborhood(sub.graph, ord, v);
            auto value = fractional_chromatic(induced(sub.graph, left).graph, opts).value;
            if (value > thresholds[t]) {
                step.pivot = sub.to_parent[v];
                step.pivot_left_chi_f = value;
                for (Vertex u : left)
                    next.push_back(sub.to_parent[u]);
            }
        }
        bool found = step.pivot.has_value();
        trace.steps.push_back(std::move(step));
        if (!found) {
            trace.outcome = DescentOutcome::bounded_left_chi_f;
            break;
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    if (trace.steps.back().pivot)
        trace.outcome = DescentOutcome::clique_witness;
    auto chain = trace.pivots();
    if (!is_clique(g, chain))
        throw InvariantViolation("descent pivots do not form a clique");
    return trace;
}

} // namespace chroma
