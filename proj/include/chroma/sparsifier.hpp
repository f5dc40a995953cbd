#pragma once

#include "coloring.hpp"
#include "graph.hpp"
#include "kneser.hpp"
#include "logmath.hpp"
#include "random.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace chroma {

struct ButParams {
    int x = 0;
    int delta = 0;
    int g = 0;
    BigInt m;
    Rational s;          ///< m / x
    Rational lambda;     ///< 1 / (4g)
    double log_s = 0;
    double p = 1;        ///< min(1, s^(lambda - 1))
    double log_bound = 0; ///< ln(x (x Delta)^(2g-4))
    bool valid = false;  ///< m > x (x Delta)^(2g-4), decided exactly
};

inline ButParams but_parameters(int x, int delta, int g, const BigInt& m)
{
    if (x < 1 || delta < 1 || g < 3 || m < 1)
        throw InvalidArgument("need x >= 1, Delta >= 1, g >= 3 and m >= 1");
    if (x == 2)
        throw InvalidArgument("x = 2 is excluded: the blow-up of a base with chromatic number above 2 already "
                              "contains odd cycles longer than g");
    ButParams b;
    b.x = x;
    b.delta = delta;
    b.g = g;
    b.m = m;
    b.s = Rational(m, BigInt(x));
    b.lambda = Rational(1, 4 * g);
    b.log_s = std::log(to_double(b.s));
    b.p = std::min(1.0, std::exp((to_double(b.lambda) - 1.0) * b.log_s)); // s < 1 when m < x
    b.log_bound = std::log(static_cast<double>(x)) + (2.0 * g - 4) * std::log(static_cast<double>(x) * delta);
    BigInt bound = BigInt(x) * boost::multiprecision::pow(BigInt(x) * delta, static_cast<unsigned>(2 * g - 4));
    b.valid = m > bound;
    return b;
}

/// Keeps each host edge independently with probability p, drawing in edge order from
/// one stream of `seed`.
inline Graph sparsify(const Graph& host, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidArgument("retention probability must lie in [0, 1]");
    auto rng = make_rng(seed, {0x5ba7ULL});
    std::vector<Edge> kept;
    for (auto e : host.edges())
        if (bernoulli(rng, p))
            kept.push_back(e);
    return Graph::from_edges(host.order(), kept);
}

namespace detail {

// ln(-ln(1 - y)) from ln y, stable for y far below double precision.
inline double log_neg_log1m(double log_y)
{
    if (log_y < -30.0)
        return log_y + std::log1p(0.5 * std::exp(log_y));
    return std::log(-std::log1p(-std::exp(log_y)));
}

// 0.9 ln(1 - z) > -z, the simplification used to reach the two inequalities.
inline bool simplification_valid(double log_z)
{
    if (log_z < -30.0)
        return true;
    double z = std::exp(log_z);
    return z < 1.0 && 0.9 * std::log1p(-z) > -z;
}

} // namespace detail

struct LLLInequalities {
    bool ineq3 = false;
    bool ineq4 = false;
    double log_lhs3 = 0;  ///< ln(0.9 lambda (1 - lambda) ln s); -inf when s <= 1
    double log_rhs3 = 0;
    double log_lhs4 = 0;  ///< ln(0.4 s^(1+lambda))
    double log_rhs4 = 0;
    double log_binomial_term = 0;  ///< ln(e^(-s^(1+lambda)/2) C(sx, s)^2)
    bool binomial_exact = true;    ///< log-gamma evaluation; otherwise the (ex)^(2s) bound
    bool intermediate4 = false;    ///< sum_j s^((2 lambda - 1) j) s^2 (s x Delta)^(j-2) < 1.1 s
    bool intermediate3 = false;    ///< sum_j s^((2 lambda - 1) j) (s x Delta)^(j-2) < 1.1 / s
    bool simplification_valid = false; ///< 0.9 ln(1-z) > -z for z = y_0 and every y_j
};

/// Both sufficient inequalities for the local lemma, evaluated in log space.
inline LLLInequalities lll_inequalities_hold(double x, double delta, int g, double s)
{
    if (!(s > 0.0) || !(x > 0.0) || !(delta > 0.0) || g < 3)
        throw InvalidArgument("need s, x, Delta > 0 and g >= 3");
    LLLInequalities r;
    const double lambda = 1.0 / (4.0 * g);
    const double log_s = std::log(s);
    const double log_sxd = log_s + std::log(x) + std::log(delta);

    std::vector<double> t3;
    std::vector<double> t4;
    for (int j = 3; j <= g; ++j) {
        double base = (2 * lambda - 1) * j * log_s + (j - 2) * log_sxd;
        t3.push_back(base);
        t4.push_back(base + 2 * log_s);
    }
    double sum3 = log_sum_exp(t3);
    double sum4 = log_sum_exp(t4);
    r.intermediate3 = log_less(sum3, std::log(1.1) - log_s);
    r.intermediate4 = log_less(sum4, std::log(1.1) + log_s);

    double log_choose = 0;
    if (s * x < 1e300 && s <= s * x) {
        log_choose = log_binomial(s * x, s);
    } else {
        r.binomial_exact = false;
        log_choose = s * (1.0 + std::log(x));
    }
    double s_pow = std::exp((1 + lambda) * log_s);
    r.log_binomial_term = -0.5 * s_pow + 2 * log_choose;

    double rhs3[] = {sum3, r.log_binomial_term};
    double rhs4[] = {sum4, r.log_binomial_term};
    r.log_rhs3 = log_sum_exp(rhs3);
    r.log_rhs4 = log_sum_exp(rhs4);

    r.log_lhs3 = log_s > 0 ? std::log(0.9 * lambda * (1 - lambda) * log_s) : -std::numeric_limits<double>::infinity();
    r.log_lhs4 = std::log(0.4) + (1 + lambda) * log_s;
    r.ineq3 = std::isfinite(r.log_lhs3) && log_leq(r.log_rhs3, r.log_lhs3);
    r.ineq4 = log_leq(r.log_rhs4, r.log_lhs4);

    bool simple = detail::simplification_valid(-0.5 * s_pow);
    for (int j = 3; j <= g; ++j)
        simple = simple && detail::simplification_valid(-(1 - lambda) * (1 - lambda) * j * log_s);
    r.simplification_valid = simple;
    return r;
}

struct LLLEvent {
    double probability = 0;
    double y = 0;
    std::vector<std::size_t> deps;
};

struct LLLInstance {
    std::vector<LLLEvent> events;
};

struct LLLCheck {
    bool holds = false;
    std::vector<double> margins;    ///< ln(y prod(1 - y_B)) - ln Pr per event (>= 0 passes)
    double avoidance_lower = 0;     ///< prod(1 - y(A))
    std::optional<std::size_t> first_failure;
};

/// The asymmetric local lemma condition Pr(A) <= y(A) prod_{B in Gamma(A)} (1 - y(B)) for
/// every event, compared in log space with 1e-12 relative tolerance.
inline LLLCheck asymmetric_lll_check(const LLLInstance& inst)
{
    const auto n = inst.events.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = inst.events[i];
        if (!(e.probability >= 0.0 && e.probability <= 1.0))
            throw InvalidArgument("event probability outside [0, 1]");
        if (!(e.y > 0.0 && e.y < 1.0))
            throw InvalidArgument("y values must lie in (0, 1)");
        for (auto d : e.deps) {
            if (d >= n || d == i)
                throw InvalidArgument("bad dependency index");
            const auto& back = inst.events[d].deps;
            if (std::find(back.begin(), back.end(), i) == back.end())
                throw InvalidArgument("dependency relation is not symmetric");
        }
    }
    LLLCheck out;
    out.holds = true;
    double log_avoid = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = inst.events[i];
        log_avoid += std::log1p(-e.y);
        if (e.probability == 0.0) {
            out.margins.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        double rhs = std::log(e.y);
        for (auto d : e.deps)
            rhs += std::log1p(-inst.events[d].y);
        double lhs = std::log(e.probability);
        out.margins.push_back(rhs - lhs);
        if (!log_leq(lhs, rhs, 1e-12) && out.holds) {
            out.holds = false;
            out.first_failure = i;
        }
    }
    out.avoidance_lower = std::exp(log_avoid);
    return out;
}

/// Events grouped into classes with identical parameters; each event of class c depends
/// on at most exp(log_count) events of class d.
struct LLLClass {
    std::string name;
    double log_probability = 0;
    double log_y = 0;
    std::vector<std::pair<std::size_t, double>> deps; ///< (class, ln count)
};

struct TypedLLLCheck {
    bool holds = false;
    std::vector<double> margins; ///< ln rhs - ln Pr per class
};

/// The asymmetric condition per class, all quantities as logarithms:
/// ln Pr <= ln y - sum_d count_d (-ln(1 - y_d)).
inline TypedLLLCheck typed_lll_check(const std::vector<LLLClass>& classes)
{
    TypedLLLCheck out;
    out.holds = true;
    for (const auto& c : classes) {
        if (c.log_y >= 0.0 || c.log_probability > 0.0)
            throw InvalidArgument("class needs y < 1 and Pr <= 1");
        std::vector<double> terms;
        for (auto [d, log_count] : c.deps)
            terms.push_back(log_count + detail::log_neg_log1m(classes.at(d).log_y));
        double penalty = std::exp(log_sum_exp(terms));
        double rhs = c.log_y - penalty;
        out.margins.push_back(rhs - c.log_probability);
        if (!std::isfinite(rhs) || !log_leq(c.log_probability, rhs))
            out.holds = false;
    }
    return out;
}

/// The event classes of the sparsification argument at real s: cycles of each length
/// j in [3, g] present in H, and K_{s,s} copies inside an edge blow-up missing from H.
/// Pr of the biclique event uses the exact (1-p)^(s^2) in log space.
inline std::vector<LLLClass> sparsification_lll_classes(double x, double delta, int g, double s)
{
    const double lambda = 1.0 / (4.0 * g);
    const double log_s = std::log(s);
    const double log_sxd = log_s + std::log(x) + std::log(delta);
    const double log_p = (lambda - 1) * log_s;
    const double log_choose = log_binomial(s * x, s);

    std::vector<LLLClass> classes;
    const std::size_t biclique = static_cast<std::size_t>(g - 2);
    for (int i = 3; i <= g; ++i) {
        LLLClass c{"cycle" + std::to_string(i), i * log_p, (1 - lambda) * i * log_p, {}};
        for (int j = 3; j <= g; ++j)
            c.deps.emplace_back(static_cast<std::size_t>(j - 3), std::log(static_cast<double>(i)) + (j - 2) * log_sxd);
        c.deps.emplace_back(biclique, std::log(static_cast<double>(i)) + 2 * log_choose);
        classes.push_back(std::move(c));
    }
    double p = std::exp(log_p);
    LLLClass b{"biclique", s * s * std::log1p(-p), -0.5 * std::exp((1 + lambda) * log_s), {}};
    for (int j = 3; j <= g; ++j)
        b.deps.emplace_back(static_cast<std::size_t>(j - 3), 2 * log_s + (j - 2) * log_sxd);
    b.deps.emplace_back(biclique, 2 * log_choose);
    classes.push_back(std::move(b));
    return classes;
}

/// Every cycle of length <= g as a vertex list starting at its smallest vertex, oriented
/// so the second vertex is smaller than the last; sorted.
inline std::vector<std::vector<Vertex>> short_cycles(const Graph& h, int g, std::size_t cap = 1'000'000)
{
    if (g < 3)
        throw InvalidArgument("cycle length bound must be at least 3");
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> path;
    std::vector<char> on_path(static_cast<std::size_t>(h.order()), 0);
    for (Vertex start = 0; start < h.order(); ++start) {
        path.assign(1, start);
        on_path[start] = 1;
        auto dfs = [&](auto&& self) -> void {
            Vertex last = path.back();
            for (Vertex u : h.neighbors(last)) {
                if (u == start && path.size() >= 3 && path[1] < last) {
                    if (out.size() >= cap)
                        throw CapExceeded("more than " + std::to_string(cap) + " short cycles");
                    out.push_back(path);
                }
                if (u <= start || on_path[u] || static_cast<int>(path.size()) >= g)
                    continue;
                on_path[u] = 1;
                path.push_back(u);
                self(self);
                path.pop_back();
                on_path[u] = 0;
            }
        };
        dfs(dfs);
        on_path[start] = 0;
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct KssCounterexample {
    Vertex base_a = -1;
    Vertex base_b = -1;
    std::vector<Vertex> x;
    std::vector<Vertex> y;
};

struct KssOptions {
    bool sampled = false;
    std::uint64_t budget = 1'000'000'000; ///< cap on C(m, ceil(s))^2 * |E(base)| for exhaustive mode
    std::uint64_t trials = 10'000;
    std::uint64_t seed = 0;
};

struct KssResult {
    bool holds = false;
    bool sampled = false;
    std::uint64_t checked = 0;
    std::optional<KssCounterexample> counterexample;
};

/// For every base edge ab and all X, Y inside the classes of a and b with
/// |X|, |Y| >= s, some edge of h joins X and Y. Sets of size ceil(s) suffice.
/// Exhaustive mode walks every X and looks for ceil(s) vertices of b's class avoiding
/// N(X); sampled mode draws random pairs.
inline KssResult kss_property_check(const Graph& h, const BlowupEmbedding& e, const Rational& s, const KssOptions& opts = {})
{
    if (h.order() != e.host.order())
        throw InvalidArgument("sampled graph and embedding host differ in order");
    if (s <= 0)
        throw InvalidArgument("s must be positive");
    KssResult out;
    out.sampled = opts.sampled;
    const int m = e.power;
    BigInt kk = ceil_of(s);
    if (kk > m) {
        out.holds = true;
        return out;
    }
    const int k = kk.convert_to<int>();
    auto base_edges = e.base.edges();
    if (!opts.sampled) {
        std::uint64_t per = binomial(m, k);
        unsigned __int128 cost = static_cast<unsigned __int128>(per) * per * base_edges.size();
        if (per == std::numeric_limits<std::uint64_t>::max() || cost > opts.budget)
            throw CapExceeded("exhaustive biclique check exceeds its budget; use sampled mode");
    }
    auto rng = make_rng(opts.seed, {0x6b55ULL});
    for (auto [a, b] : base_edges) {
        for (int side = 0; side < 2; ++side) {
            Vertex ca = side == 0 ? a : b;
            Vertex cb = side == 0 ? b : a;
            const auto& xa = e.classes[ca];
            const auto& yb = e.classes[cb];
            auto test = [&](const std::vector<Vertex>& x) -> bool {
                ++out.checked;
                std::vector<Vertex> free;
                for (Vertex y : yb)
                    if (std::none_of(x.begin(), x.end(), [&](Vertex v) { return h.adjacent(v, y); }))
                        free.push_back(y);
                if (static_cast<int>(free.size()) < k)
                    return true;
                free.resize(static_cast<std::size_t>(k));
                out.counterexample = KssCounterexample{ca, cb, x, free};
                return false;
            };
            if (opts.sampled) {
                for (std::uint64_t t = 0; t < opts.trials; ++t) {
                    std::vector<Vertex> pool = xa;
                    std::shuffle(pool.begin(), pool.end(), rng);
                    pool.resize(static_cast<std::size_t>(k));
                    std::sort(pool.begin(), pool.end());
                    if (!test(pool))
                        return out;
                }
            } else {
                std::vector<int> idx(static_cast<std::size_t>(k));
                for (int i = 0; i < k; ++i)
                    idx[i] = i;
                while (true) {
                    std::vector<Vertex> x;
                    for (int i : idx)
                        x.push_back(xa[i]);
                    if (!test(x))
                        return out;
                    int i = k - 1;
                    while (i >= 0 && idx[i] == m - k + i)
                        --i;
                    if (i < 0)
                        break;
                    ++idx[i];
                    for (int j = i + 1; j < k; ++j)
                        idx[j] = idx[j - 1] + 1;
                }
            }
            if (side == 0 && !opts.sampled)
                break; // exhaustive over X already covers the symmetric direction
        }
    }
    out.holds = true;
    return out;
}

enum class SamplingStrategy { rejection, resample };

inline const char* to_string(SamplingStrategy s) { return s == SamplingStrategy::rejection ? "rejection" : "resample"; }

struct SampleRecord {
    Girth girth;
    bool girth_ok = false;
    std::optional<int> chi;
    bool chi_ok = false;
    std::size_t edges = 0;
    std::size_t short_cycles = 0;
    std::size_t resample_steps = 0;
    bool resample_converged = false;
};

struct PipelineOptions {
    std::optional<double> p_override;
    SamplingStrategy strategy = SamplingStrategy::rejection;
    std::size_t max_resample_steps = 100'000;
    bool resample_bicliques = false; ///< resampling also repairs edgeless K_{s,s} copies
    int max_coloring_vertices = 64;
    int max_host_vertices = 5000;
    std::function<void(const Graph&, const SampleRecord&)> observer;
};

struct PipelineReport {
    ButParams params;
    double p = 0;
    bool faithful = false;  ///< p from the parameters and m above the sufficient bound
    SamplingStrategy strategy = SamplingStrategy::rejection;
    int base_chi = 0;
    int host_order = 0;
    std::size_t host_edges = 0;
    std::vector<SampleRecord> samples;
    std::size_t girth_successes = 0;
    std::size_t chi_successes = 0;
    std::size_t successes = 0;
    bool chi_checked = false;
    LLLInequalities lll;
};

namespace detail {

// Moser-Tardos style local resampling over the same events as the local lemma argument:
// while a cycle of length <= g survives, or (with bicliques) some K_{k,k} inside an edge
// blow-up has lost every edge, redraw that event's edges.
inline Graph resample_events(const BlowupEmbedding& e, double p, int g, const std::optional<Rational>& s,
                             std::uint64_t seed, std::size_t max_steps, std::size_t& steps, bool& converged)
{
    const Graph& host = e.host;
    auto rng = make_rng(seed, {0x3e5aULL});
    auto host_edges = host.edges();
    std::vector<char> present(host_edges.size());
    for (std::size_t i = 0; i < host_edges.size(); ++i)
        present[i] = bernoulli(rng, p);
    auto redraw = [&](Vertex a, Vertex b) {
        Edge key{std::min(a, b), std::max(a, b)};
        auto it = std::lower_bound(host_edges.begin(), host_edges.end(), key);
        present[static_cast<std::size_t>(it - host_edges.begin())] = bernoulli(rng, p);
    };
    auto build = [&] {
        std::vector<Edge> kept;
        for (std::size_t i = 0; i < host_edges.size(); ++i)
            if (present[i])
                kept.push_back(host_edges[i]);
        return Graph::from_edges(host.order(), kept);
    };
    steps = 0;
    converged = false;
    while (true) {
        Graph h = build();
        auto cycles = short_cycles(h, g);
        std::optional<KssCounterexample> empty;
        if (cycles.empty() && s)
            empty = kss_property_check(h, e, *s).counterexample;
        if (cycles.empty() && !empty) {
            converged = true;
            return h;
        }
        if (steps >= max_steps)
            return h;
        if (!cycles.empty()) {
            const auto& c = cycles[std::uniform_int_distribution<std::size_t>(0, cycles.size() - 1)(rng)];
            for (std::size_t i = 0; i < c.size(); ++i)
                redraw(c[i], c[(i + 1) % c.size()]);
        } else {
            for (Vertex a : empty->x)
                for (Vertex b : empty->y)
                    redraw(a, b);
        }
        ++steps;
    }
}

} // namespace detail

/// Samples spanning subgraphs of base^(m) and checks girth > g and chi > x on each.
inline PipelineReport but_pipeline(const Graph& base, int x, int g, int m, std::uint64_t seed, int budget,
                                   const PipelineOptions& opts = {})
{
    if (budget < 0)
        throw InvalidArgument("budget must be nonnegative");
    PipelineReport rep;
    rep.base_chi = chromatic_number(base, {opts.max_coloring_vertices}).chromatic_number;
    if (rep.base_chi <= x)
        throw InvalidArgument("base chromatic number " + std::to_string(rep.base_chi) + " does not exceed x");
    rep.params = but_parameters(x, std::max(1, base.max_degree()), g, BigInt(m));
    if (static_cast<long long>(base.order()) * m > opts.max_host_vertices)
        throw CapExceeded("blow-up host larger than " + std::to_string(opts.max_host_vertices) + " vertices");
    auto blown = blow_up(base, m);
    const Graph& host = blown.graph;
    rep.host_order = host.order();
    rep.host_edges = host.size();
    rep.p = opts.p_override.value_or(rep.params.p);
    rep.faithful = !opts.p_override && rep.params.valid;
    rep.strategy = opts.strategy;
    rep.chi_checked = host.order() <= opts.max_coloring_vertices;
    rep.lll = lll_inequalities_hold(x, std::max(1, base.max_degree()), g, to_double(rep.params.s));

    for (int i = 0; i < budget; ++i) {
        std::uint64_t sample_seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
        SampleRecord rec;
        Graph h = opts.strategy == SamplingStrategy::rejection
                      ? sparsify(host, rep.p, sample_seed)
                      : detail::resample_events(blown.embedding, rep.p, g,
                                               opts.resample_bicliques ? std::optional<Rational>(rep.params.s)
                                                                       : std::nullopt,
                                               sample_seed, opts.max_resample_steps, rec.resample_steps,
                                               rec.resample_converged);
        rec.girth = girth(h);
        rec.girth_ok = rec.girth.exceeds(g);
        rec.edges = h.size();
        rec.short_cycles = short_cycles(h, g).size();
        if (rep.chi_checked) {
            rec.chi = chromatic_number(h, {opts.max_coloring_vertices}).chromatic_number;
            rec.chi_ok = *rec.chi > x;
        }
        rep.girth_successes += rec.girth_ok;
        rep.chi_successes += rec.chi_ok;
        rep.successes += rec.girth_ok && rec.chi_ok;
        if (opts.observer)
            opts.observer(h, rec);
        rep.samples.push_back(rec);
    }
    return rep;
}

} // namespace chroma
