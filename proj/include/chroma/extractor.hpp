#pragma once

#include "fractional.hpp"
#include "graph.hpp"
#include "independent_sets.hpp"
#include "logmath.hpp"
#include "random.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace chroma {

/// A graph with vertex weights and the order they induce: heavier first, ties by index.
class OrderedWeightedGraph {
public:
    OrderedWeightedGraph(Graph g, VertexWeighting w) : g_(std::move(g)), w_(std::move(w)), ord_(w_.order())
    {
        if (w_.size() != g_.order())
            throw InvalidArgument("weighting size does not match graph order");
        if (w_.total() <= 0)
            throw InvalidArgument("total weight must be positive");
    }

    static OrderedWeightedGraph unit(Graph g)
    {
        int n = g.order();
        return {std::move(g), VertexWeighting::uniform(n)};
    }

    const Graph& graph() const noexcept { return g_; }
    const VertexWeighting& weights() const noexcept { return w_; }
    const VertexOrder& order() const noexcept { return ord_; }
    int rank(Vertex v) const { return ord_.rank(v); }

    /// The set as a list in weight order.
    std::vector<Vertex> ordered(std::span<const Vertex> set) const
    {
        std::vector<Vertex> out(set.begin(), set.end());
        std::sort(out.begin(), out.end(), [&](Vertex a, Vertex b) { return rank(a) < rank(b); });
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<Vertex> all() const { return ord_.perm(); }

    /// Neighbors of v inside `set` that precede v.
    std::vector<Vertex> left_within(Vertex v, std::span<const Vertex> set) const
    {
        std::vector<Vertex> out;
        for (Vertex u : set)
            if (u != v && rank(u) < rank(v) && g_.adjacent(u, v))
                out.push_back(u);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    Graph g_;
    VertexWeighting w_;
    VertexOrder ord_;
};

/// First floor(s) elements of an ordered list (s >= 0).
inline std::vector<Vertex> prefix(std::span<const Vertex> y, const Rational& s)
{
    if (s < 0)
        throw InvalidArgument("prefix length must be nonnegative");
    BigInt k = floor_of(s);
    std::size_t take = k >= BigInt(y.size()) ? y.size() : k.convert_to<std::size_t>();
    return {y.begin(), y.begin() + static_cast<std::ptrdiff_t>(take)};
}

namespace detail {

// Positions of X inside the ordered list Y, ascending.
inline std::vector<std::size_t> positions_in(std::span<const Vertex> x, std::span<const Vertex> y)
{
    std::vector<std::size_t> pos;
    for (Vertex v : x) {
        auto it = std::find(y.begin(), y.end(), v);
        if (it == y.end())
            throw InvalidArgument("vertex " + std::to_string(v) + " is not in the host list");
        pos.push_back(static_cast<std::size_t>(it - y.begin()));
    }
    std::sort(pos.begin(), pos.end());
    if (std::adjacent_find(pos.begin(), pos.end()) != pos.end())
        throw InvalidArgument("set has repeated vertices");
    return pos;
}

inline std::size_t floor_index(const Rational& q)
{
    BigInt f = floor_of(q);
    return f < 0 ? 0 : f.convert_to<std::size_t>();
}

} // namespace detail

/// X lies within the first floor(s|X|) elements of the ordered list Y.
inline bool is_principal(std::span<const Vertex> x, std::span<const Vertex> y, const Rational& s)
{
    auto pos = detail::positions_in(x, y);
    std::size_t limit = detail::floor_index(s * static_cast<long long>(pos.size()));
    return pos.empty() || pos.back() < limit;
}

/// No nonempty subset of X is s-principal in Y: the j-th earliest element of X sits at
/// or after position floor(s j) for every j.
inline bool is_sparse(std::span<const Vertex> x, std::span<const Vertex> y, const Rational& s)
{
    auto pos = detail::positions_in(x, y);
    for (std::size_t j = 1; j <= pos.size(); ++j)
        if (pos[j - 1] < detail::floor_index(s * static_cast<long long>(j)))
            return false;
    return true;
}

/// w(X) <= w(Y)/s for an s-sparse X in Y. Throws when X is not sparse.
inline bool sparse_weight_check(std::span<const Vertex> x, std::span<const Vertex> y, const Rational& s,
                                const VertexWeighting& w)
{
    if (s <= 0)
        throw InvalidArgument("sparseness parameter must be positive");
    if (!is_sparse(x, y, s))
        throw InvalidArgument("set is not sparse in its host");
    return w.weight_of(x) * s <= w.weight_of(y);
}

struct ReducibleCheck {
    bool reducible = false;
    bool weight_ok = false;
    Rational weight_floor;          ///< w(V) / (x (x+1)^2)
    Rational chi_f_cap;             ///< l (1 - 1/(6(x+1)))
    std::optional<Vertex> witness;  ///< first vertex (weight order) breaking the chi_f cap
    Rational witness_chi_f;
};

/// (x,l)-reducibility of A: w(A) >= w(V)/(x(x+1)^2) and chi_f(L_A(v)) <= l(1 - 1/(6(x+1)))
/// for every v in A.
inline ReducibleCheck is_reducible(const OrderedWeightedGraph& owg, std::span<const Vertex> a, const Rational& x,
                                   const Rational& l, const FractionalOptions& opts = {})
{
    if (a.empty())
        throw InvalidArgument("reducible sets are nonempty");
    ReducibleCheck r;
    r.weight_floor = owg.weights().total() / (x * (x + 1) * (x + 1));
    r.chi_f_cap = l * (1 - 1 / (6 * (x + 1)));
    r.weight_ok = owg.weights().weight_of(a) >= r.weight_floor;
    if (!r.weight_ok)
        return r;
    for (Vertex v : owg.ordered(a)) {
        auto left = owg.left_within(v, a);
        auto value = fractional_chromatic(induced(owg.graph(), left).graph, opts).value;
        if (value > r.chi_f_cap) {
            r.witness = v;
            r.witness_chi_f = value;
            return r;
        }
    }
    r.reducible = true;
    return r;
}

/// An optimal fractional coloring u_v of L_G(v) for every vertex, in original ids.
struct LeftColorings {
    std::vector<FractionalColoring> u;
    std::vector<Rational> t; ///< total weight of u_v, i.e. chi_f(L_G(v))
};

inline LeftColorings left_colorings(const OrderedWeightedGraph& owg, const FractionalOptions& opts = {})
{
    const Graph& g = owg.graph();
    LeftColorings out;
    out.u.resize(static_cast<std::size_t>(g.order()));
    out.t.resize(static_cast<std::size_t>(g.order()));
    for (Vertex v = 0; v < g.order(); ++v) {
        auto left = left_neighborhood(g, owg.order(), v);
        auto sub = induced(g, left);
        auto fr = fractional_chromatic(sub.graph, opts);
        for (auto& e : fr.coloring.entries) {
            for (auto& u : e.set)
                u = sub.to_parent[u];
            out.u[v].entries.push_back(std::move(e));
        }
        out.t[v] = fr.value;
    }
    return out;
}

struct TypePartition {
    std::vector<Vertex> a;
    std::vector<Vertex> type1;
    std::vector<Vertex> type2;
    std::vector<Rational> disjoint_weight; ///< per member of `a`, u-weight of sets missing A
};

/// v in A is type 1 when the u_v-weight of sets disjoint from A is at most t(v)/(6(x+1)).
/// An empty left neighborhood (t = 0) is type 1.
inline TypePartition classify_types(const OrderedWeightedGraph& owg, std::span<const Vertex> a, const Rational& x,
                                    const LeftColorings& lc)
{
    std::vector<char> in_a(static_cast<std::size_t>(owg.graph().order()), 0);
    for (Vertex v : a)
        in_a.at(static_cast<std::size_t>(v)) = 1;
    TypePartition p;
    p.a = owg.ordered(a);
    for (Vertex v : p.a) {
        Rational disjoint = 0;
        for (const auto& e : lc.u[v].entries)
            if (std::none_of(e.set.begin(), e.set.end(), [&](Vertex u) { return in_a[u] != 0; }))
                disjoint += e.weight;
        p.disjoint_weight.push_back(disjoint);
        (disjoint <= lc.t[v] / (6 * (x + 1)) ? p.type1 : p.type2).push_back(v);
    }
    return p;
}

/// A is (x+1)-principal in the ordered list rbar and |T2(A)| <= |A|/(x+1).
inline bool is_dense(const OrderedWeightedGraph& owg, std::span<const Vertex> a, std::span<const Vertex> rbar,
                     const Rational& x, const LeftColorings& lc)
{
    if (a.empty())
        throw InvalidArgument("dense sets are nonempty");
    if (!is_principal(a, rbar, x + 1))
        return false;
    auto types = classify_types(owg, a, x, lc);
    return Rational(static_cast<long long>(types.type2.size())) * (x + 1) <= static_cast<long long>(types.a.size());
}

/// Index i with probability weights[i] / sum(weights), decided exactly on a 53-bit draw.
inline std::size_t sample_weighted(std::span<const Rational> weights, Rng& rng)
{
    Rational total = 0;
    for (const auto& w : weights)
        total += w;
    if (total <= 0)
        throw InvalidArgument("cannot sample from zero total weight");
    Rational r = Rational(BigInt(rng() >> 11), BigInt(1) << 53) * total;
    Rational cumulative = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cumulative += weights[i];
        if (r < cumulative)
            return i;
    }
    return weights.size() - 1;
}

/// Starts from H0 (edges only inside R) and, for every v outside R in weight order, joins
/// v to an independent set of L_G(v) drawn with probability u_v(I)/t(v). Vertex v draws
/// from its own stream derived from (seed, v).
inline Graph random_attachment(const OrderedWeightedGraph& owg, std::span<const Vertex> r, const Graph& h0,
                               std::uint64_t seed, const LeftColorings& lc)
{
    const Graph& g = owg.graph();
    if (h0.order() != g.order())
        throw InvalidArgument("H0 must be given on the full vertex set");
    std::vector<char> in_r(static_cast<std::size_t>(g.order()), 0);
    for (Vertex v : r)
        in_r.at(static_cast<std::size_t>(v)) = 1;
    auto edges = h0.edges();
    for (auto [a, b] : edges)
        if (!in_r[a] || !in_r[b] || !g.adjacent(a, b))
            throw InvalidArgument("H0 edges must be edges of G inside R");
    for (Vertex v : owg.all()) {
        if (in_r[v] || lc.t[v] == 0)
            continue;
        const auto& entries = lc.u[v].entries;
        std::vector<Rational> weights;
        for (const auto& e : entries)
            weights.push_back(e.weight);
        auto rng = make_rng(seed, {static_cast<std::uint64_t>(v)});
        for (Vertex u : entries[sample_weighted(weights, rng)].set)
            edges.emplace_back(u, v);
    }
    Graph h = Graph::from_edges(g.order(), edges);
    if (!is_triangle_free(h))
        throw InvariantViolation("random attachment produced a triangle");
    return h;
}

/// e 6^(-x/(x+1)) (x+1)^(1/(x+1)).
inline double dense_probability_base(double x)
{
    if (!(x > 0.0))
        throw InvalidArgument("dense bound needs x > 0");
    return std::exp(1.0 - x / (x + 1.0) * std::log(6.0) + std::log(x + 1.0) / (x + 1.0));
}

inline bool dense_bound_holds(double x) { return dense_probability_base(x) < 0.5; }

/// ln C(floor(k(x+1)), k) < k + k ln(x+1).
inline bool stirling_bound_holds(int k, double x)
{
    double top = std::floor(k * (x + 1.0));
    return log_less(log_binomial(top, k), k + k * std::log(x + 1.0));
}

struct FamilyMember {
    std::vector<Vertex> set;
    Graph h;                 ///< triangle-free graph on `set`, local ids in ascending order of `set`
    Rational max_weight;     ///< its max independent weight
    Rational bound;          ///< w(A) / (x+1)
};

struct ExtractionOptions {
    std::vector<std::vector<Vertex>> extra_candidates; ///< tried after the built-in pool
    FractionalOptions fractional{};
    int max_depth = 64;
};

struct ExtractionCertificate {
    Graph h;
    bool triangle_free = false;
    Rational max_weight;            ///< exact max weight of an independent set of H
    std::vector<Vertex> max_set;
    Rational target;                ///< w(V) / x
    bool accepted = false;
    bool identity = false;          ///< H = G (l < 2 on a triangle-free graph)
    int attempts = 0;
    std::vector<FamilyMember> family;
    bool family_maximal = false;    ///< greedy over a candidate pool, never claimed maximal
    std::size_t h0_edges = 0;

    bool best_effort() const { return !accepted; }
};

namespace detail {

inline std::vector<std::vector<Vertex>> candidate_pool(const OrderedWeightedGraph& owg,
                                                       const std::vector<std::vector<Vertex>>& extra)
{
    const Graph& g = owg.graph();
    std::vector<std::vector<Vertex>> pool;
    std::set<std::vector<Vertex>> seen;
    auto add = [&](std::vector<Vertex> c) {
        std::sort(c.begin(), c.end());
        if (!c.empty() && seen.insert(c).second)
            pool.push_back(std::move(c));
    };
    for (Vertex v : owg.all()) {
        std::vector<Vertex> closed = g.neighbors(v);
        closed.push_back(v);
        auto ordered = owg.ordered(closed);
        for (std::size_t len = ordered.size(); len >= 1; --len)
            add({ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(len)});
    }
    for (const auto& c : extra)
        add(c);
    return pool;
}

// Inner extractions are keyed by (global vertex set, depth); x and l follow from depth.
using ExtractionMemo = std::map<std::pair<std::vector<Vertex>, int>, ExtractionCertificate>;

inline std::uint64_t inner_seed(std::uint64_t root, int depth, std::span<const Vertex> set)
{
    std::uint64_t s = derive_seed(root, {0x5eedULL, static_cast<std::uint64_t>(depth)});
    for (Vertex v : set)
        s = derive_seed(s, {static_cast<std::uint64_t>(v)});
    return s;
}

inline ExtractionCertificate extract(const OrderedWeightedGraph& owg, const Rational& x, const Rational& l, int budget,
                                     std::uint64_t seed, std::uint64_t root_seed, const ExtractionOptions& opts,
                                     int depth, std::span<const Vertex> to_global, ExtractionMemo& memo)
{
    const Graph& g = owg.graph();
    const auto& w = owg.weights();
    ExtractionCertificate cert;
    cert.target = w.total() / x;
    auto finish = [&](Graph h) {
        cert.h = std::move(h);
        cert.triangle_free = is_triangle_free(cert.h);
        if (!cert.triangle_free)
            throw InvariantViolation("extraction produced a triangle");
        auto best = max_weight_independent_set(cert.h, w.values());
        cert.max_weight = best.weight;
        cert.max_set = best.vertices;
    };

    if (l < 2 && is_triangle_free(g)) {
        cert.identity = true;
        finish(g);
        cert.accepted = cert.max_weight <= cert.target;
        return cert;
    }

    // Greedy disjoint family of reducible sets, each certified by a recursive extraction.
    std::vector<char> used(static_cast<std::size_t>(g.order()), 0);
    std::vector<Edge> h0_edges;
    std::vector<Vertex> r;
    if (depth < opts.max_depth) {
        Rational next_l = l * (1 - 1 / (6 * (x + 1)));
        for (const auto& cand : candidate_pool(owg, opts.extra_candidates)) {
            if (std::any_of(cand.begin(), cand.end(), [&](Vertex v) { return used[v] != 0; }))
                continue;
            if (!is_reducible(owg, cand, x, l, opts.fractional).reducible)
                continue;
            std::vector<Vertex> global;
            for (Vertex v : cand)
                global.push_back(to_global[v]);
            auto key = std::make_pair(global, depth + 1);
            auto hit = memo.find(key);
            if (hit == memo.end()) {
                auto sub = induced(g, cand);
                std::vector<Rational> sub_w;
                for (Vertex v : cand)
                    sub_w.push_back(w[v]);
                OrderedWeightedGraph sub_owg(sub.graph, VertexWeighting(std::move(sub_w)));
                auto inner = extract(sub_owg, x + 1, next_l, budget, inner_seed(root_seed, depth + 1, global), root_seed,
                                     opts, depth + 1, global, memo);
                hit = memo.emplace(std::move(key), std::move(inner)).first;
            }
            const auto& inner = hit->second;
            if (!inner.accepted)
                continue;
            for (Vertex v : cand)
                used[v] = 1;
            for (auto [a, b] : inner.h.edges())
                h0_edges.emplace_back(cand[a], cand[b]);
            r.insert(r.end(), cand.begin(), cand.end());
            cert.family.push_back({cand, inner.h, inner.max_weight, w.weight_of(cand) / (x + 1)});
        }
    }
    std::sort(r.begin(), r.end());
    Graph h0 = Graph::from_edges(g.order(), h0_edges);
    cert.h0_edges = h0.size();

    if (budget <= 0) {
        finish(h0);
        return cert;
    }
    auto lc = left_colorings(owg, opts.fractional);
    std::optional<ExtractionCertificate> best;
    for (int attempt = 0; attempt < budget; ++attempt) {
        cert.attempts = attempt + 1;
        finish(random_attachment(owg, r, h0, derive_seed(seed, {static_cast<std::uint64_t>(attempt)}), lc));
        if (cert.max_weight <= cert.target) {
            cert.accepted = true;
            return cert;
        }
        if (!best || cert.max_weight < best->max_weight)
            best = cert;
    }
    best->attempts = cert.attempts;
    return *best;
}

} // namespace detail

/// Searches for a triangle-free spanning subgraph H with every independent set of weight
/// at most w(V)/x. With l < 2 on a triangle-free graph, H = G. Otherwise a greedy family
/// of reducible sets is extracted recursively with (x+1, l(1 - 1/(6(x+1)))), and up to
/// `budget` random attachments complete H; the first H meeting the bound is accepted,
/// else the lightest found is returned flagged best-effort.
inline ExtractionCertificate extract_triangle_free(const OrderedWeightedGraph& owg, const Rational& x,
                                                   const Rational& l, int budget, std::uint64_t seed,
                                                   const ExtractionOptions& opts = {})
{
    if (x < 1 || l < 1)
        throw InvalidArgument("extraction needs x >= 1 and l >= 1");
    if (budget < 0)
        throw InvalidArgument("budget must be nonnegative");
    detail::ExtractionMemo memo;
    std::vector<Vertex> ids(static_cast<std::size_t>(owg.graph().order()));
    std::iota(ids.begin(), ids.end(), 0);
    return detail::extract(owg, x, l, budget, seed, seed, opts, 0, ids, memo);
}

/// Recomputes the certificate's claims from scratch.
inline bool certificate_consistent(const OrderedWeightedGraph& owg, const ExtractionCertificate& c)
{
    if (!is_spanning_subgraph(c.h, owg.graph()) || is_triangle_free(c.h) != c.triangle_free)
        return false;
    auto best = max_weight_independent_set(c.h, owg.weights().values());
    return best.weight == c.max_weight && owg.weights().weight_of(c.max_set) == c.max_weight &&
           is_independent(c.h, c.max_set) && (!c.accepted || c.max_weight <= c.target);
}

struct UnionPart {
    std::vector<Vertex> vertices; ///< ascending global ids
    Graph h;                      ///< on |vertices| local ids
    Rational bound;
};

struct UnionBoundResult {
    bool holds = false;
    Rational max_weight;
    Rational bound;
};

/// Every maximal independent set of the disjoint union of the parts weighs at most the
/// sum of the per-part bounds (checked by enumeration).
inline UnionBoundResult h0_union_bound_check(const std::vector<UnionPart>& parts, const VertexWeighting& w,
                                             const EnumerationOptions& enumeration = {})
{
    std::vector<Vertex> all;
    std::vector<Edge> edges;
    UnionBoundResult out;
    for (const auto& p : parts) {
        if (p.h.order() != static_cast<int>(p.vertices.size()))
            throw InvalidArgument("part graph order does not match its vertex list");
        for (auto [a, b] : p.h.edges())
            edges.emplace_back(p.vertices[a], p.vertices[b]);
        all.insert(all.end(), p.vertices.begin(), p.vertices.end());
        out.bound += p.bound;
    }
    std::vector<Vertex> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgument("union parts must be pairwise disjoint");
    // Relabel onto the union's own vertex set.
    std::vector<Edge> local;
    for (auto [a, b] : edges) {
        auto ia = std::lower_bound(sorted.begin(), sorted.end(), a) - sorted.begin();
        auto ib = std::lower_bound(sorted.begin(), sorted.end(), b) - sorted.begin();
        local.emplace_back(static_cast<Vertex>(ia), static_cast<Vertex>(ib));
    }
    Graph u = Graph::from_edges(static_cast<int>(sorted.size()), local);
    for (const auto& set : maximal_independent_sets(u, enumeration)) {
        Rational s = 0;
        for (Vertex v : set)
            s += w[sorted[v]];
        out.max_weight = std::max(out.max_weight, s);
    }
    out.holds = out.max_weight <= out.bound;
    return out;
}

/// Per-part bounds w(A)/(x+1).
inline UnionBoundResult h0_union_bound_check(std::vector<UnionPart> parts, const VertexWeighting& w,
                                             const Rational& x, const EnumerationOptions& enumeration = {})
{
    for (auto& p : parts)
        p.bound = w.weight_of(p.vertices) / (x + 1);
    return h0_union_bound_check(parts, w, enumeration);
}

} // namespace chroma
