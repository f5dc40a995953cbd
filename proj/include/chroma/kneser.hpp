#pragma once

#include "errors.hpp"
#include "graph.hpp"
#include "logmath.hpp"
#include "rational.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace chroma {

inline std::uint64_t binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (r > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

/// Colex ranking of k-subsets of {0..n-1}, stored as bitmasks (n <= 64).
class KneserId {
public:
    KneserId(int n, int k) : n_(n), k_(k)
    {
        if (k <= 0 || k > n || n > 64)
            throw InvalidArgument("Kneser parameters need 0 < k <= n <= 64");
    }

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    std::uint64_t count() const { return binomial(n_, k_); }

    /// Sum over sorted elements c_0 < ... < c_{k-1} of C(c_i, i+1).
    std::uint64_t rank(std::uint64_t subset) const
    {
        if (std::popcount(subset) != k_ || (n_ < 64 && (subset >> n_) != 0))
            throw InvalidArgument("not a " + std::to_string(k_) + "-subset of the ground set");
        std::uint64_t r = 0;
        int i = 0;
        for (auto s = subset; s; s &= s - 1)
            r += binomial(std::countr_zero(s), ++i);
        return r;
    }

    std::uint64_t unrank(std::uint64_t r) const
    {
        std::uint64_t subset = 0;
        int c = n_ - 1;
        for (int i = k_; i >= 1; --i) {
            while (binomial(c, i) > r)
                --c;
            subset |= std::uint64_t{1} << c;
            r -= binomial(c, i);
            --c;
        }
        return subset;
    }

    /// "{1,3,5}" with 1-based elements.
    std::string label(std::uint64_t r) const
    {
        std::string out = "{";
        bool first = true;
        for (auto s = unrank(r); s; s &= s - 1) {
            if (!first)
                out += ',';
            out += std::to_string(std::countr_zero(s) + 1);
            first = false;
        }
        return out + "}";
    }

private:
    int n_;
    int k_;
};

struct KneserOptions {
    std::uint64_t max_vertices = 5000;
};

/// KG(n, k): vertex i is the i-th k-subset in colex order; adjacent iff disjoint.
inline Graph kneser(int n, int k, const KneserOptions& opts = {})
{
    KneserId id(n, k);
    std::uint64_t count = id.count();
    if (count > opts.max_vertices)
        throw CapExceeded("KG(" + std::to_string(n) + "," + std::to_string(k) + ") has " + std::to_string(count) +
                          " vertices, cap is " + std::to_string(opts.max_vertices));
    std::vector<std::uint64_t> subsets(count);
    for (std::uint64_t r = 0; r < count; ++r)
        subsets[r] = id.unrank(r);
    std::vector<Edge> edges;
    for (std::uint64_t a = 0; a < count; ++a)
        for (std::uint64_t b = a + 1; b < count; ++b)
            if ((subsets[a] & subsets[b]) == 0)
                edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
    return Graph::from_edges(static_cast<int>(count), edges);
}

inline std::vector<std::string> kneser_labels(int n, int k)
{
    KneserId id(n, k);
    std::vector<std::string> out;
    for (std::uint64_t r = 0; r < id.count(); ++r)
        out.push_back(id.label(r));
    return out;
}

/// A base graph placed inside a host: base vertex v owns the host vertices classes[v].
struct BlowupEmbedding {
    Graph base;
    Graph host;
    std::vector<std::vector<Vertex>> classes;
    int power = 0;
};

struct BlowupResult {
    Graph graph;
    BlowupEmbedding embedding;
};

/// G^(m): base vertex v becomes the independent set {v*m, ..., v*m + m - 1}.
inline BlowupResult blow_up(const Graph& g, int m)
{
    if (m < 1)
        throw InvalidArgument("blow-up power must be at least 1");
    std::vector<Edge> edges;
    edges.reserve(g.size() * static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (auto [a, b] : g.edges())
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                edges.emplace_back(a * m + i, b * m + j);
    Graph host = Graph::from_edges(g.order() * m, edges);
    std::vector<std::vector<Vertex>> classes(static_cast<std::size_t>(g.order()));
    for (Vertex v = 0; v < g.order(); ++v)
        for (int i = 0; i < m; ++i)
            classes[v].push_back(v * m + i);
    return {host, {g, host, std::move(classes), m}};
}

struct BlowupViolation {
    enum class Kind { class_count, class_size, out_of_range, overlap, missing_edge } kind;
    Vertex base_u = -1;
    Vertex base_v = -1;
    Vertex host_u = -1;
    Vertex host_v = -1;

    std::string describe() const
    {
        switch (kind) {
        case Kind::class_count:
            return "number of classes differs from base order";
        case Kind::class_size:
            return "class of base vertex " + std::to_string(base_u) + " has wrong size";
        case Kind::out_of_range:
            return "class of base vertex " + std::to_string(base_u) + " has host vertex out of range";
        case Kind::overlap:
            return "host vertex " + std::to_string(host_u) + " lies in classes of " + std::to_string(base_u) + " and " +
                   std::to_string(base_v);
        case Kind::missing_edge:
            return "base edge " + std::to_string(base_u) + "-" + std::to_string(base_v) + " lacks host edge " +
                   std::to_string(host_u) + "-" + std::to_string(host_v);
        }
        return "unknown";
    }
};

/// Classes pairwise disjoint, each of size `power`, and every cross pair over a base
/// edge a host edge. Returns the first violation found.
inline std::optional<BlowupViolation> verify_blowup_containment(const BlowupEmbedding& e)
{
    using K = BlowupViolation::Kind;
    if (static_cast<int>(e.classes.size()) != e.base.order())
        return BlowupViolation{K::class_count, -1, -1, -1, -1};
    std::vector<Vertex> owner(static_cast<std::size_t>(e.host.order()), -1);
    for (Vertex v = 0; v < e.base.order(); ++v) {
        const auto& cls = e.classes[v];
        if (static_cast<int>(cls.size()) != e.power)
            return BlowupViolation{K::class_size, v, -1, -1, -1};
        for (Vertex h : cls) {
            if (h < 0 || h >= e.host.order())
                return BlowupViolation{K::out_of_range, v, -1, -1, -1};
            if (owner[h] >= 0)
                return BlowupViolation{K::overlap, owner[h], v, h, -1};
            owner[h] = v;
        }
    }
    for (auto [a, b] : e.base.edges())
        for (Vertex x : e.classes[a])
            for (Vertex y : e.classes[b])
                if (!e.host.adjacent(x, y))
                    return BlowupViolation{K::missing_edge, a, b, x, y};
    return std::nullopt;
}

/// Power of the KG(n,k) blow-up inside KG(nt, kt - x) produced by kgbu_embedding.
inline std::uint64_t kgbu_power(int k, int t, int x)
{
    if (x < t)
        return binomial(k * t, x);
    if (x == t)
        return binomial(k * t, x) - static_cast<std::uint64_t>(k);
    return binomial(k * (t - 1), x);
}

struct KgbuOptions {
    std::uint64_t max_host_vertices = 5000;
};

/// Explicit blow-up of KG(n,k) inside KG(nt, kt-x). The ground set {0..nt-1} is cut
/// into n blocks of t consecutive elements; base vertex S owns the kt elements of its
/// blocks, and its class is every (kt-x)-subset of them obtained by deleting x elements:
///   x <  t : any x elements                     -> C(kt, x)
///   x == t : any x elements except a full block -> C(kt, x) - k
///   x >  t : only among the first t-1 of a block -> C(k(t-1), x)
/// Each block of S keeps an element, so a class member determines S; the result is
/// checked with verify_blowup_containment before it is returned.
inline BlowupEmbedding kgbu_embedding(int n, int k, int t, int x, const KgbuOptions& opts = {})
{
    if (!(0 < k && k < n) || t < 1 || x < 0 || x >= k * t)
        throw InvalidArgument("kgbu needs 0 < k < n, t >= 1 and 0 <= x < kt");
    if (n * t > 64)
        throw CapExceeded("host ground set nt must be at most 64");
    if (kgbu_power(k, t, x) == 0)
        throw InvalidArgument("kgbu power is zero: fewer than x removable elements");
    KneserId base_id(n, k);
    KneserId host_id(n * t, k * t - x);
    if (host_id.count() > opts.max_host_vertices || base_id.count() > opts.max_host_vertices)
        throw CapExceeded("KG(" + std::to_string(n * t) + "," + std::to_string(k * t - x) + ") exceeds host cap");

    BlowupEmbedding e;
    e.base = kneser(n, k, {opts.max_host_vertices});
    e.host = kneser(n * t, k * t - x, {opts.max_host_vertices});
    e.power = static_cast<int>(kgbu_power(k, t, x));
    e.classes.resize(base_id.count());

    for (std::uint64_t r = 0; r < base_id.count(); ++r) {
        std::uint64_t s = base_id.unrank(r);
        std::uint64_t block_union = 0;
        std::uint64_t removable = 0;
        std::vector<std::uint64_t> blocks;
        for (auto q = s; q; q &= q - 1) {
            int b = std::countr_zero(q);
            std::uint64_t block = ((std::uint64_t{1} << t) - 1) << (b * t);
            blocks.push_back(block);
            block_union |= block;
            removable |= x > t ? block & ~(std::uint64_t{1} << (b * t + t - 1)) : block;
        }
        std::vector<Vertex> pool = mask_to_vertices(removable);
        // Enumerate x-subsets of the removable pool in lexicographic order.
        std::vector<int> pick(static_cast<std::size_t>(x));
        for (int i = 0; i < x; ++i)
            pick[i] = i;
        while (true) {
            std::uint64_t removed = 0;
            for (int i : pick)
                removed |= std::uint64_t{1} << pool[i];
            bool full_block = false;
            if (x == t)
                for (auto block : blocks)
                    full_block = full_block || removed == block;
            if (!full_block)
                e.classes[r].push_back(static_cast<Vertex>(host_id.rank(block_union & ~removed)));
            int i = x - 1;
            while (i >= 0 && pick[i] == static_cast<int>(pool.size()) - x + i)
                --i;
            if (i < 0)
                break;
            ++pick[i];
            for (int j = i + 1; j < x; ++j)
                pick[j] = pick[j - 1] + 1;
        }
        std::sort(e.classes[r].begin(), e.classes[r].end());
    }
    if (auto bad = verify_blowup_containment(e))
        throw InvariantViolation("kgbu construction failed verification: " + bad->describe());
    return e;
}

/// `class <base-vertex> : <host vertices...>` per line, 1-based.
inline void write_embedding(std::ostream& out, const BlowupEmbedding& e)
{
    for (std::size_t v = 0; v < e.classes.size(); ++v) {
        out << "class " << (v + 1) << " :";
        for (Vertex h : e.classes[v])
            out << ' ' << (h + 1);
        out << '\n';
    }
}

/// Parameters of the Kneser-graph corollary for KG(2n, n - 2x) with t = x/k.
struct KneserEHParams {
    int k = 0;
    int g = 0;
    int x = 0;
    int n = 0;
    double t = 0;                ///< x/k as used (rounded down when non-integral)
    bool t_rounded = false;
    Rational z;                  ///< n/x = 2 + 2z
    double base_top = 0;         ///< (n-x)(t-1)/t, top of the power binomial (rounded down)
    bool base_top_rounded = false;
    double log_m = 0;            ///< ln C(base_top, x)
    double log_delta = 0;        ///< ln of ((n+x)/t)^(2x/t) = (nk/x + k)^(2k)
    double log_required = 0;     ///< ln k(k Delta)^(2g-4)
    bool branch = false;         ///< n > x / (1/2 - 1/(2k))
    bool x_above_k_squared = false;
    bool ineq7 = false;          ///< (n-x)/x * (t-1)/t >= 1 + z
    bool ineq8 = false;          ///< 3 + 2z < (1+z)^(x/2)
    bool ineq9 = false;          ///< k^(2g(2k+1)) < (1+z)^(x/2)
    bool power_sufficient = false; ///< m >= k(k Delta)^(2g-4)
};

/// Evaluates the corollary's parameter chain in log space. Non-integral x/k is rounded
/// down, which makes (t-1)/t and the binomial top smaller, i.e. conservative.
inline KneserEHParams eh_kneser_params(int k, int g, int x, int n)
{
    if (k < 1 || g < 1 || x < 1 || n < 1)
        throw InvalidArgument("kneser-params needs positive integers");
    KneserEHParams p;
    p.k = k;
    p.g = g;
    p.x = x;
    p.n = n;
    p.t = std::floor(static_cast<double>(x) / k);
    p.t_rounded = x % k != 0;
    p.z = (Rational(n, x) - 2) / 2;
    double z = to_double(p.z);

    double top = p.t > 0 ? (static_cast<double>(n) - x) * (p.t - 1) / p.t : 0.0;
    p.base_top = std::floor(top);
    p.base_top_rounded = p.base_top != top;
    p.log_m = p.base_top >= x ? log_binomial(p.base_top, x) : -std::numeric_limits<double>::infinity();
    p.log_delta = 2.0 * k * std::log(static_cast<double>(n) * k / x + k);
    p.log_required = std::log(static_cast<double>(k)) + (2.0 * g - 4) * (std::log(static_cast<double>(k)) + p.log_delta);

    // branch: n (1/2 - 1/(2k)) > x, i.e. n (k - 1) > 2kx
    p.branch = static_cast<long long>(n) * (k - 1) > 2LL * k * x;
    p.x_above_k_squared = x > k * k;
    double lhs7 = p.t > 0 ? (static_cast<double>(n) - x) / x * (p.t - 1) / p.t : 0.0;
    p.ineq7 = z > -1 && lhs7 >= 1 + z - log_tolerance;
    double log_rhs = z > -1 ? 0.5 * x * std::log1p(z) : -std::numeric_limits<double>::infinity();
    p.ineq8 = log_less(std::log(3 + 2 * z), log_rhs);
    p.ineq9 = log_less(2.0 * g * (2 * k + 1) * std::log(static_cast<double>(k)), log_rhs);
    p.power_sufficient = log_leq(p.log_required, p.log_m);
    return p;
}

} // namespace chroma
