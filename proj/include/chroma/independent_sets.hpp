#pragma once

#include "graph.hpp"
#include "rational.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace chroma {

using VertexSet = std::vector<Vertex>;

struct EnumerationOptions {
    int max_vertices = 30;
    std::size_t max_sets = 2'000'000;
};

/// All maximal independent sets (as ascending vertex lists), lexicographically sorted.
/// Bron-Kerbosch with pivoting on the complement graph.
inline std::vector<VertexSet> maximal_independent_sets(const Graph& g, const EnumerationOptions& opts = {})
{
    const int n = g.order();
    if (n > opts.max_vertices || n > 64)
        throw CapExceeded("maximal independent set enumeration limited to " +
                          std::to_string(std::min(opts.max_vertices, 64)) + " vertices, got " + std::to_string(n));
    if (n == 0)
        return {};
    auto adj = adjacency_masks(g);
    const std::uint64_t all = full_mask(n);
    std::vector<std::uint64_t> non_adj(adj.size());
    for (int v = 0; v < n; ++v)
        non_adj[v] = all & ~adj[v] & ~(std::uint64_t{1} << v);

    std::vector<std::uint64_t> found;
    auto recurse = [&](auto&& self, std::uint64_t r, std::uint64_t p, std::uint64_t x) -> void {
        if (p == 0 && x == 0) {
            if (found.size() >= opts.max_sets)
                throw CapExceeded("more than " + std::to_string(opts.max_sets) + " maximal independent sets");
            found.push_back(r);
            return;
        }
        int pivot = -1;
        int pivot_hits = -1;
        for (std::uint64_t px = p | x; px; px &= px - 1) {
            int u = std::countr_zero(px);
            int hits = std::popcount(p & non_adj[u]);
            if (hits > pivot_hits) {
                pivot = u;
                pivot_hits = hits;
            }
        }
        for (std::uint64_t cand = p & ~non_adj[pivot]; cand; cand &= cand - 1) {
            int v = std::countr_zero(cand);
            std::uint64_t bit = std::uint64_t{1} << v;
            self(self, r | bit, p & non_adj[v], x & non_adj[v]);
            p &= ~bit;
            x |= bit;
        }
    };
    recurse(recurse, 0, all, 0);

    std::vector<VertexSet> out;
    out.reserve(found.size());
    for (auto mask : found)
        out.push_back(mask_to_vertices(mask));
    std::sort(out.begin(), out.end());
    return out;
}

struct WeightedSet {
    VertexSet vertices;
    Rational weight;
};

namespace detail {

template <class W>
class MaxWeightSearch {
public:
    MaxWeightSearch(std::vector<std::uint64_t> adj, std::vector<W> weights)
        : adj_(std::move(adj)), w_(std::move(weights))
    {
    }

    std::uint64_t run(std::uint64_t candidates)
    {
        best_weight_ = W(-1);
        expand(0, W(0), candidates);
        return best_;
    }

private:
    // Greedy clique cover of P: an independent set takes at most one vertex per clique.
    W cover_bound(std::uint64_t p) const
    {
        W total = 0;
        while (p) {
            int v = std::countr_zero(p);
            std::uint64_t clique = std::uint64_t{1} << v;
            W heaviest = w_[v];
            std::uint64_t q = p & adj_[v];
            while (q) {
                int u = std::countr_zero(q);
                clique |= std::uint64_t{1} << u;
                if (w_[u] > heaviest)
                    heaviest = w_[u];
                q &= adj_[u];
            }
            total += heaviest;
            p &= ~clique;
        }
        return total;
    }

    void expand(std::uint64_t set, W weight, std::uint64_t p)
    {
        if (weight > best_weight_) {
            best_weight_ = weight;
            best_ = set;
        }
        while (p) {
            if (weight + cover_bound(p) <= best_weight_)
                return;
            int v = -1;
            for (std::uint64_t q = p; q; q &= q - 1) {
                int u = std::countr_zero(q);
                if (v < 0 || w_[u] > w_[v])
                    v = u;
            }
            std::uint64_t bit = std::uint64_t{1} << v;
            expand(set | bit, weight + w_[v], p & ~adj_[v] & ~bit);
            p &= ~bit;
        }
    }

    std::vector<std::uint64_t> adj_;
    std::vector<W> w_;
    std::uint64_t best_ = 0;
    W best_weight_{};
};

} // namespace detail

/// Exact maximum-weight independent set (n <= 64). Weights must be nonnegative.
/// Rationals are scaled to a common denominator; the search runs on 64-bit integers
/// when the scaled total fits and on arbitrary precision otherwise.
inline WeightedSet max_weight_independent_set(const Graph& g, std::span<const Rational> weights)
{
    const int n = g.order();
    if (static_cast<int>(weights.size()) != n)
        throw InvalidArgument("weight vector size does not match graph order");
    if (n == 0)
        return {{}, Rational(0)};
    auto adj = adjacency_masks(g);

    BigInt common = 1;
    for (const auto& w : weights) {
        if (w < 0)
            throw InvalidArgument("independent set weights must be nonnegative");
        common = boost::multiprecision::lcm(common, BigInt(denominator(w)));
    }
    std::vector<BigInt> scaled;
    scaled.reserve(weights.size());
    BigInt total = 0;
    for (const auto& w : weights) {
        scaled.push_back(numerator(w) * (common / denominator(w)));
        total += scaled.back();
    }

    std::uint64_t mask = 0;
    if (total < BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
        std::vector<std::int64_t> small;
        small.reserve(scaled.size());
        for (const auto& s : scaled)
            small.push_back(s.convert_to<std::int64_t>());
        mask = detail::MaxWeightSearch<std::int64_t>(std::move(adj), std::move(small)).run(full_mask(n));
    } else {
        mask = detail::MaxWeightSearch<BigInt>(std::move(adj), std::move(scaled)).run(full_mask(n));
    }
    WeightedSet out{mask_to_vertices(mask), Rational(0)};
    for (Vertex v : out.vertices)
        out.weight += weights[v];
    return out;
}

inline std::size_t independence_number(const Graph& g)
{
    std::vector<Rational> unit(static_cast<std::size_t>(g.order()), Rational(1));
    return max_weight_independent_set(g, unit).vertices.size();
}

/// Extends an independent set greedily (ascending index) to a maximal one.
inline VertexSet extend_to_maximal(const Graph& g, VertexSet set)
{
    std::vector<char> blocked(static_cast<std::size_t>(g.order()), 0);
    for (Vertex v : set) {
        blocked[v] = 1;
        for (Vertex u : g.neighbors(v))
            blocked[u] = 1;
    }
    for (Vertex v = 0; v < g.order(); ++v) {
        if (blocked[v])
            continue;
        set.push_back(v);
        blocked[v] = 1;
        for (Vertex u : g.neighbors(v))
            blocked[u] = 1;
    }
    std::sort(set.begin(), set.end());
    return set;
}

} // namespace chroma
