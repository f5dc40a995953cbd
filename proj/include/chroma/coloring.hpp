#pragma once

#include "graph.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace chroma {

struct ColoringOptions {
    int max_vertices = 64; ///< exact solver cap; bitmask representation tops out at 64
};

struct ColoringResult {
    int chromatic_number = 0;
    std::vector<int> colors; ///< certificate: proper coloring using exactly chromatic_number colors
};

inline bool is_proper_coloring(const Graph& g, const std::vector<int>& colors)
{
    if (static_cast<int>(colors.size()) != g.order())
        return false;
    for (auto [u, v] : g.edges())
        if (colors[u] == colors[v])
            return false;
    return true;
}

namespace detail {

class CliqueSearch {
public:
    explicit CliqueSearch(const std::vector<std::uint64_t>& adj) : adj_(adj) {}

    std::uint64_t run(std::uint64_t candidates)
    {
        expand(0, candidates);
        return best_;
    }

private:
    // Greedy coloring of the candidate set bounds the clique that can still be added.
    int color_bound(std::uint64_t p) const
    {
        int colors = 0;
        while (p) {
            ++colors;
            std::uint64_t q = p;
            while (q) {
                int v = std::countr_zero(q);
                q &= ~adj_[v] & ~(std::uint64_t{1} << v);
                p &= ~(std::uint64_t{1} << v);
            }
        }
        return colors;
    }

    void expand(std::uint64_t clique, std::uint64_t p)
    {
        if (p == 0) {
            if (std::popcount(clique) > std::popcount(best_))
                best_ = clique;
            return;
        }
        if (std::popcount(clique) + color_bound(p) <= std::popcount(best_))
            return;
        while (p) {
            if (std::popcount(clique) + std::popcount(p) <= std::popcount(best_))
                return;
            int v = std::countr_zero(p);
            std::uint64_t bit = std::uint64_t{1} << v;
            expand(clique | bit, p & adj_[v]);
            p &= ~bit;
        }
    }

    const std::vector<std::uint64_t>& adj_;
    std::uint64_t best_ = 0;
};

class DsaturSearch {
public:
    DsaturSearch(const Graph& g, std::vector<std::uint64_t> adj)
        : n_(g.order()), adj_(std::move(adj)), color_(static_cast<std::size_t>(n_), -1),
          saturation_(static_cast<std::size_t>(n_), 0)
    {
    }

    ColoringResult run(std::uint64_t clique)
    {
        lower_bound_ = std::popcount(clique);
        best_ = n_ + 1;
        int used = 0;
        int colored = 0;
        for (Vertex v : mask_to_vertices(clique)) {
            assign(v, used++);
            ++colored;
        }
        search(colored, used);
        return {best_, best_colors_};
    }

private:
    void assign(Vertex v, int c)
    {
        color_[v] = c;
        for (std::uint64_t nb = adj_[v]; nb; nb &= nb - 1) {
            int u = std::countr_zero(nb);
            std::uint64_t bit = std::uint64_t{1} << c;
            if (color_[u] < 0 && !(saturation_[u] & bit)) {
                saturation_[u] |= bit;
                trail_.push_back(u);
            }
        }
    }

    Vertex select() const
    {
        Vertex best = -1;
        int best_sat = -1;
        int best_deg = -1;
        for (Vertex v = 0; v < n_; ++v) {
            if (color_[v] >= 0)
                continue;
            int sat = std::popcount(saturation_[v]);
            int deg = 0;
            for (std::uint64_t nb = adj_[v]; nb; nb &= nb - 1)
                deg += color_[std::countr_zero(nb)] < 0;
            if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
                best = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        return best;
    }

    void search(int colored, int used)
    {
        if (used >= best_ || best_ == lower_bound_)
            return;
        if (colored == n_) {
            best_ = used;
            best_colors_ = color_;
            return;
        }
        Vertex v = select();
        int limit = std::min(used + 1, best_ - 1);
        for (int c = 0; c < limit; ++c) {
            if (saturation_[v] & (std::uint64_t{1} << c))
                continue;
            std::size_t mark = trail_.size();
            assign(v, c);
            search(colored + 1, std::max(used, c + 1));
            while (trail_.size() > mark) {
                saturation_[trail_.back()] &= ~(std::uint64_t{1} << c);
                trail_.pop_back();
            }
            color_[v] = -1;
            if (best_ == lower_bound_)
                return;
        }
    }

    int n_;
    std::vector<std::uint64_t> adj_;
    std::vector<int> color_;
    std::vector<std::uint64_t> saturation_;
    std::vector<Vertex> trail_;
    int lower_bound_ = 0;
    int best_ = 0;
    std::vector<int> best_colors_;
};

} // namespace detail

/// Vertex set of a maximum clique (n <= 64).
inline std::vector<Vertex> maximum_clique(const Graph& g)
{
    auto adj = adjacency_masks(g);
    detail::CliqueSearch search(adj);
    return mask_to_vertices(search.run(full_mask(g.order())));
}

/// Exact chromatic number with a certificate coloring.
inline ColoringResult chromatic_number(const Graph& g, const ColoringOptions& opts = {})
{
    if (g.order() > opts.max_vertices || g.order() > 64)
        throw CapExceeded("exact chromatic number limited to " + std::to_string(std::min(opts.max_vertices, 64)) +
                          " vertices, got " + std::to_string(g.order()));
    if (g.order() == 0)
        return {0, {}};
    auto adj = adjacency_masks(g);
    std::uint64_t clique = detail::CliqueSearch(adj).run(full_mask(g.order()));
    detail::DsaturSearch search(g, std::move(adj));
    return search.run(clique);
}

} // namespace chroma
