#pragma once

#include "errors.hpp"
#include "random.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chroma {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Immutable undirected simple graph on vertices 0..n-1 with sorted adjacency lists.
class Graph {
public:
    Graph() = default;

    /// Edgeless graph on n vertices.
    explicit Graph(int n) : adj_(static_cast<std::size_t>(check_order(n))) {}

    /// Duplicate edges (in either orientation) are merged; self-loops and
    /// out-of-range endpoints are rejected.
    static Graph from_edges(int n, std::span<const Edge> edges)
    {
        Graph g(n);
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw InvalidArgument("edge endpoint out of range: " + std::to_string(u) + "-" + std::to_string(v));
            if (u == v)
                throw InvalidArgument("self-loop at vertex " + std::to_string(u));
            g.adj_[u].push_back(v);
            g.adj_[v].push_back(u);
        }
        std::size_t degree_sum = 0;
        for (auto& nb : g.adj_) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
            degree_sum += nb.size();
        }
        g.size_ = degree_sum / 2;
        return g;
    }

    static Graph from_edges(int n, std::initializer_list<Edge> edges)
    {
        return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
    }

    int order() const noexcept { return static_cast<int>(adj_.size()); }
    std::size_t size() const noexcept { return size_; }

    const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(static_cast<std::size_t>(v)); }
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

    int max_degree() const
    {
        int d = 0;
        for (const auto& nb : adj_)
            d = std::max(d, static_cast<int>(nb.size()));
        return d;
    }

    bool adjacent(Vertex u, Vertex v) const
    {
        const auto& nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    /// Edges (u, v) with u < v in lexicographic order.
    std::vector<Edge> edges() const
    {
        std::vector<Edge> out;
        out.reserve(size_);
        for (Vertex u = 0; u < order(); ++u)
            for (Vertex v : adj_[u])
                if (u < v)
                    out.emplace_back(u, v);
        return out;
    }

    bool operator==(const Graph& other) const = default;

private:
    static int check_order(int n)
    {
        if (n < 0)
            throw InvalidArgument("negative vertex count");
        return n;
    }

    std::vector<std::vector<Vertex>> adj_;
    std::size_t size_ = 0;
};

/// Bitmask adjacency for algorithms restricted to n <= 64.
inline std::vector<std::uint64_t> adjacency_masks(const Graph& g)
{
    if (g.order() > 64)
        throw CapExceeded("bitmask algorithms support at most 64 vertices, got " + std::to_string(g.order()));
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(g.order()), 0);
    for (Vertex v = 0; v < g.order(); ++v)
        for (Vertex u : g.neighbors(v))
            masks[v] |= std::uint64_t{1} << u;
    return masks;
}

inline std::uint64_t full_mask(int n)
{
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

inline std::vector<Vertex> mask_to_vertices(std::uint64_t mask)
{
    std::vector<Vertex> out;
    while (mask) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

/// Linear order v_1 < ... < v_n given by a permutation of 0..n-1.
class VertexOrder {
public:
    VertexOrder() = default;

    explicit VertexOrder(std::vector<Vertex> perm) : perm_(std::move(perm)), rank_(perm_.size(), -1)
    {
        for (std::size_t i = 0; i < perm_.size(); ++i) {
            Vertex v = perm_[i];
            if (v < 0 || static_cast<std::size_t>(v) >= perm_.size() || rank_[v] != -1)
                throw InvalidArgument("vertex order is not a permutation");
            rank_[v] = static_cast<int>(i);
        }
    }

    static VertexOrder identity(int n)
    {
        std::vector<Vertex> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        return VertexOrder(std::move(p));
    }

    int size() const noexcept { return static_cast<int>(perm_.size()); }
    const std::vector<Vertex>& perm() const noexcept { return perm_; }
    Vertex at(int position) const { return perm_.at(static_cast<std::size_t>(position)); }
    int rank(Vertex v) const { return rank_.at(static_cast<std::size_t>(v)); }
    bool before(Vertex u, Vertex v) const { return rank(u) < rank(v); }

private:
    std::vector<Vertex> perm_;
    std::vector<int> rank_;
};

struct InducedSubgraph {
    Graph graph;
    std::vector<Vertex> to_parent; ///< local index -> vertex of the parent graph
};

/// Subgraph induced by `vertices`; local labels follow ascending parent index.
inline InducedSubgraph induced(const Graph& g, std::span<const Vertex> vertices)
{
    std::vector<Vertex> sorted(vertices.begin(), vertices.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> local(static_cast<std::size_t>(g.order()), -1);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        Vertex v = sorted[i];
        if (v < 0 || v >= g.order())
            throw InvalidArgument("vertex " + std::to_string(v) + " out of range for induced subgraph");
        local[v] = static_cast<int>(i);
    }
    std::vector<Edge> edges;
    for (Vertex v : sorted)
        for (Vertex u : g.neighbors(v))
            if (v < u && local[u] >= 0)
                edges.emplace_back(local[v], local[u]);
    return {Graph::from_edges(static_cast<int>(sorted.size()), edges), std::move(sorted)};
}

/// { u : uv in E, u before v }, ascending by vertex index.
inline std::vector<Vertex> left_neighborhood(const Graph& g, const VertexOrder& ord, Vertex v)
{
    if (ord.size() != g.order())
        throw InvalidArgument("order size does not match graph");
    std::vector<Vertex> out;
    for (Vertex u : g.neighbors(v))
        if (ord.before(u, v))
            out.push_back(u);
    return out;
}

/// Shortest cycle length; empty when the graph is a forest.
struct Girth {
    std::optional<int> length;

    bool infinite() const noexcept { return !length.has_value(); }
    bool exceeds(int g) const noexcept { return !length || *length > g; }
    std::string str() const { return length ? std::to_string(*length) : std::string("inf"); }
    bool operator==(const Girth&) const = default;
};

inline Girth girth(const Graph& g)
{
    const int n = g.order();
    int best = std::numeric_limits<int>::max();
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> parent(static_cast<std::size_t>(n));
    for (Vertex root = 0; root < n; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        std::queue<Vertex> q;
        dist[root] = 0;
        parent[root] = -1;
        q.push(root);
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop();
            if (2 * dist[u] + 1 >= best)
                break;
            for (Vertex v : g.neighbors(u)) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    q.push(v);
                } else if (parent[u] != v) {
                    best = std::min(best, dist[u] + dist[v] + 1);
                }
            }
        }
    }
    if (best == std::numeric_limits<int>::max())
        return {};
    return {best};
}

using Triangle = std::array<Vertex, 3>;

/// All triangles as ascending triples, lexicographically sorted.
inline std::vector<Triangle> triangles(const Graph& g)
{
    std::vector<Triangle> out;
    for (Vertex u = 0; u < g.order(); ++u) {
        const auto& nu = g.neighbors(u);
        for (Vertex v : nu) {
            if (v <= u)
                continue;
            const auto& nv = g.neighbors(v);
            auto it_u = std::upper_bound(nu.begin(), nu.end(), v);
            auto it_v = std::upper_bound(nv.begin(), nv.end(), v);
            while (it_u != nu.end() && it_v != nv.end()) {
                if (*it_u < *it_v)
                    ++it_u;
                else if (*it_v < *it_u)
                    ++it_v;
                else {
                    out.push_back({u, v, *it_u});
                    ++it_u;
                    ++it_v;
                }
            }
        }
    }
    return out;
}

inline bool is_triangle_free(const Graph& g)
{
    return triangles(g).empty();
}

inline bool is_independent(const Graph& g, std::span<const Vertex> set)
{
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j)
            if (g.adjacent(set[i], set[j]))
                return false;
    return true;
}

inline bool is_clique(const Graph& g, std::span<const Vertex> set)
{
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j)
            if (set[i] == set[j] || !g.adjacent(set[i], set[j]))
                return false;
    return true;
}

/// True when every edge of `sub` is an edge of `super` and the vertex counts match.
inline bool is_spanning_subgraph(const Graph& sub, const Graph& super)
{
    if (sub.order() != super.order())
        return false;
    for (auto [u, v] : sub.edges())
        if (!super.adjacent(u, v))
            return false;
    return true;
}

namespace generate {

inline Graph cycle(int n)
{
    if (n < 3)
        throw InvalidArgument("cycle needs at least 3 vertices");
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        e.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, e);
}

inline Graph path(int n)
{
    if (n < 1)
        throw InvalidArgument("path needs at least 1 vertex");
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i)
        e.emplace_back(i, i + 1);
    return Graph::from_edges(n, e);
}

inline Graph complete(int n)
{
    if (n < 1)
        throw InvalidArgument("complete graph needs at least 1 vertex");
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

inline Graph complete_bipartite(int a, int b)
{
    if (a < 1 || b < 1)
        throw InvalidArgument("complete bipartite graph needs nonempty sides");
    std::vector<Edge> e;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j)
            e.emplace_back(i, a + j);
    return Graph::from_edges(a + b, e);
}

/// Vertices v_i (0..n-1), shadows u_i (n..2n-1), apex 2n.
inline Graph mycielskian(const Graph& base)
{
    const int n = base.order();
    std::vector<Edge> e;
    for (auto [a, b] : base.edges()) {
        e.emplace_back(a, b);
        e.emplace_back(n + a, b);
        e.emplace_back(n + b, a);
    }
    for (int i = 0; i < n; ++i)
        e.emplace_back(n + i, 2 * n);
    return Graph::from_edges(2 * n + 1, e);
}

/// G(n, p): each pair (i < j) in lexicographic order kept with probability p.
inline Graph random(int n, double p, std::uint64_t seed)
{
    if (n < 1)
        throw InvalidArgument("random graph needs at least 1 vertex");
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidArgument("edge probability must lie in [0, 1]");
    Rng rng = make_rng(seed, {0x6e70ULL});
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (bernoulli(rng, p))
                e.emplace_back(i, j);
    return Graph::from_edges(n, e);
}

} // namespace generate

} // namespace chroma
