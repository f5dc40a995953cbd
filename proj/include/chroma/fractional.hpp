#pragma once

#include "graph.hpp"
#include "independent_sets.hpp"
#include "rational.hpp"
#include "simplex.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace chroma {

/// Weighted family of independent sets; certifies chi_f from above.
struct FractionalColoring {
    struct Entry {
        VertexSet set;
        Rational weight;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries;

    Rational total() const
    {
        Rational t = 0;
        for (const auto& e : entries)
            t += e.weight;
        return t;
    }

    bool operator==(const FractionalColoring&) const = default;
};

/// Nonnegative rational weight per vertex with its cached total.
class VertexWeighting {
public:
    VertexWeighting() = default;

    explicit VertexWeighting(std::vector<Rational> w) : w_(std::move(w))
    {
        for (const auto& x : w_) {
            if (x < 0)
                throw InvalidArgument("vertex weights must be nonnegative");
            total_ += x;
        }
    }

    static VertexWeighting uniform(int n, const Rational& value = 1)
    {
        return VertexWeighting(std::vector<Rational>(static_cast<std::size_t>(n), value));
    }

    int size() const noexcept { return static_cast<int>(w_.size()); }
    const Rational& operator[](Vertex v) const { return w_.at(static_cast<std::size_t>(v)); }
    const std::vector<Rational>& values() const noexcept { return w_; }
    const Rational& total() const noexcept { return total_; }

    Rational weight_of(std::span<const Vertex> set) const
    {
        Rational s = 0;
        for (Vertex v : set)
            s += (*this)[v];
        return s;
    }

    /// Non-increasing weight, ties by ascending vertex index.
    VertexOrder order() const
    {
        std::vector<Vertex> perm(w_.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), [&](Vertex a, Vertex b) { return w_[a] > w_[b]; });
        return VertexOrder(std::move(perm));
    }

    bool operator==(const VertexWeighting&) const = default;

private:
    std::vector<Rational> w_;
    Rational total_ = 0;
};

enum class FractionalMethod { enumerate, column_generation };

struct FractionalOptions {
    FractionalMethod method = FractionalMethod::column_generation;
    EnumerationOptions enumeration{};
    int max_vertices = 64; ///< cap for column generation (pricing is a bitmask search)
};

struct FractionalResult {
    Rational value;               ///< chi_f
    FractionalColoring coloring;  ///< optimal primal certificate
    std::vector<Rational> dual;   ///< optimal w >= 0 with w(I) <= 1 for all independent I, sum w = chi_f
    std::size_t columns = 0;      ///< LP columns at termination
};

namespace detail {

inline FractionalResult from_lp(std::span<const VertexSet> columns, const CoveringSolution& lp)
{
    FractionalResult out;
    out.value = lp.value;
    out.dual = lp.dual;
    out.columns = columns.size();
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (lp.primal[j] != 0)
            out.coloring.entries.push_back({columns[j], lp.primal[j]});
    std::sort(out.coloring.entries.begin(), out.coloring.entries.end(),
              [](const auto& a, const auto& b) { return a.set < b.set; });
    return out;
}

inline std::optional<FractionalResult> trivial_fractional(const Graph& g)
{
    const int n = g.order();
    if (n == 0)
        return FractionalResult{Rational(0), {}, {}, 0};
    if (g.size() == 0) {
        VertexSet all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        std::vector<Rational> dual(static_cast<std::size_t>(n), Rational(1, n));
        return FractionalResult{Rational(1), {{{all, Rational(1)}}}, dual, 1};
    }
    return std::nullopt;
}

} // namespace detail

/// Exact fractional chromatic number. The empty graph has chi_f = 0 and a nonempty
/// edgeless graph has chi_f = 1.
inline FractionalResult fractional_chromatic(const Graph& g, const FractionalOptions& opts = {})
{
    if (auto t = detail::trivial_fractional(g))
        return *t;
    const int n = g.order();

    if (opts.method == FractionalMethod::enumerate) {
        auto sets = maximal_independent_sets(g, opts.enumeration);
        std::vector<std::vector<int>> cols(sets.begin(), sets.end());
        auto lp = solve_covering_lp(static_cast<std::size_t>(n), cols);
        return detail::from_lp(sets, lp);
    }

    if (n > opts.max_vertices || n > 64)
        throw CapExceeded("column generation limited to " + std::to_string(std::min(opts.max_vertices, 64)) +
                          " vertices, got " + std::to_string(n));
    std::vector<VertexSet> columns;
    std::set<VertexSet> present;
    CoveringSimplex lp(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) {
        columns.push_back({v});
        present.insert({v});
        lp.add_column(columns.back());
    }
    while (true) {
        auto sol = lp.solve();
        auto priced = max_weight_independent_set(g, sol.dual);
        if (priced.weight <= 1)
            return detail::from_lp(columns, sol);
        auto column = extend_to_maximal(g, std::move(priced.vertices));
        if (!present.insert(column).second)
            throw InvariantViolation("column generation priced an existing column");
        columns.push_back(std::move(column));
        lp.add_column(columns.back());
    }
}

struct AlphaFResult {
    VertexWeighting weights; ///< w(V) = n and max_I w(I) = alpha_f
    Rational alpha_f;
};

/// Minimizer of max_I w(I) over w >= 0 with w(V) = n, from the optimal LP dual
/// scaled by n / chi_f. chi_f * alpha_f = n holds exactly.
inline AlphaFResult alpha_f_weights(const Graph& g, const FractionalOptions& opts = {})
{
    const int n = g.order();
    if (n == 0)
        return {VertexWeighting{}, Rational(0)};
    auto fr = fractional_chromatic(g, opts);
    Rational scale = Rational(n) / fr.value;
    std::vector<Rational> w;
    w.reserve(fr.dual.size());
    for (const auto& d : fr.dual)
        w.push_back(d * scale);
    return {VertexWeighting(std::move(w)), scale};
}

struct ColoringViolation {
    enum class Kind { not_independent, uncovered, bad_vertex, negative_weight } kind;
    std::size_t entry = 0; ///< offending entry (not_independent, bad_vertex, negative_weight)
    Vertex u = -1;         ///< offending vertex, or one endpoint of the edge
    Vertex v = -1;         ///< other endpoint (not_independent)
    Rational coverage;     ///< accumulated weight at u (uncovered)

    std::string describe() const
    {
        switch (kind) {
        case Kind::not_independent:
            return "entry " + std::to_string(entry) + " contains edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1);
        case Kind::uncovered:
            return "vertex " + std::to_string(u + 1) + " covered with weight " + to_display_string(coverage) + " < 1";
        case Kind::bad_vertex:
            return "entry " + std::to_string(entry) + " references vertex out of range";
        case Kind::negative_weight:
            return "entry " + std::to_string(entry) + " has negative weight";
        }
        return "unknown";
    }
};

/// Total weight on success, otherwise the first violated constraint.
inline std::variant<Rational, ColoringViolation> verify_fractional_coloring(const Graph& g, const FractionalColoring& fc)
{
    using K = ColoringViolation::Kind;
    std::vector<Rational> coverage(static_cast<std::size_t>(g.order()), Rational(0));
    for (std::size_t e = 0; e < fc.entries.size(); ++e) {
        const auto& entry = fc.entries[e];
        if (entry.weight < 0)
            return ColoringViolation{K::negative_weight, e, -1, -1, Rational(0)};
        for (Vertex v : entry.set)
            if (v < 0 || v >= g.order())
                return ColoringViolation{K::bad_vertex, e, v, -1, Rational(0)};
        for (std::size_t i = 0; i < entry.set.size(); ++i)
            for (std::size_t j = i + 1; j < entry.set.size(); ++j)
                if (entry.set[i] == entry.set[j] || g.adjacent(entry.set[i], entry.set[j]))
                    return ColoringViolation{K::not_independent, e, entry.set[i], entry.set[j], Rational(0)};
        for (Vertex v : entry.set)
            coverage[v] += entry.weight;
    }
    for (Vertex v = 0; v < g.order(); ++v)
        if (coverage[v] < 1)
            return ColoringViolation{K::uncovered, 0, v, -1, coverage[v]};
    return fc.total();
}

/// One line per entry: `w <num>/<den> : v1 v2 ...` with 1-based vertices.
inline void write_coloring(std::ostream& out, const FractionalColoring& fc)
{
    for (const auto& e : fc.entries) {
        out << "w " << to_fraction_string(e.weight) << " :";
        for (Vertex v : e.set)
            out << ' ' << (v + 1);
        out << '\n';
    }
}

inline FractionalColoring read_coloring(std::istream& in)
{
    FractionalColoring fc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tokens(line);
        std::string tag;
        if (!(tokens >> tag))
            continue;
        if (tag != "w")
            throw ParseError(line_no, "expected 'w <num>/<den> : vertices'");
        std::string weight;
        std::string colon;
        if (!(tokens >> weight >> colon) || colon != ":" || weight.find('/') == std::string::npos)
            throw ParseError(line_no, "expected 'w <num>/<den> : vertices'");
        FractionalColoring::Entry entry;
        try {
            entry.weight = parse_rational(weight);
        } catch (const InvalidArgument& e) {
            throw ParseError(line_no, e.what());
        }
        long long v = 0;
        while (tokens >> v) {
            if (v < 1)
                throw ParseError(line_no, "vertices are 1-based");
            entry.set.push_back(static_cast<Vertex>(v - 1));
        }
        if (!tokens.eof())
            throw ParseError(line_no, "malformed vertex list");
        fc.entries.push_back(std::move(entry));
    }
    return fc;
}

} // namespace chroma
