#pragma once

#include "errors.hpp"
#include "rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace chroma {

/// Optimal primal/dual pair of the covering LP
///   minimize sum_j y_j  subject to  sum_{j : i in column j} y_j >= 1 for every row i,  y >= 0.
struct CoveringSolution {
    Rational value;
    std::vector<Rational> primal; ///< y_j per column
    std::vector<Rational> dual;   ///< w_i per row; w >= 0 and w(column) <= 1 for every column
    std::size_t pivots = 0;
};

/// Exact simplex over rationals on the covering LP, with columns addable after a solve.
///
/// The first solve is a dual simplex: the all-surplus basis is dual feasible because
/// every cost is 1, so no phase one is needed. Columns added afterwards keep the basis
/// primal feasible, and the primal simplex restores optimality. Both phases use
/// Bland's rule, which rules out cycling.
///
/// Tableau layout: surplus variables occupy indices 0..rows-1, y columns follow.
class CoveringSimplex {
public:
    CoveringSimplex(std::size_t rows, std::span<const std::vector<int>> columns = {})
        : rows_(rows), tableau_(rows_), rhs_(rows_, Rational(-1)), reduced_(rows_), basis_(rows_)
    {
        for (std::size_t i = 0; i < rows_; ++i) {
            tableau_[i].resize(rows_);
            tableau_[i][i] = 1;
            basis_[i] = i;
        }
        for (const auto& c : columns)
            add_column(c);
    }

    std::size_t columns() const noexcept { return reduced_.size() - rows_; }

    /// Appends a column and returns its index. Before the first solve the column is
    /// simply recorded; after it, the column enters the current tableau.
    std::size_t add_column(const std::vector<int>& rows_covered)
    {
        for (int i : rows_covered)
            if (i < 0 || static_cast<std::size_t>(i) >= rows_)
                throw InvalidArgument("covering column references row " + std::to_string(i));
        // The original column is -a (rows are stored negated). Its tableau image is
        // B^-1(-a), and B^-1 sits in the surplus columns.
        Rational d = 1;
        for (std::size_t r = 0; r < rows_; ++r) {
            Rational entry = 0;
            for (int i : rows_covered)
                entry -= tableau_[r][static_cast<std::size_t>(i)];
            tableau_[r].push_back(entry);
        }
        for (int i : rows_covered)
            d -= reduced_[static_cast<std::size_t>(i)];
        reduced_.push_back(d);
        return columns() - 1;
    }

    CoveringSolution solve()
    {
        if (!solved_) {
            dual_phase();
            solved_ = true;
        }
        primal_phase();
        return solution();
    }

    /// Reduced cost 1 - w(column) at the current basis.
    Rational reduced_cost(std::size_t column) const { return reduced_.at(rows_ + column); }

    /// Current duals w_i.
    std::vector<Rational> dual() const { return {reduced_.begin(), reduced_.begin() + static_cast<std::ptrdiff_t>(rows_)}; }

private:
    void dual_phase()
    {
        const std::size_t width = reduced_.size();
        while (true) {
            std::size_t leave = rows_;
            for (std::size_t i = 0; i < rows_; ++i)
                if (rhs_[i] < 0 && (leave == rows_ || basis_[i] < basis_[leave]))
                    leave = i;
            if (leave == rows_)
                return;

            std::size_t enter = width;
            Rational best_ratio;
            const auto& row = tableau_[leave];
            for (std::size_t j = 0; j < width; ++j) {
                if (row[j] >= 0)
                    continue;
                Rational ratio = reduced_[j] / -row[j];
                if (enter == width || ratio < best_ratio) {
                    enter = j;
                    best_ratio = ratio;
                }
            }
            if (enter == width)
                throw InvalidArgument("covering LP infeasible: row " + std::to_string(basis_[leave]) +
                                      " is in no column");
            pivot(leave, enter);
        }
    }

    void primal_phase()
    {
        const std::size_t width = reduced_.size();
        while (true) {
            std::size_t enter = width;
            for (std::size_t j = 0; j < width; ++j)
                if (reduced_[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == width)
                return;
            std::size_t leave = rows_;
            Rational best_ratio;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (tableau_[i][enter] <= 0)
                    continue;
                Rational ratio = rhs_[i] / tableau_[i][enter];
                if (leave == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == rows_)
                throw InvariantViolation("covering LP reported unbounded");
            pivot(leave, enter);
        }
    }

    CoveringSolution solution() const
    {
        CoveringSolution sol;
        sol.pivots = pivots_;
        sol.primal.assign(columns(), Rational(0));
        for (std::size_t i = 0; i < rows_; ++i)
            if (basis_[i] >= rows_)
                sol.primal[basis_[i] - rows_] = rhs_[i];
        sol.dual = dual();
        for (const auto& y : sol.primal)
            sol.value += y;
        return sol;
    }

    void pivot(std::size_t r, std::size_t c)
    {
        const std::size_t width = reduced_.size();
        auto& prow = tableau_[r];
        Rational scale = prow[c];
        std::vector<std::size_t> nonzero;
        for (std::size_t j = 0; j < width; ++j) {
            if (prow[j] != 0) {
                prow[j] /= scale;
                nonzero.push_back(j);
            }
        }
        rhs_[r] /= scale;

        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || tableau_[i][c] == 0)
                continue;
            Rational factor = tableau_[i][c];
            auto& row = tableau_[i];
            for (std::size_t j : nonzero)
                row[j] -= factor * prow[j];
            rhs_[i] -= factor * rhs_[r];
        }
        if (reduced_[c] != 0) {
            Rational factor = reduced_[c];
            for (std::size_t j : nonzero)
                reduced_[j] -= factor * prow[j];
        }
        basis_[r] = c;
        ++pivots_;
    }

    std::size_t rows_;
    std::vector<std::vector<Rational>> tableau_;
    std::vector<Rational> rhs_;
    std::vector<Rational> reduced_;
    std::vector<std::size_t> basis_;
    std::size_t pivots_ = 0;
    bool solved_ = false;
};

/// Solves the covering LP over an explicit column list. Long lists are handled by
/// pricing: the tableau starts from one covering column per row and receives the most
/// violated column until none has w(column) > 1, which is the same optimum.
inline CoveringSolution solve_covering_lp(std::size_t rows, std::span<const std::vector<int>> columns)
{
    if (columns.size() <= 2 * rows + 8)
        return CoveringSimplex(rows, columns).solve();

    CoveringSimplex lp(rows);
    std::vector<std::size_t> origin;
    std::vector<char> used(columns.size(), 0);
    std::vector<char> covered(rows, 0);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        bool fresh = false;
        for (int i : columns[j]) {
            if (i < 0 || static_cast<std::size_t>(i) >= rows)
                throw InvalidArgument("covering column references row " + std::to_string(i));
            fresh = fresh || !covered[static_cast<std::size_t>(i)];
        }
        if (!fresh)
            continue;
        for (int i : columns[j])
            covered[static_cast<std::size_t>(i)] = 1;
        lp.add_column(columns[j]);
        origin.push_back(j);
        used[j] = 1;
    }
    auto sol = lp.solve();
    while (true) {
        std::size_t best = columns.size();
        Rational best_weight = 1;
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (used[j])
                continue;
            Rational w = 0;
            for (int i : columns[j])
                w += sol.dual[static_cast<std::size_t>(i)];
            if (w > best_weight) {
                best = j;
                best_weight = w;
            }
        }
        if (best == columns.size())
            break;
        lp.add_column(columns[best]);
        origin.push_back(best);
        used[best] = 1;
        sol = lp.solve();
    }

    CoveringSolution out;
    out.value = sol.value;
    out.dual = std::move(sol.dual);
    out.pivots = sol.pivots;
    out.primal.assign(columns.size(), Rational(0));
    for (std::size_t k = 0; k < origin.size(); ++k)
        out.primal[origin[k]] = sol.primal[k];
    return out;
}

} // namespace chroma
