#include "oracles.hpp"

#include <chroma/independent_sets.hpp>
#include <chroma/simplex.hpp>

#include <gtest/gtest.h>

using namespace chroma;

namespace {

// Primal feasibility, dual feasibility and equal objectives: an optimality certificate
// that does not trust the solver.
void expect_optimal(std::size_t rows, const std::vector<std::vector<int>>& cols, const CoveringSolution& sol)
{
    ASSERT_EQ(sol.primal.size(), cols.size());
    ASSERT_EQ(sol.dual.size(), rows);
    std::vector<Rational> cover(rows, Rational(0));
    Rational primal = 0;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        EXPECT_GE(sol.primal[j], 0);
        primal += sol.primal[j];
        Rational w = 0;
        for (int i : cols[j]) {
            cover[i] += sol.primal[j];
            w += sol.dual[i];
        }
        EXPECT_LE(w, 1);
    }
    Rational dual = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        EXPECT_GE(cover[i], 1);
        EXPECT_GE(sol.dual[i], 0);
        dual += sol.dual[i];
    }
    EXPECT_EQ(primal, sol.value);
    EXPECT_EQ(dual, sol.value);
}

} // namespace

TEST(Simplex, SingletonsGiveIdentity)
{
    std::vector<std::vector<int>> cols{{0}, {1}, {2}};
    auto sol = solve_covering_lp(3, cols);
    EXPECT_EQ(sol.value, 3);
    expect_optimal(3, cols, sol);
}

TEST(Simplex, FiveCycleCover)
{
    auto sets = maximal_independent_sets(generate::cycle(5));
    std::vector<std::vector<int>> cols(sets.begin(), sets.end());
    auto sol = solve_covering_lp(5, cols);
    EXPECT_EQ(sol.value, Rational(5, 2));
    expect_optimal(5, cols, sol);
}

TEST(Simplex, InfeasibleRowIsReported)
{
    std::vector<std::vector<int>> cols{{0}};
    EXPECT_THROW(solve_covering_lp(2, cols), InvalidArgument);
    std::vector<std::vector<int>> bad{{5}};
    EXPECT_THROW(solve_covering_lp(2, bad), InvalidArgument);
}

TEST(Simplex, WarmStartMatchesColdSolve)
{
    auto rng = make_rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t rows = 2 + rng() % 7;
        std::vector<std::vector<int>> cols;
        for (std::size_t i = 0; i < rows; ++i)
            cols.push_back({static_cast<int>(i)});
        int extra = static_cast<int>(rng() % 12);
        for (int j = 0; j < extra; ++j) {
            std::vector<int> c;
            for (std::size_t i = 0; i < rows; ++i)
                if (rng() % 3 == 0)
                    c.push_back(static_cast<int>(i));
            if (!c.empty())
                cols.push_back(c);
        }
        auto cold = CoveringSimplex(rows, cols).solve();
        expect_optimal(rows, cols, cold);

        CoveringSimplex warm(rows);
        for (std::size_t i = 0; i < rows; ++i)
            warm.add_column(cols[i]);
        warm.solve();
        for (std::size_t j = rows; j < cols.size(); ++j) {
            warm.add_column(cols[j]);
            warm.solve();
        }
        auto sol = warm.solve();
        EXPECT_EQ(sol.value, cold.value);
        expect_optimal(rows, cols, sol);
    }
}

TEST(Simplex, PricingPathMatchesDirectSolve)
{
    // Many columns route solve_covering_lp through pricing; the optimum must not move.
    auto g = oracle::petersen();
    auto sets = oracle::all_independent_masks(g);
    std::vector<std::vector<int>> cols;
    for (auto m : sets)
        if (m)
            cols.push_back(mask_to_vertices(m));
    ASSERT_GT(cols.size(), 2 * 10u + 8);
    auto priced = solve_covering_lp(10, cols);
    auto direct = CoveringSimplex(10, cols).solve();
    EXPECT_EQ(priced.value, Rational(5, 2));
    EXPECT_EQ(direct.value, Rational(5, 2));
    expect_optimal(10, cols, priced);
}

TEST(Simplex, ReducedCostsAreOneMinusDualWeight)
{
    std::vector<std::vector<int>> cols{{0, 1}, {1, 2}, {0, 2}};
    CoveringSimplex lp(3, cols);
    auto sol = lp.solve();
    EXPECT_EQ(sol.value, Rational(3, 2));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        Rational w = 0;
        for (int i : cols[j])
            w += sol.dual[i];
        EXPECT_EQ(lp.reduced_cost(j), 1 - w);
    }
}
