#include "oracles.hpp"

#include <chroma/coloring.hpp>
#include <chroma/fractional.hpp>
#include <chroma/independent_sets.hpp>
#include <chroma/kneser.hpp>

#include <gtest/gtest.h>

using namespace chroma;

namespace {

const FractionalOptions enumerate{FractionalMethod::enumerate};
const FractionalOptions colgen{FractionalMethod::column_generation};

std::vector<Graph> corpus(int count, int n_max, std::uint64_t seed)
{
    std::vector<Graph> out;
    auto rng = make_rng(seed);
    for (int i = 0; i < count; ++i)
        out.push_back(generate::random(1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n_max)),
                                       uniform01(rng), rng()));
    return out;
}

} // namespace

TEST(MaximalIndependentSets, Examples)
{
    auto k5 = maximal_independent_sets(generate::complete(5));
    EXPECT_EQ(k5, (std::vector<VertexSet>{{0}, {1}, {2}, {3}, {4}}));
    auto c5 = maximal_independent_sets(generate::cycle(5));
    EXPECT_EQ(c5.size(), 5u);
    for (const auto& s : c5)
        EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(maximal_independent_sets(Graph(6)), (std::vector<VertexSet>{{0, 1, 2, 3, 4, 5}}));
    EXPECT_THROW(maximal_independent_sets(generate::cycle(31)), CapExceeded);
}

TEST(MaximalIndependentSets, MatchBruteForce)
{
    for (const auto& g : corpus(120, 14, 31))
        EXPECT_EQ(maximal_independent_sets(g), oracle::maximal_independent_sets(g));
}

TEST(MaxWeightIndependentSet, Examples)
{
    auto unit = [](int n) { return std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)); };
    EXPECT_EQ(max_weight_independent_set(generate::complete(3), unit(3)).weight, 1);
    EXPECT_EQ(max_weight_independent_set(generate::cycle(5), unit(5)).weight, 2);
    auto star = max_weight_independent_set(generate::complete_bipartite(1, 3), unit(4));
    EXPECT_EQ(star.weight, 3);
    EXPECT_EQ(star.vertices, (VertexSet{1, 2, 3}));
}

TEST(MaxWeightIndependentSet, MatchesBruteForceOnRationalWeights)
{
    auto rng = make_rng(32);
    for (const auto& g : corpus(150, 14, 33)) {
        std::vector<Rational> w;
        for (int v = 0; v < g.order(); ++v)
            w.push_back(Rational(static_cast<long long>(rng() % 20), 1 + static_cast<long long>(rng() % 7)));
        auto got = max_weight_independent_set(g, w);
        EXPECT_EQ(got.weight, oracle::max_independent_weight(g, w));
        EXPECT_TRUE(is_independent(g, got.vertices));
    }
}

TEST(FractionalChromatic, Examples)
{
    for (int n = 1; n <= 8; ++n)
        EXPECT_EQ(fractional_chromatic(generate::complete(n)).value, n);
    EXPECT_EQ(fractional_chromatic(kneser(5, 2)).value, Rational(5, 2));
    EXPECT_EQ(fractional_chromatic(oracle::grotzsch(), enumerate).value, Rational(29, 10));
    EXPECT_EQ(fractional_chromatic(oracle::grotzsch(), colgen).value, Rational(29, 10));
    EXPECT_EQ(fractional_chromatic(Graph(0)).value, 0);
    EXPECT_EQ(fractional_chromatic(Graph(4)).value, 1);
}

TEST(FractionalChromatic, CertificatesCheckedAgainstAllSubsets)
{
    for (const auto& g : corpus(60, 12, 34)) {
        for (const auto* opts : {&enumerate, &colgen}) {
            auto fr = fractional_chromatic(g, *opts);
            EXPECT_TRUE(oracle::certifies_fractional_optimum(g, fr.value, fr.coloring, fr.dual));
        }
    }
    for (const auto& g : {oracle::petersen(), oracle::grotzsch(), generate::cycle(7)}) {
        auto fr = fractional_chromatic(g);
        EXPECT_TRUE(oracle::certifies_fractional_optimum(g, fr.value, fr.coloring, fr.dual));
    }
}

TEST(FractionalChromatic, MethodsAgree)
{
    for (const auto& g : corpus(120, 16, 35))
        EXPECT_EQ(fractional_chromatic(g, enumerate).value, fractional_chromatic(g, colgen).value);
}

TEST(FractionalChromatic, SandwichedByIndependenceAndChromaticNumber)
{
    for (const auto& g : corpus(80, 12, 36)) {
        auto chi_f = fractional_chromatic(g).value;
        auto alpha = independence_number(g);
        EXPECT_GE(chi_f, Rational(g.order(), static_cast<long long>(alpha)));
        EXPECT_LE(chi_f, chromatic_number(g).chromatic_number);
    }
}

TEST(FractionalChromatic, BlowUpInvariance)
{
    for (const auto& g : corpus(25, 8, 37))
        for (int m : {2, 3})
            EXPECT_EQ(fractional_chromatic(blow_up(g, m).graph).value, fractional_chromatic(g).value);
}

TEST(FractionalChromatic, CatalogWitnesses)
{
    EXPECT_EQ(fractional_chromatic(generate::cycle(5), enumerate).value, Rational(5, 2));
    EXPECT_EQ(fractional_chromatic(oracle::grotzsch(), enumerate).value, Rational(29, 10));
    FractionalOptions wide{FractionalMethod::enumerate, {64}};
    for (int k : {2, 3})
        EXPECT_EQ(fractional_chromatic(kneser(3 * k - 1, k), wide).value, 3 - Rational(1, k));
}

TEST(FractionalChromatic, CapsApply)
{
    EXPECT_THROW(fractional_chromatic(generate::cycle(31), enumerate), CapExceeded);
    FractionalOptions small{FractionalMethod::column_generation, {}, 10};
    EXPECT_THROW(fractional_chromatic(generate::cycle(11), small), CapExceeded);
}

TEST(AlphaF, Examples)
{
    auto c5 = alpha_f_weights(generate::cycle(5));
    EXPECT_EQ(c5.alpha_f, 2);
    EXPECT_EQ(c5.weights, VertexWeighting::uniform(5));
    auto k4 = alpha_f_weights(generate::complete(4));
    EXPECT_EQ(k4.alpha_f, 1);
    EXPECT_EQ(k4.weights, VertexWeighting::uniform(4));
    EXPECT_EQ(alpha_f_weights(Graph(6)).alpha_f, 6);
}

TEST(AlphaF, DualityOnCorpus)
{
    for (const auto& g : corpus(80, 16, 38)) {
        auto a = alpha_f_weights(g);
        EXPECT_EQ(fractional_chromatic(g).value * a.alpha_f, g.order());
        EXPECT_EQ(a.weights.total(), g.order());
        EXPECT_EQ(max_weight_independent_set(g, a.weights.values()).weight, a.alpha_f);
    }
}

TEST(AlphaF, Deterministic)
{
    auto g = generate::random(12, 0.4, 77);
    EXPECT_EQ(alpha_f_weights(g).weights, alpha_f_weights(g).weights);
}

TEST(VerifyFractionalColoring, Examples)
{
    FractionalColoring singletons;
    for (Vertex v = 0; v < 3; ++v)
        singletons.entries.push_back({{v}, Rational(1)});
    auto r = verify_fractional_coloring(generate::complete(3), singletons);
    ASSERT_TRUE(std::holds_alternative<Rational>(r));
    EXPECT_EQ(std::get<Rational>(r), 3);

    FractionalColoring c5;
    for (Vertex v = 0; v < 5; ++v)
        c5.entries.push_back({{v, (v + 2) % 5}, Rational(1, 2)});
    r = verify_fractional_coloring(generate::cycle(5), c5);
    ASSERT_TRUE(std::holds_alternative<Rational>(r));
    EXPECT_EQ(std::get<Rational>(r), Rational(5, 2));

    FractionalColoring bad{{{{0, 1}, Rational(1)}, {{2}, Rational(1)}}};
    r = verify_fractional_coloring(generate::complete(3), bad);
    ASSERT_TRUE(std::holds_alternative<ColoringViolation>(r));
    EXPECT_EQ(std::get<ColoringViolation>(r).kind, ColoringViolation::Kind::not_independent);

    FractionalColoring thin{{{{0}, Rational(1, 2)}}};
    r = verify_fractional_coloring(Graph(1), thin);
    ASSERT_TRUE(std::holds_alternative<ColoringViolation>(r));
    EXPECT_EQ(std::get<ColoringViolation>(r).kind, ColoringViolation::Kind::uncovered);
}

TEST(VertexWeighting, OrderIsNonIncreasingWithIndexTies)
{
    VertexWeighting w({Rational(1), Rational(3), Rational(1), Rational(2)});
    EXPECT_EQ(w.order().perm(), (std::vector<Vertex>{1, 3, 0, 2}));
    EXPECT_EQ(w.total(), 7);
    EXPECT_THROW(VertexWeighting({Rational(-1)}), InvalidArgument);
}

TEST(Oracles, WeightSearchMatchesSubsetScan)
{
    auto rng = make_rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng() % 14);
        auto g = generate::random(n, uniform01(rng), rng());
        std::vector<Rational> w;
        for (int i = 0; i < n; ++i)
            w.push_back(Rational(static_cast<long long>(rng() % 9), 1 + static_cast<long long>(rng() % 4)));
        Rational scan = 0;
        for (auto m : oracle::all_independent_masks(g)) {
            Rational s = 0;
            for (int v = 0; v < n; ++v)
                if (m >> v & 1)
                    s += w[v];
            scan = std::max(scan, s);
        }
        EXPECT_EQ(oracle::max_independent_weight_search(g, w), scan);
    }
}
