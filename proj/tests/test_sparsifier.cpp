#include "oracles.hpp"

#include <chroma/sparsifier.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace chroma;

TEST(ButParameters, Examples)
{
    BigInt bound = 3 * boost::multiprecision::pow(BigInt(9), 6);
    auto b = but_parameters(3, 3, 5, bound + 3);
    EXPECT_TRUE(b.valid);
    EXPECT_EQ(b.lambda, Rational(1, 20));
    EXPECT_EQ(b.s, Rational(bound + 3, BigInt(3)));
    EXPECT_NEAR(b.p, std::pow(to_double(b.s), -19.0 / 20.0), 1e-15);
    EXPECT_NEAR(b.log_bound, std::log(to_double(Rational(bound))), 1e-9);

    EXPECT_FALSE(but_parameters(3, 3, 5, BigInt(100)).valid);
    EXPECT_FALSE(but_parameters(3, 3, 5, bound).valid);
    EXPECT_TRUE(but_parameters(3, 3, 5, bound + 1).valid);

    auto unit = but_parameters(3, 3, 5, BigInt(3));
    EXPECT_EQ(unit.s, 1);
    EXPECT_DOUBLE_EQ(unit.p, 1.0);

    EXPECT_THROW(but_parameters(2, 3, 5, BigInt(10)), InvalidArgument);
    EXPECT_THROW(but_parameters(3, 3, 2, BigInt(10)), InvalidArgument);
    EXPECT_THROW(but_parameters(3, 0, 5, BigInt(10)), InvalidArgument);
}

TEST(ButParameters, HugeBoundsStayExact)
{
    // (x Delta)^(2g-4) far beyond double range.
    auto b = but_parameters(1000, 1000, 60, BigInt(5));
    EXPECT_FALSE(b.valid);
    EXPECT_NEAR(b.log_bound, std::log(1000.0) + 116 * std::log(1e6), 1e-6);
    EXPECT_GT(b.p, 0.0);
    EXPECT_LE(b.p, 1.0);
}

TEST(Sparsify, Extremes)
{
    auto host = blow_up(generate::cycle(5), 3).graph;
    EXPECT_EQ(sparsify(host, 1.0, 4), host);
    EXPECT_EQ(sparsify(host, 0.0, 4).size(), 0u);
    EXPECT_EQ(sparsify(host, 0.0, 4).order(), host.order());
    EXPECT_EQ(sparsify(host, 0.4, 9), sparsify(host, 0.4, 9));
    EXPECT_TRUE(is_spanning_subgraph(sparsify(host, 0.4, 9), host));
    EXPECT_THROW(sparsify(host, 1.5, 1), InvalidArgument);
}

TEST(Sparsify, EdgeCountIsBinomial)
{
    auto host = generate::complete_bipartite(10, 10);
    ASSERT_EQ(host.size(), 100u);
    double total = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        double kept = static_cast<double>(sparsify(host, 0.5, seed).size());
        EXPECT_NEAR(kept, 50.0, 4 * 5.0) << "seed " << seed;
        total += kept;
    }
    // Mean of 1000 samples: sigma 5 / sqrt(1000).
    EXPECT_NEAR(total / 1000, 50.0, 4 * 5.0 / std::sqrt(1000.0));
}

TEST(Sparsify, PerEdgeRetentionIsUniformAndIndependent)
{
    auto host = generate::complete_bipartite(10, 10);
    auto edges = host.edges();
    const int seeds = 1000;
    std::vector<int> kept(edges.size(), 0);
    std::vector<int> both(edges.size(), 0); // edge i together with edge i+1
    for (int seed = 0; seed < seeds; ++seed) {
        auto h = sparsify(host, 0.5, static_cast<std::uint64_t>(seed));
        std::vector<char> in(edges.size());
        for (std::size_t i = 0; i < edges.size(); ++i) {
            in[i] = h.adjacent(edges[i].first, edges[i].second);
            kept[i] += in[i];
        }
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            both[i] += in[i] && in[i + 1];
    }
    // Chi-square over the 100 edges, df = 100; critical value at alpha = 0.001 is 149.449.
    double chi2 = 0;
    for (int k : kept) {
        double d = k - seeds * 0.5;
        chi2 += d * d / (seeds * 0.25);
    }
    EXPECT_LT(chi2, 149.449);
    // Joint retention of consecutive edges, df = 99; critical value 148.230.
    double joint = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double d = both[i] - seeds * 0.25;
        joint += d * d / (seeds * 0.25 * 0.75);
    }
    EXPECT_LT(joint, 148.230);
}

TEST(AsymmetricLLL, Examples)
{
    auto one = asymmetric_lll_check({{{0.3, 0.5, {}}}});
    EXPECT_TRUE(one.holds);
    EXPECT_NEAR(one.avoidance_lower, 0.5, 1e-15);

    auto tight = asymmetric_lll_check({{{0.25, 0.5, {1}}, {0.25, 0.5, {0}}}});
    EXPECT_TRUE(tight.holds);
    EXPECT_NEAR(tight.margins[0], 0.0, 1e-12);
    EXPECT_NEAR(tight.avoidance_lower, 0.25, 1e-15);

    auto over = asymmetric_lll_check({{{0.3, 0.5, {1}}, {0.3, 0.5, {0}}}});
    EXPECT_FALSE(over.holds);
    ASSERT_TRUE(over.first_failure.has_value());
    EXPECT_EQ(*over.first_failure, 0u);

    EXPECT_THROW(asymmetric_lll_check({{{0.1, 0.5, {1}}, {0.1, 0.5, {}}}}), InvalidArgument);
    EXPECT_THROW(asymmetric_lll_check({{{0.1, 1.0, {}}}}), InvalidArgument);
}

TEST(AsymmetricLLL, TypedMatchesExplicitOnSmallSystems)
{
    // A ring of n events, each depending on its two neighbours: one class, two deps.
    for (double pr : {0.05, 0.1, 0.15, 0.2}) {
        for (double y : {0.1, 0.2, 0.3, 0.5}) {
            const std::size_t n = 6;
            LLLInstance inst;
            for (std::size_t i = 0; i < n; ++i)
                inst.events.push_back({pr, y, {(i + 1) % n, (i + n - 1) % n}});
            auto explicit_check = asymmetric_lll_check(inst);
            std::vector<LLLClass> typed{{"ring", std::log(pr), std::log(y), {{0, std::log(2.0)}}}};
            EXPECT_EQ(typed_lll_check(typed).holds, explicit_check.holds) << pr << " " << y;
        }
    }
}

TEST(LLLInequalities, Examples)
{
    auto at_one = lll_inequalities_hold(3, 3, 5, 1);
    EXPECT_FALSE(at_one.ineq3);
    EXPECT_TRUE(std::isinf(at_one.log_lhs3));

    auto ten = lll_inequalities_hold(3, 3, 5, 10);
    EXPECT_FALSE(ten.ineq3);
    EXPECT_FALSE(ten.ineq4);
}

TEST(LLLInequalities, JustAboveTheBlowupBound)
{
    // The sums over cycle lengths are small there, but e^(-s^(1+lambda)/2) C(sx, s)^2 is
    // still enormous: both inequalities fail until s^lambda outgrows the binomial.
    double s = std::pow(9.0, 6) + 1;
    auto r = lll_inequalities_hold(3, 3, 5, s);
    EXPECT_TRUE(r.intermediate3);
    EXPECT_TRUE(r.intermediate4);
    EXPECT_TRUE(r.binomial_exact);
    EXPECT_GT(r.log_binomial_term, 1e6);
    EXPECT_FALSE(r.ineq3);
    EXPECT_FALSE(r.ineq4);

    auto far = lll_inequalities_hold(3, 3, 5, 1e18);
    EXPECT_TRUE(far.ineq3);
    EXPECT_TRUE(far.ineq4);
    EXPECT_TRUE(far.simplification_valid);
}

TEST(LLLInequalities, BinomialTermAgreesWithExactCount)
{
    for (int s = 1; s <= 12; ++s) {
        auto r = lll_inequalities_hold(3, 3, 5, s);
        double lambda = 1.0 / 20;
        double choose = static_cast<double>(binomial(3 * s, s));
        double want = -0.5 * std::pow(s, 1 + lambda) + 2 * std::log(choose);
        EXPECT_NEAR(r.log_binomial_term, want, 1e-9 * std::max(1.0, std::abs(want))) << s;
    }
}

TEST(LLLInequalities, IntermediateSumsOnGrid)
{
    for (int x : {3, 4, 5})
        for (int delta : {2, 3, 4})
            for (int g : {3, 4, 5, 6}) {
                double s = std::pow(static_cast<double>(x) * delta, 2 * g - 4) * 1.01;
                auto r = lll_inequalities_hold(x, delta, g, s);
                EXPECT_TRUE(r.intermediate4) << x << " " << delta << " " << g;
            }
}

TEST(LLLInequalities, ImplyTypedLocalLemma)
{
    int both = 0;
    for (int x : {3, 4, 5})
        for (int delta : {2, 3})
            for (int g : {3, 4, 5})
                for (double log10s = 1; log10s <= 40; log10s += 0.5) {
                    double s = std::pow(10.0, log10s);
                    auto r = lll_inequalities_hold(x, delta, g, s);
                    if (!(r.ineq3 && r.ineq4))
                        continue;
                    ++both;
                    EXPECT_TRUE(typed_lll_check(sparsification_lll_classes(x, delta, g, s)).holds)
                        << x << " " << delta << " " << g << " " << s;
                }
    EXPECT_GT(both, 100);
}

TEST(ShortCycles, Examples)
{
    EXPECT_TRUE(short_cycles(generate::cycle(5), 4).empty());
    EXPECT_EQ(short_cycles(generate::cycle(5), 5).size(), 1u);
    auto k4 = short_cycles(generate::complete(4), 4);
    EXPECT_EQ(k4.size(), 7u);
    EXPECT_EQ(std::count_if(k4.begin(), k4.end(), [](const auto& c) { return c.size() == 3; }), 4);
    EXPECT_THROW(short_cycles(generate::cycle(5), 2), InvalidArgument);
    EXPECT_THROW(short_cycles(generate::complete(6), 6, 10), CapExceeded);
}

TEST(ShortCycles, MatchExhaustiveSearchAndGirth)
{
    auto rng = make_rng(21);
    for (int trial = 0; trial < 80; ++trial) {
        int n = 3 + static_cast<int>(rng() % 7);
        auto h = generate::random(n, uniform01(rng), rng());
        for (int g = 3; g <= 6; ++g) {
            auto got = short_cycles(h, g);
            auto want = oracle::all_cycles(h, g);
            EXPECT_EQ(std::set<std::vector<Vertex>>(got.begin(), got.end()), want);
            EXPECT_EQ(got.size(), want.size());
            EXPECT_EQ(got.empty(), girth(h).exceeds(g));
        }
    }
}

TEST(KssProperty, Examples)
{
    auto k22 = blow_up(generate::complete(2), 2);
    EXPECT_TRUE(kss_property_check(k22.graph, k22.embedding, 1).holds);

    auto edges = k22.graph.edges();
    edges.erase(edges.begin());
    Graph minus = Graph::from_edges(4, edges);
    auto r = kss_property_check(minus, k22.embedding, 1);
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(r.counterexample.has_value());
    EXPECT_EQ(r.counterexample->x.size(), 1u);
    EXPECT_EQ(r.counterexample->y.size(), 1u);
    EXPECT_FALSE(minus.adjacent(r.counterexample->x[0], r.counterexample->y[0]));

    auto c5 = blow_up(generate::cycle(5), 3);
    EXPECT_TRUE(kss_property_check(c5.graph, c5.embedding, 2).holds);
    EXPECT_TRUE(kss_property_check(c5.graph, c5.embedding, 4).holds); // sets larger than a class

    KssOptions tiny;
    tiny.budget = 10;
    EXPECT_THROW(kss_property_check(c5.graph, c5.embedding, 2, tiny), CapExceeded);
}

namespace {

// Direct definition: no X in class a, Y in class b, both of size k, without an edge.
bool brute_kss(const Graph& h, const BlowupEmbedding& e, int k)
{
    int m = e.power;
    for (auto [a, b] : e.base.edges())
        for (std::uint32_t xm = 0; xm < (1u << m); ++xm) {
            if (std::popcount(xm) != k)
                continue;
            for (std::uint32_t ym = 0; ym < (1u << m); ++ym) {
                if (std::popcount(ym) != k)
                    continue;
                bool edge = false;
                for (int i = 0; i < m && !edge; ++i)
                    for (int j = 0; j < m && !edge; ++j)
                        edge = (xm >> i & 1) && (ym >> j & 1) && h.adjacent(e.classes[a][i], e.classes[b][j]);
                if (!edge)
                    return false;
            }
        }
    return true;
}

} // namespace

TEST(KssProperty, ExhaustiveSampledAndBruteForceAgree)
{
    auto rng = make_rng(22);
    int failures = 0;
    for (int trial = 0; trial < 120; ++trial) {
        auto base = trial % 2 ? generate::cycle(5) : generate::complete(3);
        int m = 3 + static_cast<int>(rng() % 3);
        auto b = blow_up(base, m);
        auto h = sparsify(b.graph, 0.55 + 0.4 * uniform01(rng), rng());
        int k = 1 + static_cast<int>(rng() % 2);
        auto exhaustive = kss_property_check(h, b.embedding, k);
        KssOptions sampled;
        sampled.sampled = true;
        sampled.trials = 3000;
        sampled.seed = rng();
        auto mc = kss_property_check(h, b.embedding, k, sampled);
        EXPECT_TRUE(mc.sampled);
        EXPECT_EQ(exhaustive.holds, brute_kss(h, b.embedding, k));
        EXPECT_EQ(exhaustive.holds, mc.holds) << "trial " << trial;
        failures += !exhaustive.holds;
        if (!exhaustive.holds) {
            const auto& c = *exhaustive.counterexample;
            for (Vertex u : c.x)
                for (Vertex v : c.y)
                    EXPECT_FALSE(h.adjacent(u, v));
        }
    }
    EXPECT_GT(failures, 10);
    EXPECT_LT(failures, 110);
}

TEST(Pipeline, TrivialRetentions)
{
    PipelineOptions keep_all;
    keep_all.p_override = 1.0;
    auto full = but_pipeline(generate::complete(4), 3, 3, 2, 1, 5, keep_all);
    EXPECT_EQ(full.girth_successes, 0u);
    EXPECT_EQ(full.samples.size(), 5u);
    for (const auto& s : full.samples)
        EXPECT_EQ(s.girth.length, 3);
    EXPECT_FALSE(full.faithful);

    PipelineOptions keep_none;
    keep_none.p_override = 0.0;
    auto empty = but_pipeline(generate::complete(4), 3, 3, 2, 1, 5, keep_none);
    EXPECT_EQ(empty.chi_successes, 0u);
    EXPECT_TRUE(empty.chi_checked);
    for (const auto& s : empty.samples) {
        EXPECT_EQ(s.chi, 1);
        EXPECT_TRUE(s.girth_ok);
    }
}

TEST(Pipeline, RecordsAreConsistent)
{
    PipelineOptions opts;
    opts.p_override = 0.8;
    auto rep = but_pipeline(generate::complete(4), 3, 3, 4, 7, 30, opts);
    EXPECT_EQ(rep.host_order, 16);
    EXPECT_EQ(rep.host_edges, 96u);
    EXPECT_EQ(rep.base_chi, 4);
    std::size_t successes = 0;
    for (const auto& s : rep.samples) {
        EXPECT_EQ(s.girth_ok, s.short_cycles == 0);
        ASSERT_TRUE(s.chi.has_value());
        EXPECT_EQ(s.chi_ok, *s.chi > 3);
        successes += s.girth_ok && s.chi_ok;
    }
    EXPECT_EQ(successes, rep.successes);
    auto again = but_pipeline(generate::complete(4), 3, 3, 4, 7, 30, opts);
    for (std::size_t i = 0; i < rep.samples.size(); ++i)
        EXPECT_EQ(again.samples[i].edges, rep.samples[i].edges);

    EXPECT_THROW(but_pipeline(generate::complete(3), 3, 3, 2, 1, 1), InvalidArgument);
    PipelineOptions small_host;
    small_host.max_host_vertices = 10;
    EXPECT_THROW(but_pipeline(generate::complete(4), 3, 3, 4, 1, 1, small_host), CapExceeded);
}

TEST(Pipeline, ResamplingRemovesShortCycles)
{
    PipelineOptions opts;
    opts.p_override = 0.8;
    opts.strategy = SamplingStrategy::resample;
    int checked = 0;
    opts.observer = [&](const Graph& h, const SampleRecord& rec) {
        if (rec.resample_converged) {
            EXPECT_TRUE(short_cycles(h, 3).empty());
            ++checked;
        }
    };
    auto rep = but_pipeline(generate::complete(4), 3, 3, 4, 3, 20, opts);
    EXPECT_EQ(rep.girth_successes, static_cast<std::size_t>(checked));
    EXPECT_GT(checked, 0);
}
