#pragma once

#include "report.hpp"

#include <chroma/coloring.hpp>
#include <chroma/dimacs.hpp>
#include <chroma/extractor.hpp>
#include <chroma/fractional.hpp>
#include <chroma/kneser.hpp>
#include <chroma/rodl.hpp>
#include <chroma/sparsifier.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace chroma::cli {

using report::json;

enum ExitCode : int { ok = 0, check_failed = 1, usage = 2, cap = 3 };

namespace detail {

inline std::optional<std::uint64_t> seed_from_env()
{
    const char* env = std::getenv("CHROMA_SEED");
    if (!env || !*env)
        return std::nullopt;
    std::string text(env);
    if (text.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidArgument("CHROMA_SEED is not an unsigned integer: '" + text + "'");
    try {
        return std::stoull(text);
    } catch (const std::out_of_range&) {
        throw InvalidArgument("CHROMA_SEED out of range: '" + text + "'");
    }
}

inline void emit_graph(const Graph& g, const std::string& path, const std::vector<std::string>& comments,
                       std::ostream& out)
{
    if (path.empty() || path == "-")
        dimacs::write(out, g, comments);
    else
        dimacs::write_file(path, g, comments);
}

inline void emit_text(const std::string& path, const std::string& text)
{
    if (!path.empty())
        dimacs::write_atomic(path, text);
}

inline std::vector<Rational> parse_list(const std::vector<std::string>& items)
{
    std::vector<Rational> out;
    for (const auto& s : items)
        out.push_back(parse_rational(s));
    return out;
}

struct Context {
    report::RunReport rep;
    std::ostream& out;
    std::uint64_t seed;
};

} // namespace detail

/// Runs the command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"exact fractional coloring and sparse-subgraph experiments", "chroma"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string json_path;
    std::optional<std::uint64_t> seed_opt;
    app.add_option("--json", json_path, "write a JSON run report");
    app.add_option("--seed", seed_opt, "random seed (default: CHROMA_SEED or 0)");

    // chif / chi / girth
    std::string input;
    std::string method = "column-generation";
    std::string coloring_out;
    auto* chif = app.add_subcommand("chif", "fractional chromatic number (exact)");
    chif->add_option("graph", input, "DIMACS .col file")->required();
    chif->add_option("--method", method, "enumerate | column-generation")
        ->check(CLI::IsMember({"enumerate", "column-generation"}));
    chif->add_option("--coloring", coloring_out, "write the optimal fractional coloring");

    int max_vertices = 64;
    auto* chi = app.add_subcommand("chi", "chromatic number (exact)");
    chi->add_option("graph", input, "DIMACS .col file")->required();
    chi->add_option("--max-vertices", max_vertices, "exact solver cap");

    auto* gir = app.add_subcommand("girth", "shortest cycle length");
    gir->add_option("graph", input, "DIMACS .col file")->required();

    // gen
    std::string output;
    int n = 0;
    int k = 0;
    int m = 1;
    int depth = 1;
    double p = 0.5;
    std::string base_path;
    std::string sidecar;
    auto* gen = app.add_subcommand("gen", "generate a graph");
    gen->require_subcommand(1);
    auto* gen_cycle = gen->add_subcommand("cycle", "C_n");
    gen_cycle->add_option("-n", n)->required();
    auto* gen_complete = gen->add_subcommand("complete", "K_n");
    gen_complete->add_option("-n", n)->required();
    auto* gen_myc = gen->add_subcommand("mycielski", "iterated Mycielskian (default base K2)");
    gen_myc->add_option("--base", base_path, "base graph file");
    gen_myc->add_option("--depth", depth, "number of Mycielski steps")->check(CLI::Range(0, 10));
    auto* gen_random = gen->add_subcommand("random", "G(n, p)");
    gen_random->add_option("-n", n)->required();
    gen_random->add_option("-p", p)->required()->check(CLI::Range(0.0, 1.0));
    auto* gen_kneser = gen->add_subcommand("kneser", "KG(n, k)");
    gen_kneser->add_option("-n", n)->required();
    gen_kneser->add_option("-k", k)->required();
    gen_kneser->add_option("--labels", sidecar, "write vertex labels (subsets)");
    auto* gen_blowup = gen->add_subcommand("blowup", "G^(m)");
    gen_blowup->add_option("--base", base_path, "base graph file")->required();
    gen_blowup->add_option("-m", m, "power")->required();
    gen_blowup->add_option("--classes", sidecar, "write the class of every base vertex");
    for (auto* s : {gen_cycle, gen_complete, gen_myc, gen_random, gen_kneser, gen_blowup})
        s->add_option("-o,--output", output, "output file (default stdout)");

    // embed kgbu
    int t = 1;
    int xi = 1;
    auto* embed = app.add_subcommand("embed", "explicit blow-up embeddings");
    embed->require_subcommand(1);
    auto* kgbu = embed->add_subcommand("kgbu", "blow-up of KG(n,k) inside KG(nt, kt-x)");
    kgbu->add_option("-n", n)->required();
    kgbu->add_option("-k", k)->required();
    kgbu->add_option("-t", t)->required();
    kgbu->add_option("-x", xi)->required();
    kgbu->add_option("-o,--output", output, "write the host graph");
    kgbu->add_option("--classes", sidecar, "write the embedding classes");

    // descend
    std::vector<std::string> thresholds;
    auto* descend = app.add_subcommand("descend", "left-neighborhood descent");
    descend->add_option("graph", input, "DIMACS .col file")->required();
    descend->add_option("--thresholds", thresholds, "comma separated, consumed last to first")
        ->required()
        ->delimiter(',');

    // extract
    std::string x_text;
    std::string l_text;
    int budget = 200;
    std::string weights = "unit";
    auto* extract = app.add_subcommand("extract", "triangle-free spanning subgraph with light independent sets");
    extract->add_option("graph", input, "DIMACS .col file")->required();
    extract->add_option("--x", x_text)->required();
    extract->add_option("--l", l_text)->required();
    extract->add_option("--budget", budget, "random attachment attempts");
    extract->add_option("--weights", weights, "unit | alpha")->check(CLI::IsMember({"unit", "alpha"}));
    extract->add_option("-o,--output", output, "write H");

    // sparsify
    int gg = 3;
    std::optional<double> p_override;
    std::string strategy = "rejection";
    std::string export_dir;
    auto* sparsify_cmd = app.add_subcommand("sparsify", "random sparsification of a blow-up");
    sparsify_cmd->add_option("graph", input, "base graph file")->required();
    sparsify_cmd->add_option("--x", xi)->required();
    sparsify_cmd->add_option("--g", gg)->required();
    sparsify_cmd->add_option("--m", m)->required();
    sparsify_cmd->add_option("--p", p_override, "override the retention probability")->check(CLI::Range(0.0, 1.0));
    sparsify_cmd->add_option("--budget", budget, "number of samples");
    sparsify_cmd->add_option("--strategy", strategy, "rejection | resample")
        ->check(CLI::IsMember({"rejection", "resample"}));
    sparsify_cmd->add_option("--export", export_dir, "write every sample and its short cycles here");

    // check
    double x_min = 3;
    double x_max = 100;
    double xd = 3;
    double delta = 2;
    double s = 0;
    auto* check = app.add_subcommand("check", "numeric verifiers");
    check->require_subcommand(1);
    auto* rodl_bounds = check->add_subcommand("rodl-bounds", "(x+1)(1-1/(6(x+1)))^7 <= x over integer x");
    rodl_bounds->add_option("--x-min", x_min);
    rodl_bounds->add_option("--x-max", x_max);
    auto* lll = check->add_subcommand("lll", "local lemma inequalities");
    lll->add_option("--x", xd)->required();
    lll->add_option("--delta", delta)->required();
    lll->add_option("--g", gg)->required();
    lll->add_option("--s", s, "default: just above (x Delta)^(2g-4)");
    auto* dense = check->add_subcommand("dense-bound", "dense-set probability base below 1/2");
    dense->add_option("--x", x_min)->required();
    dense->add_option("--x-max", x_max, "check every integer up to here");
    auto* kparams = check->add_subcommand("kneser-params", "Kneser corollary parameter chain");
    kparams->add_option("--k", k)->required();
    kparams->add_option("--g", gg)->required();
    kparams->add_option("--x", xi)->required();
    kparams->add_option("--n", n)->required();

    for (auto* sub : app.get_subcommands({}))
        sub->fallthrough();
    for (auto* sub : {gen, embed, check})
        for (auto* leaf : sub->get_subcommands({}))
            leaf->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        std::uint64_t seed = seed_opt ? *seed_opt : detail::seed_from_env().value_or(0);
        std::vector<std::string> command(argv, argv + argc);
        detail::Context ctx{report::RunReport(command, seed), out, seed};
        auto& res = ctx.rep.results();
        auto& modes = ctx.rep.modes();
        int code = ok;

        auto load = [&](const std::string& path) {
            Graph g = dimacs::read_file(path);
            ctx.rep.input(path, g);
            return g;
        };

        if (chif->parsed()) {
            Graph g = load(input);
            FractionalOptions opts;
            opts.method = method == "enumerate" ? FractionalMethod::enumerate : FractionalMethod::column_generation;
            auto fr = fractional_chromatic(g, opts);
            out << to_display_string(fr.value) << '\n';
            if (!coloring_out.empty()) {
                std::ostringstream os;
                write_coloring(os, fr.coloring);
                detail::emit_text(coloring_out, os.str());
            }
            modes["method"] = method;
            res = {{"chi_f", report::rational(fr.value)},
                   {"columns", fr.columns},
                   {"coloring", report::coloring(fr.coloring)},
                   {"dual", report::rationals(fr.dual)}};
        } else if (chi->parsed()) {
            Graph g = load(input);
            auto cr = chromatic_number(g, {max_vertices});
            out << cr.chromatic_number << '\n';
            res = {{"chi", cr.chromatic_number}, {"colors", cr.colors}};
        } else if (gir->parsed()) {
            Graph g = load(input);
            auto gi = girth(g);
            out << gi.str() << '\n';
            res = {{"girth", report::girth_json(gi)}};
        } else if (gen->parsed()) {
            Graph g;
            std::vector<std::string> comments;
            if (gen_cycle->parsed()) {
                g = generate::cycle(n);
                comments.push_back("cycle C" + std::to_string(n));
            } else if (gen_complete->parsed()) {
                g = generate::complete(n);
                comments.push_back("complete K" + std::to_string(n));
            } else if (gen_myc->parsed()) {
                g = base_path.empty() ? generate::complete(2) : load(base_path);
                for (int d = 0; d < depth; ++d)
                    g = generate::mycielskian(g);
                comments.push_back("Mycielski depth " + std::to_string(depth));
            } else if (gen_random->parsed()) {
                g = generate::random(n, p, ctx.seed);
                std::ostringstream os;
                os << "G(" << n << ", " << p << ") seed " << ctx.seed;
                comments.push_back(os.str());
                modes["randomized"] = true;
            } else if (gen_kneser->parsed()) {
                g = kneser(n, k);
                comments.push_back("Kneser KG(" + std::to_string(n) + "," + std::to_string(k) + ")");
                if (!sidecar.empty()) {
                    std::string text;
                    auto labels = kneser_labels(n, k);
                    for (std::size_t i = 0; i < labels.size(); ++i)
                        text += std::to_string(i + 1) + " " + labels[i] + "\n";
                    detail::emit_text(sidecar, text);
                }
            } else if (gen_blowup->parsed()) {
                auto b = blow_up(load(base_path), m);
                g = b.graph;
                comments.push_back("blow-up power " + std::to_string(m));
                if (!sidecar.empty()) {
                    std::ostringstream os;
                    write_embedding(os, b.embedding);
                    detail::emit_text(sidecar, os.str());
                }
            }
            detail::emit_graph(g, output, comments, out);
            res = {{"graph", report::graph_summary(g)}};
        } else if (kgbu->parsed()) {
            auto e = kgbu_embedding(n, k, t, xi);
            int hn = n * t;
            int hk = k * t - xi;
            if (!output.empty())
                dimacs::write_file(output, e.host,
                                   {"Kneser KG(" + std::to_string(hn) + "," + std::to_string(hk) + ")"});
            if (!sidecar.empty()) {
                std::ostringstream os;
                write_embedding(os, e);
                detail::emit_text(sidecar, os.str());
            }
            out << "KG(" << n << "," << k << ")^(" << e.power << ") inside KG(" << hn << "," << hk << "): verified\n";
            res = {{"power", e.power}, {"base", report::graph_summary(e.base)}, {"host", report::graph_summary(e.host)},
                   {"verified", true}};
        } else if (descend->parsed()) {
            Graph g = load(input);
            auto trace = rodl_descent(g, detail::parse_list(thresholds));
            out << to_string(trace.outcome) << " pivots:";
            for (Vertex v : trace.pivots())
                out << ' ' << (v + 1);
            out << '\n';
            res = report::descent(trace);
        } else if (extract->parsed()) {
            Graph g = load(input);
            VertexWeighting w = weights == "alpha" ? alpha_f_weights(g).weights : VertexWeighting::uniform(g.order());
            OrderedWeightedGraph owg(g, w);
            auto cert = extract_triangle_free(owg, parse_rational(x_text), parse_rational(l_text), budget, ctx.seed);
            if (!output.empty())
                dimacs::write_file(output, cert.h, {"triangle-free spanning subgraph"});
            out << (cert.accepted ? "accepted" : "best-effort") << " max_weight " << to_display_string(cert.max_weight)
                << " target " << to_display_string(cert.target) << " attempts " << cert.attempts << '\n';
            modes["result"] = cert.accepted ? "accepted" : "best-effort";
            modes["weights"] = weights;
            res = report::certificate(cert);
            if (!certificate_consistent(owg, cert))
                throw InvariantViolation("extraction certificate failed recomputation");
        } else if (sparsify_cmd->parsed()) {
            Graph base = load(input);
            PipelineOptions opts;
            opts.p_override = p_override;
            opts.strategy = strategy == "resample" ? SamplingStrategy::resample : SamplingStrategy::rejection;
            std::size_t index = 0;
            if (!export_dir.empty()) {
                std::filesystem::create_directories(export_dir);
                opts.observer = [&](const Graph& h, const SampleRecord&) {
                    auto stem = std::filesystem::path(export_dir) / ("sample_" + std::to_string(index++));
                    dimacs::write_file(stem.string() + ".col", h);
                    std::string text;
                    for (const auto& c : short_cycles(h, gg)) {
                        for (std::size_t i = 0; i < c.size(); ++i)
                            text += (i ? " " : "") + std::to_string(c[i] + 1);
                        text += '\n';
                    }
                    dimacs::write_atomic(stem.string() + ".cycles", text);
                };
            }
            auto rep = but_pipeline(base, xi, gg, m, ctx.seed, budget, opts);
            out << "samples " << rep.samples.size() << " girth_ok " << rep.girth_successes << " chi_ok "
                << rep.chi_successes << " both " << rep.successes << " p " << rep.p << '\n';
            modes["faithful"] = rep.faithful;
            modes["p"] = p_override ? "override" : "faithful";
            modes["strategy"] = to_string(rep.strategy);
            res = report::pipeline(rep);
        } else if (rodl_bounds->parsed()) {
            if (x_min > x_max || x_min < 1)
                throw InvalidArgument("need 1 <= x-min <= x-max");
            std::vector<long long> failures;
            for (auto x = static_cast<long long>(std::ceil(x_min)); x <= static_cast<long long>(x_max); ++x)
                if (!recursive_bound_holds(static_cast<double>(x)))
                    failures.push_back(x);
            if (failures.empty()) {
                out << "holds for all integers in [" << x_min << ", " << x_max << "]\n";
            } else {
                out << "fails at";
                for (std::size_t i = 0; i < failures.size() && i < 20; ++i)
                    out << ' ' << failures[i];
                out << (failures.size() > 20 ? " ..." : "") << '\n';
                code = check_failed;
            }
            res = {{"x_min", report::real(x_min)}, {"x_max", report::real(x_max)}, {"failures", failures}};
        } else if (lll->parsed()) {
            if (s <= 0) {
                double bound = std::exp((2.0 * gg - 4) * std::log(xd * delta));
                s = std::nextafter(bound, std::numeric_limits<double>::infinity());
            }
            auto r = lll_inequalities_hold(xd, delta, gg, s);
            out << "ineq3 " << (r.ineq3 ? "holds" : "fails") << ", ineq4 "
                << (r.ineq4 ? "holds" : "fails") << '\n';
            res = report::lll(r);
            res["s"] = report::real(s);
            code = r.ineq3 && r.ineq4 ? ok : check_failed;
        } else if (dense->parsed()) {
            double hi = std::max(x_min, dense->count("--x-max") ? x_max : x_min);
            json values = json::array();
            bool all = true;
            for (double x = x_min; x <= hi; x += 1.0) {
                double b = dense_probability_base(x);
                all = all && b < 0.5;
                if (values.size() < 1000)
                    values.push_back({{"x", x}, {"base", report::real(b)}});
            }
            out << "base " << dense_probability_base(x_min) << " at x = " << x_min << (all ? ", below 1/2" : ", not below 1/2 everywhere") << '\n';
            res = {{"holds", all}, {"values", values}};
            code = all ? ok : check_failed;
        } else if (kparams->parsed()) {
            auto pr = eh_kneser_params(k, gg, xi, n);
            bool all = pr.ineq7 && pr.ineq8 && pr.ineq9 && pr.power_sufficient;
            out << "t " << pr.t << (pr.t_rounded ? " (rounded)" : "") << " z " << to_display_string(pr.z) << " ineq7 "
                << pr.ineq7 << " ineq8 " << pr.ineq8 << " ineq9 " << pr.ineq9 << " power_sufficient "
                << pr.power_sufficient << '\n';
            res = {{"t", pr.t},
                   {"t_rounded", pr.t_rounded},
                   {"z", report::rational(pr.z)},
                   {"base_top", pr.base_top},
                   {"base_top_rounded", pr.base_top_rounded},
                   {"log_m", report::real(pr.log_m)},
                   {"log_delta", report::real(pr.log_delta)},
                   {"log_required", report::real(pr.log_required)},
                   {"branch", pr.branch},
                   {"x_above_k_squared", pr.x_above_k_squared},
                   {"ineq7", pr.ineq7},
                   {"ineq8", pr.ineq8},
                   {"ineq9", pr.ineq9},
                   {"power_sufficient", pr.power_sufficient}};
            code = all ? ok : check_failed;
        }

        if (!json_path.empty()) {
            ctx.rep.results()["exit_code"] = code;
            ctx.rep.write(json_path);
        }
        return code;
    } catch (const CapExceeded& e) {
        err << "chroma: cap exceeded: " << e.what() << '\n';
        return cap;
    } catch (const InvariantViolation& e) {
        err << "chroma: check failed: " << e.what() << '\n';
        return check_failed;
    } catch (const ParseError& e) {
        err << "chroma: " << e.what() << '\n';
        return usage;
    } catch (const InvalidArgument& e) {
        err << "chroma: " << e.what() << '\n';
        return usage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "chroma: " << e.what() << '\n';
        return usage;
    }
}

} // namespace chroma::cli
