#pragma once

// JSON run reports. Everything under "results" and "modes" is a function of the
// command, seed and inputs; wall-clock data lives under "timing" only.

#include <chroma/dimacs.hpp>
#include <chroma/extractor.hpp>
#include <chroma/fractional.hpp>
#include <chroma/rodl.hpp>
#include <chroma/sparsifier.hpp>

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

namespace chroma::report {

using json = nlohmann::ordered_json;

inline json rational(const Rational& q) { return to_fraction_string(q); }

inline json rationals(const std::vector<Rational>& qs)
{
    json out = json::array();
    for (const auto& q : qs)
        out.push_back(rational(q));
    return out;
}

// Non-finite doubles have no JSON form; they travel as strings.
inline json real(double v)
{
    if (std::isfinite(v))
        return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline json log_value(const LogValue& v)
{
    if (v.overflow)
        return {{"overflow", true}};
    return {{"log", real(v.log)}, {"exact", v.exact}, {"overflow", false}};
}

inline json graph_summary(const Graph& g)
{
    return {{"vertices", g.order()}, {"edges", g.size()}, {"digest", dimacs::digest(g)}};
}

inline json girth_json(const Girth& g)
{
    if (g.infinite())
        return "inf";
    return *g.length;
}

inline json coloring(const FractionalColoring& fc)
{
    json out = json::array();
    for (const auto& e : fc.entries) {
        json set = json::array();
        for (Vertex v : e.set)
            set.push_back(v + 1);
        out.push_back({{"weight", rational(e.weight)}, {"set", set}});
    }
    return out;
}

inline json vertices(const std::vector<Vertex>& vs)
{
    json out = json::array();
    for (Vertex v : vs)
        out.push_back(v + 1);
    return out;
}

inline json descent(const DescentTrace& t)
{
    json steps = json::array();
    for (const auto& s : t.steps) {
        json step{{"vertices", vertices(s.vertices)}, {"threshold", rational(s.threshold)}};
        step["pivot"] = s.pivot ? json(*s.pivot + 1) : json(nullptr);
        step["pivot_left_chi_f"] = rational(s.pivot_left_chi_f);
        step["weights"] = rationals(s.weights);
        steps.push_back(step);
    }
    return {{"outcome", to_string(t.outcome)}, {"pivots", vertices(t.pivots())}, {"steps", steps}};
}

inline json certificate(const ExtractionCertificate& c)
{
    json family = json::array();
    for (const auto& m : c.family)
        family.push_back({{"set", vertices(m.set)},
                          {"max_weight", rational(m.max_weight)},
                          {"bound", rational(m.bound)},
                          {"h_edges", m.h.size()}});
    return {{"h", graph_summary(c.h)},
            {"triangle_free", c.triangle_free},
            {"max_weight", rational(c.max_weight)},
            {"max_set", vertices(c.max_set)},
            {"target", rational(c.target)},
            {"accepted", c.accepted},
            {"identity", c.identity},
            {"attempts", c.attempts},
            {"family", family},
            {"family_maximal", c.family_maximal},
            {"h0_edges", c.h0_edges}};
}

inline json but_params(const ButParams& b)
{
    return {{"x", b.x},
            {"delta", b.delta},
            {"g", b.g},
            {"m", b.m.str()},
            {"s", rational(b.s)},
            {"lambda", rational(b.lambda)},
            {"p", real(b.p)},
            {"log_bound", real(b.log_bound)},
            {"valid", b.valid}};
}

inline json lll(const LLLInequalities& r)
{
    return {{"ineq3", r.ineq3},
            {"ineq4", r.ineq4},
            {"log_lhs3", real(r.log_lhs3)},
            {"log_rhs3", real(r.log_rhs3)},
            {"log_lhs4", real(r.log_lhs4)},
            {"log_rhs4", real(r.log_rhs4)},
            {"log_binomial_term", real(r.log_binomial_term)},
            {"binomial_exact", r.binomial_exact},
            {"intermediate3", r.intermediate3},
            {"intermediate4", r.intermediate4},
            {"simplification_valid", r.simplification_valid}};
}

inline json pipeline(const PipelineReport& r)
{
    json samples = json::array();
    for (const auto& s : r.samples) {
        json rec{{"girth", girth_json(s.girth)}, {"girth_ok", s.girth_ok}};
        rec["chi"] = s.chi ? json(*s.chi) : json(nullptr);
        rec["chi_ok"] = s.chi_ok;
        rec["edges"] = s.edges;
        rec["short_cycles"] = s.short_cycles;
        if (r.strategy == SamplingStrategy::resample) {
            rec["resample_steps"] = s.resample_steps;
            rec["resample_converged"] = s.resample_converged;
        }
        samples.push_back(rec);
    }
    return {{"params", but_params(r.params)},
            {"p", real(r.p)},
            {"base_chi", r.base_chi},
            {"host_order", r.host_order},
            {"host_edges", r.host_edges},
            {"chi_checked", r.chi_checked},
            {"girth_successes", r.girth_successes},
            {"chi_successes", r.chi_successes},
            {"successes", r.successes},
            {"lll", lll(r.lll)},
            {"samples", samples}};
}

inline std::string utc_now()
{
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Schema 1 run report.
class RunReport {
public:
    RunReport(std::vector<std::string> command, std::uint64_t seed)
        : command_(std::move(command)), seed_(seed), started_(utc_now()), clock_(std::chrono::steady_clock::now())
    {
    }

    void input(const std::string& path, const Graph& g)
    {
        inputs_.push_back({{"path", path}, {"digest", dimacs::digest(g)}, {"vertices", g.order()}, {"edges", g.size()}});
    }

    json& results() { return results_; }
    json& modes() { return modes_; }

    json to_json() const
    {
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_).count();
        return {{"schema", 1},
                {"command", command_},
                {"seed", seed_},
                {"inputs", inputs_},
                {"modes", modes_},
                {"results", results_},
                {"timing", {{"started", started_}, {"finished", utc_now()}, {"elapsed_seconds", elapsed}}}};
    }

    void write(const std::filesystem::path& path) const { dimacs::write_atomic(path, to_json().dump(2) + "\n"); }

private:
    std::vector<std::string> command_;
    std::uint64_t seed_;
    std::string started_;
    std::chrono::steady_clock::time_point clock_;
    json inputs_ = json::array();
    json modes_ = json::object();
    json results_ = json::object();
};

} // namespace chroma::report
