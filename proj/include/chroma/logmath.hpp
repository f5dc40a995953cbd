#pragma once

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

namespace chroma {

/// ln Gamma(z) for z > 0 by the Lanczos approximation (g = 7, 9 terms), with
/// reflection below 1/2. Relative error below 1e-12 away from the roots at 1 and 2,
/// absolute error below 1e-13 near them.
inline double lanczos_lgamma(double z)
{
    static constexpr std::array<double, 9> coeff{
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    if (!(z > 0.0) || !std::isfinite(z))
        throw InvalidArgument("log-gamma domain is z > 0");
    if (z < 0.5)
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * z)) - lanczos_lgamma(1.0 - z);
    z -= 1.0;
    double x = coeff[0];
    for (std::size_t i = 1; i < coeff.size(); ++i)
        x += coeff[i] / (z + static_cast<double>(i));
    double t = z + g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

/// ln C(n, k) for real 0 <= k <= n through log-gamma.
inline double log_binomial(double n, double k)
{
    if (k < 0.0 || k > n)
        throw InvalidArgument("log_binomial needs 0 <= k <= n");
    return lanczos_lgamma(n + 1.0) - lanczos_lgamma(k + 1.0) - lanczos_lgamma(n - k + 1.0);
}

/// ln(sum exp(terms)); -inf for an empty span.
inline double log_sum_exp(std::span<const double> terms)
{
    double hi = -std::numeric_limits<double>::infinity();
    for (double t : terms)
        hi = std::max(hi, t);
    if (!std::isfinite(hi))
        return hi;
    double s = 0.0;
    for (double t : terms)
        s += std::exp(t - hi);
    return hi + std::log(s);
}

/// Relative tolerance for every comparison between log-space quantities.
inline constexpr double log_tolerance = 1e-9;

/// `a <= b` for log-space values, treating |a - b| <= tol * max(1, |a|, |b|) as equal.
inline bool log_leq(double a, double b, double tol = log_tolerance)
{
    return a <= b + tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Strict `a < b`: fails when the two agree within tolerance.
inline bool log_less(double a, double b, double tol = log_tolerance)
{
    return a < b - tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Natural logarithm of a positive quantity too large for fixed width numbers.
struct LogValue {
    double log = 0.0;
    bool exact = false;    ///< the represented number is known exactly (e.g. an integer input)
    bool overflow = false; ///< the logarithm itself left double range; `log` is meaningless

    static LogValue of(double positive, bool is_exact = false)
    {
        if (!(positive > 0.0))
            throw InvalidArgument("LogValue needs a positive quantity");
        return {std::log(positive), is_exact, false};
    }
    static LogValue from_log(double l, bool is_exact = false)
    {
        if (!std::isfinite(l))
            return {0.0, false, true};
        return {l, is_exact, false};
    }

    /// exp(log) when representable.
    double value() const { return overflow ? std::numeric_limits<double>::infinity() : std::exp(log); }

    std::string str() const { return overflow ? std::string("overflow") : "exp(" + std::to_string(log) + ")"; }
};

} // namespace chroma
