#pragma once

#include "errors.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace chroma {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Always "num/den", including integers ("3/1"). Used by every file and JSON format.
inline std::string to_fraction_string(const Rational& q)
{
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Human form: "3" or "5/2".
inline std::string to_display_string(const Rational& q)
{
    return q.str();
}

inline double to_double(const Rational& q)
{
    return q.convert_to<double>();
}

/// Accepts integers ("7"), fractions ("5/2") and plain decimals ("2.9"). No exponents.
inline Rational parse_rational(std::string_view text)
{
    auto fail = [&] { throw InvalidArgument("not a rational number: '" + std::string(text) + "'"); };
    if (text.empty())
        fail();
    auto is_int = [](std::string_view s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                return false;
        return true;
    };
    auto to_big = [](std::string_view s) {
        if (!s.empty() && s[0] == '+')
            s.remove_prefix(1);
        return BigInt(std::string(s));
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+')
            fail();
        BigInt d = to_big(den);
        if (d == 0)
            fail();
        return Rational(to_big(num), d);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (frac.empty() || frac[0] == '-' || frac[0] == '+')
            fail();
        bool negative = !whole.empty() && whole[0] == '-';
        std::string digits = std::string(whole) + std::string(frac);
        if (whole.empty() || whole == "-" || whole == "+")
            digits = (negative ? "-0" : "0") + std::string(frac);
        if (!is_int(digits))
            fail();
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        return Rational(to_big(digits), scale);
    }
    if (!is_int(text))
        fail();
    return Rational(to_big(text));
}

inline BigInt floor_of(const Rational& q)
{
    BigInt n = numerator(q);
    BigInt d = denominator(q);
    BigInt quotient = n / d;
    if (n % d != 0 && n < 0)
        quotient -= 1;
    return quotient;
}

inline BigInt ceil_of(const Rational& q)
{
    BigInt f = floor_of(q);
    return Rational(f) == q ? f : f + 1;
}

} // namespace chroma
