#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "symx/errors.hpp"

namespace symx {

// Arbitrary-precision fraction, kept in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using Integer  = boost::multiprecision::cpp_int;

enum class ScalarRegime { ExactRational, Float64 };

template <class T>
inline constexpr bool is_exact_scalar_v = std::is_same_v<T, Rational>;

template <class T>
T abs_value(const T& x) {
    using std::abs;
    return abs(x);
}

/// num/den with the sign moved to the numerator; throws on zero denominator.
inline Rational make_rational(Integer num, Integer den) {
    if (den == 0) throw SymxError("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    return Rational(std::move(num), std::move(den));
}

/// Round-to-nearest, ties-to-even conversion (the only exact->float path).
inline double to_double(const Rational& q) {
    if (q == 0) return 0.0;
    Integer num = boost::multiprecision::numerator(q);
    Integer den = boost::multiprecision::denominator(q);
    const bool neg = num < 0;
    if (neg) num = -num;

    // Scale so the integer quotient carries 54 or 55 significant bits.
    const long k = 54 - (long(boost::multiprecision::msb(num)) -
                         long(boost::multiprecision::msb(den)));
    Integer n = num, d = den;
    if (k >= 0) n <<= k; else d <<= -k;

    Integer quot, rem;
    boost::multiprecision::divide_qr(n, d, quot, rem);

    const long extra = long(boost::multiprecision::msb(quot)) + 1 - 53;
    Integer mant = quot >> extra;
    const Integer dropped = quot - (mant << extra);
    const Integer half = Integer(1) << (extra - 1);
    if (dropped > half ||
        (dropped == half && (rem != 0 || boost::multiprecision::bit_test(mant, 0)))) {
        ++mant;
    }
    long exp2 = extra - k;
    if (boost::multiprecision::msb(mant) == 53) { mant >>= 1; ++exp2; }

    const double r = std::ldexp(mant.convert_to<double>(), int(exp2));
    return neg ? -r : r;
}

inline double to_double(double x) { return x; }

/// "p/q" in lowest terms, or plain "p" for integers.
inline std::string format_scalar(const Rational& q) {
    const Integer& den = boost::multiprecision::denominator(q);
    std::string s = boost::multiprecision::numerator(q).str();
    if (den != 1) s += "/" + den.str();
    return s;
}

/// Shortest decimal that parses back to the same double.
inline std::string format_scalar(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// Fixed 17-significant-digit form used for report printing.
inline std::string format_double_17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

// Decimal literal with optional fraction part and exponent, parsed exactly.
inline Rational parse_decimal_rational(std::string_view tok, int line, int column) {
    std::string_view s = tok;
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    long exp10 = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view es = s.substr(epos + 1);
        s = s.substr(0, epos);
        bool eneg = false;
        if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
            eneg = es[0] == '-';
            es.remove_prefix(1);
        }
        if (!all_digits(es)) throw ParseError("bad exponent in '" + std::string(tok) + "'", line, column);
        exp10 = std::stol(std::string(es));
        if (eneg) exp10 = -exp10;
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view frac = s.substr(dot + 1);
        digits = std::string(s.substr(0, dot)) + std::string(frac);
        exp10 -= long(frac.size());
    } else {
        digits = std::string(s);
    }
    if (!all_digits(digits)) throw ParseError("bad numeric literal '" + std::string(tok) + "'", line, column);
    Integer mant(digits);
    if (neg) mant = -mant;
    Integer num = mant, den = 1;
    if (exp10 >= 0) {
        num *= boost::multiprecision::pow(Integer(10), unsigned(exp10));
    } else {
        den = boost::multiprecision::pow(Integer(10), unsigned(-exp10));
    }
    return make_rational(num, den);
}

} // namespace detail

/// Accepts "p", "p/q", and decimal literals ("0.5", "1e-2"), all exactly.
inline Rational parse_rational_token(std::string_view tok, int line = 0, int column = 0) {
    if (tok.empty()) throw ParseError("empty numeric field", line, column);
    if (auto slash = tok.find('/'); slash != std::string_view::npos) {
        std::string_view ns = tok.substr(0, slash);
        std::string_view ds = tok.substr(slash + 1);
        std::string_view nd = ns;
        if (!nd.empty() && (nd[0] == '+' || nd[0] == '-')) nd.remove_prefix(1);
        if (!detail::all_digits(nd) || !detail::all_digits(ds))
            throw ParseError("bad fraction literal '" + std::string(tok) + "'", line, column);
        Integer num{std::string(ns)}, den{std::string(ds)};
        if (den == 0) throw ParseError("zero denominator in '" + std::string(tok) + "'", line, column);
        return make_rational(std::move(num), std::move(den));
    }
    return detail::parse_decimal_rational(tok, line, column);
}

inline double parse_double_token(std::string_view tok, int line = 0, int column = 0) {
    if (tok.empty()) throw ParseError("empty numeric field", line, column);
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        // from_chars rejects a leading '+'; tolerate it.
        if (!tok.empty() && tok[0] == '+') return parse_double_token(tok.substr(1), line, column);
        throw ParseError("bad numeric literal '" + std::string(tok) + "'", line, column);
    }
    if (!std::isfinite(v))
        throw NonFiniteValueError("non-finite value '" + std::string(tok) + "' rejected");
    return v;
}

template <class T>
T parse_scalar_token(std::string_view tok, int line = 0, int column = 0) {
    if constexpr (is_exact_scalar_v<T>)
        return parse_rational_token(tok, line, column);
    else
        return parse_double_token(tok, line, column);
}

} // namespace symx
