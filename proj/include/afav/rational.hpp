#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace afav {

using Int = boost::multiprecision::cpp_int;

/// Exact arbitrary-precision fraction. Always stored in lowest terms with a
/// positive denominator; arithmetic never rounds.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) {
    return Rational(Int(num), Int(den));
}

inline Rational rat_abs(const Rational& q) {
    return q < 0 ? Rational(-q) : q;
}

Rational rat_pow(const Rational& base, unsigned long exp);

/// Serializes as "num/den" (always with an explicit denominator, e.g. "2/7",
/// "0/1", "1/1") so report fields stay unambiguous and diff-friendly.
std::string to_fraction(const Rational& q);

/// Parses "num/den" or a bare integer. Throws std::invalid_argument.
Rational parse_fraction(const std::string& text);

/// Decimal approximation for human-facing output only; never fed back into
/// any computation.
std::string to_decimal(const Rational& q, int digits = 6);

}  // namespace afav
