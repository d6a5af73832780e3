#include "afav/rational.hpp"

#include <sstream>

namespace afav {

Rational rat_pow(const Rational& base, unsigned long exp) {
    Rational result(1);
    Rational b = base;
    while (exp > 0) {
        if (exp & 1) result *= b;
        b *= b;
        exp >>= 1;
    }
    return result;
}

std::string to_fraction(const Rational& q) {
    std::ostringstream os;
    os << numerator(q) << "/" << denominator(q);
    return os.str();
}

Rational parse_fraction(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Int(text));
        }
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den <= 0) throw std::invalid_argument("denominator must be positive: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("not a fraction: " + text);
    }
}

std::string to_decimal(const Rational& q, int digits) {
    bool neg = q < 0;
    Rational a = neg ? Rational(-q) : q;
    Int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Int scaled = numerator(a) * scale / denominator(a);
    Int whole = scaled / scale;
    Int frac = scaled % scale;
    std::ostringstream os;
    if (neg) os << '-';
    os << whole << '.';
    std::string f = frac.str();
    os << std::string(static_cast<std::size_t>(digits) - f.size(), '0') << f;
    return os.str();
}

}  // namespace afav
