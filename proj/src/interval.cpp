#include "afav/interval.hpp"

namespace afav {

Interval Interval::bounds(Rational lo, Rational hi) {
    if (lo > hi) throw Error("interval lo > hi");
    return {std::move(lo), std::move(hi)};
}

Interval Interval::abs() const {
    if (lo >= 0) return *this;
    if (hi <= 0) return {-hi, -lo};
    return {Rational(0), std::max(Rational(-lo), hi)};
}

Interval Interval::operator*(const Rational& s) const {
    if (s >= 0) return {lo * s, hi * s};
    return {hi * s, lo * s};
}

ProbabilityInterval ProbabilityInterval::point(Rational v) {
    return bounds(v, v);
}

ProbabilityInterval ProbabilityInterval::bounds(Rational lo, Rational hi) {
    if (lo < 0 || hi > 1 || lo > hi)
        throw Error("probability interval out of range: [" + to_fraction(lo) + ", " +
                    to_fraction(hi) + "]");
    return {std::move(lo), std::move(hi)};
}

}  // namespace afav
