#pragma once

#include "afav/errors.hpp"
#include "afav/rational.hpp"

namespace afav {

/// Closed interval [lo, hi] of Rationals. Point intervals carry exact values;
/// wider intervals carry certified truncation bounds.
struct Interval {
    Rational lo;
    Rational hi;

    static Interval point(Rational v) { return {v, v}; }
    static Interval bounds(Rational lo, Rational hi);

    bool is_point() const { return lo == hi; }
    Rational width() const { return hi - lo; }

    /// Interval of |x| over x in [lo, hi].
    Interval abs() const;

    Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
    Interval operator-(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }
    Interval operator*(const Rational& s) const;
    Interval operator+(const Rational& s) const { return {lo + s, hi + s}; }
    Interval operator-(const Rational& s) const { return {lo - s, hi - s}; }

    bool operator==(const Interval&) const = default;
};

/// Certified [lo, hi] bounds on a probability mass; 0 <= lo <= hi <= 1.
struct ProbabilityInterval {
    Rational lo;
    Rational hi;

    static ProbabilityInterval point(Rational v);
    static ProbabilityInterval bounds(Rational lo, Rational hi);

    bool is_point() const { return lo == hi; }
    Interval as_interval() const { return {lo, hi}; }

    bool operator==(const ProbabilityInterval&) const = default;
};

}  // namespace afav
