#pragma once

#include <stdexcept>
#include <string>

#include "afav/rational.hpp"

namespace afav {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SumNotOne : Error {
    Rational actual;
    explicit SumNotOne(Rational a)
        : Error("affine state entries sum to " + to_fraction(a) + ", expected 1"),
          actual(std::move(a)) {}
};

struct ColumnSumNotOne : Error {
    std::size_t column;  // 1-based
    Rational actual;
    ColumnSumNotOne(std::size_t col, Rational a)
        : Error("column " + std::to_string(col) + " sums to " + to_fraction(a) +
                ", expected 1"),
          column(col),
          actual(std::move(a)) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct InvalidSymbol : Error {
    using Error::Error;
};

struct NotDiverged : Error {
    NotDiverged() : Error("no wrong guess recorded yet") {}
};

struct UnknownOperator : Error {
    using Error::Error;
};

struct MissingTransition : Error {
    using Error::Error;
};

struct InvalidOperator : Error {
    using Error::Error;
};

struct HeadOutOfTape : Error {
    using Error::Error;
};

struct Halted : Error {
    Halted() : Error("configuration is already halted") {}
};

struct UnsupportedParams : Error {
    using Error::Error;
};

struct UnresolvedChoice : Error {
    using Error::Error;
};

struct InconclusiveAtDepth : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct AlphabetMismatch : Error {
    using Error::Error;
};

}  // namespace afav
