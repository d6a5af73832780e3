#pragma once

#include <cstddef>
#include <vector>

#include "afav/errors.hpp"
#include "afav/rational.hpp"

namespace afav {

/// Vector over Rationals whose entries sum to exactly 1. Entries may be
/// negative (unlike a probability distribution). Immutable after validation.
class AffineState {
public:
    static AffineState validate(std::vector<Rational> entries);
    static AffineState basis(std::size_t dimension, std::size_t index);  // 1-based index

    const std::vector<Rational>& entries() const { return entries_; }
    const Rational& operator[](std::size_t i) const { return entries_[i]; }  // 0-based
    std::size_t dimension() const { return entries_.size(); }

    /// l1 norm |v|.
    Rational norm() const;

    bool operator==(const AffineState&) const = default;

private:
    explicit AffineState(std::vector<Rational> e) : entries_(std::move(e)) {}
    std::vector<Rational> entries_;
};

/// Square matrix over Rationals with every plain column sum equal to 1.
/// Application preserves the AffineState invariant.
class AffineOperator {
public:
    static AffineOperator validate(std::vector<std::vector<Rational>> rows);
    static AffineOperator identity(std::size_t dimension);

    std::size_t dimension() const { return rows_.size(); }
    const Rational& at(std::size_t row, std::size_t col) const { return rows_[row][col]; }
    const std::vector<std::vector<Rational>>& rows() const { return rows_; }

    /// Matrix product this * rhs; the result is again column-sum-1.
    AffineOperator compose(const AffineOperator& rhs) const;

    bool operator==(const AffineOperator&) const = default;

private:
    explicit AffineOperator(std::vector<std::vector<Rational>> r) : rows_(std::move(r)) {}
    std::vector<std::vector<Rational>> rows_;
};

/// Exact matrix-vector product. Throws DimensionMismatch.
AffineState apply(const AffineOperator& op, const AffineState& v);

struct WeightingOutcome {
    std::size_t index;        // 1-based state index
    Rational probability;     // |v_index| / |v|
    AffineState post_state;   // e_index
};

/// Weighting operator: one outcome per nonzero entry, probability |v_j|/|v|
/// under the l1 norm; the register collapses to the observed basis state.
std::vector<WeightingOutcome> weight(const AffineState& v);

}  // namespace afav
