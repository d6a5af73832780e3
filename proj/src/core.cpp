#include "afav/core.hpp"

namespace afav {

AffineState AffineState::validate(std::vector<Rational> entries) {
    if (entries.empty()) throw DimensionMismatch("affine state needs dimension >= 1");
    Rational sum(0);
    for (const auto& e : entries) sum += e;
    if (sum != 1) throw SumNotOne(sum);
    return AffineState(std::move(entries));
}

AffineState AffineState::basis(std::size_t dimension, std::size_t index) {
    if (index < 1 || index > dimension)
        throw DimensionMismatch("basis index out of range");
    std::vector<Rational> e(dimension, Rational(0));
    e[index - 1] = 1;
    return AffineState(std::move(e));
}

Rational AffineState::norm() const {
    Rational n(0);
    for (const auto& e : entries_) n += rat_abs(e);
    return n;
}

AffineOperator AffineOperator::validate(std::vector<std::vector<Rational>> rows) {
    const std::size_t m = rows.size();
    if (m == 0) throw DimensionMismatch("affine operator needs dimension >= 1");
    for (const auto& r : rows)
        if (r.size() != m) throw DimensionMismatch("affine operator must be square");
    for (std::size_t col = 0; col < m; ++col) {
        Rational sum(0);
        for (std::size_t row = 0; row < m; ++row) sum += rows[row][col];
        if (sum != 1) throw ColumnSumNotOne(col + 1, sum);
    }
    return AffineOperator(std::move(rows));
}

AffineOperator AffineOperator::identity(std::size_t dimension) {
    std::vector<std::vector<Rational>> rows(dimension, std::vector<Rational>(dimension, Rational(0)));
    for (std::size_t i = 0; i < dimension; ++i) rows[i][i] = 1;
    return AffineOperator(std::move(rows));
}

AffineOperator AffineOperator::compose(const AffineOperator& rhs) const {
    const std::size_t m = dimension();
    if (rhs.dimension() != m) throw DimensionMismatch("operator dimensions differ");
    std::vector<std::vector<Rational>> out(m, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            if (rows_[i][k] == 0) continue;
            for (std::size_t j = 0; j < m; ++j)
                out[i][j] += rows_[i][k] * rhs.rows_[k][j];
        }
    return AffineOperator(std::move(out));
}

AffineState apply(const AffineOperator& op, const AffineState& v) {
    const std::size_t m = op.dimension();
    if (v.dimension() != m) throw DimensionMismatch("operator/state dimensions differ");
    std::vector<Rational> out(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (op.at(i, j) == 0) continue;
            out[i] += op.at(i, j) * v[j];
        }
    return AffineState::validate(std::move(out));
}

std::vector<WeightingOutcome> weight(const AffineState& v) {
    const Rational n = v.norm();
    std::vector<WeightingOutcome> outcomes;
    for (std::size_t j = 0; j < v.dimension(); ++j) {
        if (v[j] == 0) continue;
        outcomes.push_back(WeightingOutcome{
            j + 1, rat_abs(v[j]) / n, AffineState::basis(v.dimension(), j + 1)});
    }
    return outcomes;
}

}  // namespace afav
