#pragma once

#include <random>
#include <vector>

#include "afav/core.hpp"

// Hand-rolled generators for the property suites. Everything is seeded, so a
// failure reproduces exactly.
namespace testgen {

using afav::AffineOperator;
using afav::AffineState;
using afav::Rational;

inline Rational random_rational(std::mt19937_64& g) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    return Rational(num(g), den(g));
}

/// Random entry-sum-1 vector: free entries drawn, the last fixed up.
inline AffineState random_affine_state(std::mt19937_64& g, std::size_t dim) {
    std::vector<Rational> e;
    Rational sum(0);
    for (std::size_t i = 0; i + 1 < dim; ++i) {
        e.push_back(random_rational(g));
        sum += e.back();
    }
    e.push_back(1 - sum);
    return AffineState::validate(std::move(e));
}

/// Random column-sum-1 matrix: free rows drawn, the last row fixed up.
inline AffineOperator random_affine_operator(std::mt19937_64& g, std::size_t dim) {
    std::vector<std::vector<Rational>> rows(dim, std::vector<Rational>(dim));
    for (std::size_t c = 0; c < dim; ++c) {
        Rational sum(0);
        for (std::size_t r = 0; r + 1 < dim; ++r) {
            rows[r][c] = random_rational(g);
            sum += rows[r][c];
        }
        rows[dim - 1][c] = 1 - sum;
    }
    return AffineOperator::validate(std::move(rows));
}

}  // namespace testgen
