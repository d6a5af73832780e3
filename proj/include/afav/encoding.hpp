#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "afav/interval.hpp"
#include "afav/rational.hpp"

namespace afav {

/// Total membership oracle for a language over {0..r-1}. The membership
/// function must be pure: deterministic, side-effect free, total.
///
/// With support_bound set, membership is 0 for every string longer than the
/// bound, so alpha values below are exact finite Rational sums. Without it,
/// alpha values are certified truncation intervals.
struct LanguageOracle {
    int alphabet_size = 2;
    std::function<bool(const std::string&)> membership;
    std::optional<int> support_bound;
    std::string name;

    bool finite() const { return support_bound.has_value(); }

    /// Validates symbols, then queries membership.
    bool contains(const std::string& w) const;

    /// G_L(Sigma*(i)): the i-th digit of the language's characteristic
    /// sequence in shortlex order (1-based).
    int digit(const Int& shortlex_i) const;

    static LanguageOracle from_members(int alphabet_size, std::vector<std::string> members,
                                       std::string name = "");
    static LanguageOracle empty(int alphabet_size);
    static LanguageOracle all_strings(int alphabet_size, int support_bound);
};

/// 1-based position of w in shortlex order over {0..r-1}. For r = 2 this
/// equals (1w) read as a binary number.
Int shortlex_index(const std::string& w, int r);

/// Inverse of shortlex_index.
std::string shortlex_string(const Int& i, int r);

/// alpha_L[j] in base d, plus bookkeeping for how it was obtained.
struct AlphaValue {
    ProbabilityInterval value;
    int base = 6;
    Int start_index = 1;
    int truncation_depth = -1;  // -1: exact (finite support)

    bool exact() const { return truncation_depth < 0; }
};

/// alpha_L[j] = sum_{i >= j} G_L(Sigma*(i)) / d^(i-j+1). Exact point value
/// when the oracle has finite support; otherwise an interval whose width is
/// at most d^(-depth) / (d-1).
AlphaValue alpha_value(const LanguageOracle& L, int d, const Int& j, int depth = 0);

/// alpha_L[j+1] = d * alpha_L[j] - digit, with digit = G_L(Sigma*(j)).
/// Interval endpoints transform affinely; the truncation budget shrinks by 1.
AlphaValue alpha_shift(const AlphaValue& a, int digit);

/// Verifier-side digit-guessing trace: current = d^i-fold image of alpha
/// under the guesses so far. While all guesses are correct, current equals
/// alpha_L[i+1]; after the first wrong guess |current| is bounded below by
/// the divergence floor forever.
struct BetaTrace {
    Interval current;
    std::vector<int> guesses;
    std::optional<Int> first_wrong_index;  // 1-based guess number

    static BetaTrace start(const AlphaValue& alpha1);
};

BetaTrace beta_step(const BetaTrace& t, int guess, int d, int true_digit);

/// Certified lower bound on |current|, valid now and (after updating via
/// beta_step) nondecreasing forever: starts at (d-2)/(d-1) at the first wrong
/// guess and iterates b <- d*b - 1. Throws NotDiverged before any wrong guess.
Rational divergence_floor(const BetaTrace& t, int d);

}  // namespace afav
