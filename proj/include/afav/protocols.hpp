#pragma once

#include <optional>
#include <string>
#include <vector>

#include "afav/encoding.hpp"
#include "afav/interval.hpp"
#include "afav/machine.hpp"

namespace afav {

/// Parameters of the verification protocols. The error bound is 1/k; the
/// digit base is d = k^2 - 2k + 3 and the exit-scaling constant is
/// c = (k^2 - 2k + 2) / (2k - 2), so d = 6 and c = 5/4 at k = 3.
struct ProtocolParams {
    int k = 3;
    int r = 2;
    bool strong = false;
    int coin_base = 64;

    int d() const { return k * k - 2 * k + 3; }
    Rational c() const { return Rational(k * k - 2 * k + 2, 2 * k - 2); }
    Rational error_bound() const { return Rational(1, k); }

    void validate() const;  // throws UnsupportedParams
};

/// A prover's resolution of every nondeterministic choice point: the digit
/// guess per loop iteration plus the iteration at which the loop is exited
/// (no value = stay in the loop forever).
struct Strategy {
    std::vector<int> guesses;  // g_1, g_2, ...; 0/1
    int default_guess = 0;     // used past the end of `guesses`
    std::optional<Int> exit_iteration;  // 1-based

    int guess(const Int& iteration) const;
    static Strategy stall() { return {}; }
};

enum class ProtocolKind { weak, strong };

/// A built verifier machine together with the role map the analysis layer
/// needs to drive strategies through it.
struct ProtocolMachine {
    Machine machine;
    ProtocolParams params;
    LanguageOracle language;
    Rational alpha;  // alpha_{L,k}, exact
    ProtocolKind kind = ProtocolKind::weak;

    // Role state ids; -1 where a role does not exist in this machine.
    int scan0 = -1, scan1 = -1, scan = -1, loop = -1;
    int it_dollar = -1, it_cent = -1;
    int rst_left = -1, mv_left = -1, rst_right = -1, mv_right = -1;
    int exit = -1, weigh = -1;

    /// True when expanding (state, symbol) begins a loop iteration, i.e. the
    /// point at which the strategy's guess / exit decision applies.
    bool is_iteration_start(int state, Symbol sym) const;

    /// Maps a strategy's decision at an iteration start to option indices.
    /// Returns {affine option, classical option}.
    std::pair<std::size_t, std::size_t> iteration_choice(int guess, bool exit_now) const;
};

/// Weak verifier: a single 5-state affine register, weighted
/// once, head never moving left. Requires a finite-support language so that
/// alpha is an exact Rational.
ProtocolMachine build_weak(const LanguageOracle& L, const ProtocolParams& params);

/// Strong verifier: adds a 2-state coin register that rejects
/// with probability coin_base^-(|w|+1) per loop iteration, giving halting
/// with probability 1 and exponential expected time. The empty string is
/// decided deterministically.
ProtocolMachine build_strong(const LanguageOracle& L, const ProtocolParams& params);

/// Guess the true digits of alpha_L and exit at iteration K = the input's
/// shortlex index. For members this realizes the protocol's acceptance
/// guarantee; it is well-defined (and rejected outright) for nonmembers.
Strategy honest_strategy(const LanguageOracle& L, const std::string& w,
                         const ProtocolParams& params);

/// Acceptance probability of a strategy computed without simulation:
///   exit at i with g_i = 1:  1 / (1 + k|K-i| + 2c|beta_i|),
///   times (1-p)^(i-1) in strong mode, p = coin_base^-(|w|+1);
///   0 for g_i = 0 or for never exiting.
/// Exact point for finite-support languages; otherwise a certified interval
/// at the given truncation depth.
Interval closed_form_acceptance(const LanguageOracle& L, const std::string& w,
                                const ProtocolParams& params, const Strategy& strategy,
                                int depth = 0);

// Operator constructors, exposed for direct checks.
AffineOperator scan_start_operator(int r);              // applied on the left marker
AffineOperator scan_operator_binary(int bit);           // A_0 / A_1
AffineOperator scan_operator_rary(int b, int r);        // A''_b
AffineOperator loop_operator(int g, int d);             // A'_g, base d
AffineOperator exit_operator(const ProtocolParams& p);  // counter *k/2, beta *c
AffineOperator alpha_setup_operator(const Rational& alpha, bool rary_plus_one);
AffineOperator coin_operator(int base);
AffineOperator coin_reset_operator(int base);  // coin step composed with e1<->e2 swap

}  // namespace afav
