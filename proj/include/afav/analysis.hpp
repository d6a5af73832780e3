#pragma once

#include <optional>

#include "afav/protocols.hpp"

namespace afav {

/// Exact outcome of running a protocol machine under one fixed strategy.
/// expected_steps is nullopt for +infinity (genuinely non-halting mass).
struct StrategyOutcome {
    ProbabilityInterval accept;
    ProbabilityInterval reject;
    ProbabilityInterval nonhalt;
    std::optional<Rational> expected_steps;
    bool halting_certified = false;  // nonhalt is exactly 0
};

/// Expands the strategy's computation tree with exact leaf probabilities.
/// Finite trees (an exit iteration is set, or the machine halts on its own)
/// are summed directly. Never-exit strategies on the strong protocol are
/// closed in exact form: once the run is periodic at iteration starts, the
/// per-period leaf masses form a geometric series. Never-exit strategies on
/// the weak protocol never weight anything: all mass is nonhalt.
StrategyOutcome evaluate_strategy(const ProtocolMachine& pm, const std::string& w,
                                  const Strategy& s);

/// evaluate_strategy(...).expected_steps.
std::optional<Rational> expected_steps(const ProtocolMachine& pm, const std::string& w,
                                       const Strategy& s);

/// Certified maximum acceptance over every strategy.
struct AdversaryBound {
    ProbabilityInterval max_accept;
    Strategy witness;
    Int search_frontier = 0;  // largest exit index examined
};

/// Exhaustive search over (exit index, guess sequence), pruned soundly:
///   - exiting with g_i = 0 accepts with probability 0;
///   - a branch with |beta| >= 2 is dominated at every future exit index i'
///     by the all-correct-guess branch (|beta'| <= 1 there, so
///     1/(1 + k|K-i'| + 2c) > 1/(1 + k|K-i'| + 4c)) and is dropped;
///   - past K the exit value is at most 1/(1 + k(i-K)), so the search stops
///     once that falls to the incumbent maximum.
/// depth is the alpha truncation budget for infinite-support languages.
AdversaryBound max_acceptance(const ProtocolMachine& pm, const std::string& w, int depth = 0);

/// Unpruned maximum over all strategies with exit index <= max_exit, each
/// evaluated by full machine simulation. Reference oracle for the pruned
/// search on small horizons.
AdversaryBound brute_force_max(const ProtocolMachine& pm, const std::string& w, long max_exit);

/// Probability that the majority of reps independent runs is correct, given
/// per-run success probability acc_single. reps must be odd and >= 1.
Rational amplify_majority(const Rational& acc_single, long reps);

struct MonteCarloResult {
    Rational accept_freq;
    Rational reject_freq;
    Rational timeout_freq;
    Rational mean_steps;  // over all samples; timeouts contribute step_cap
};

/// Samples the strategy's computation tree: weighting outcomes are drawn from
/// their exact probabilities with a mt19937_64 stream, so results are
/// reproducible per seed. Runs hitting step_cap count as timeouts.
MonteCarloResult monte_carlo(const ProtocolMachine& pm, const std::string& w, const Strategy& s,
                             long samples, unsigned long long seed, long step_cap);

}  // namespace afav
