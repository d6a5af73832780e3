#include <doctest.h>

#include "afav/analysis.hpp"

using namespace afav;

namespace {

ProtocolParams params(int k, int r = 2, bool strong = false) {
    ProtocolParams p;
    p.k = k;
    p.r = r;
    p.strong = strong;
    return p;
}

}  // namespace

TEST_CASE("weak honest evaluation anchors") {
    LanguageOracle L = LanguageOracle::from_members(2, {"1"});
    ProtocolMachine pm = build_weak(L, params(3));
    Strategy honest = honest_strategy(L, "1", params(3));
    StrategyOutcome out = evaluate_strategy(pm, "1", honest);
    CHECK(out.accept == ProbabilityInterval::point(rat(1)));
    CHECK(out.reject == ProbabilityInterval::point(rat(0)));
    CHECK(out.halting_certified);
    // (l+2) + K + 2 with l = 1, K = 3.
    CHECK(out.expected_steps == rat(8));
}

TEST_CASE("the 2/7 strategy on the weak empty-language machine") {
    LanguageOracle L = LanguageOracle::empty(2);
    ProtocolMachine pm = build_weak(L, params(3));
    Strategy s;
    s.guesses = {0, 1};
    s.exit_iteration = 2;
    StrategyOutcome out = evaluate_strategy(pm, "0", s);
    CHECK(out.accept == ProbabilityInterval::point(rat(2, 7)));
    CHECK(out.reject == ProbabilityInterval::point(rat(5, 7)));
    CHECK(out.nonhalt == ProbabilityInterval::point(rat(0)));
}

TEST_CASE("weak never-exit strategies never halt") {
    LanguageOracle L = LanguageOracle::empty(2);
    ProtocolMachine pm = build_weak(L, params(3));
    StrategyOutcome out = evaluate_strategy(pm, "0", Strategy::stall());
    CHECK(out.nonhalt == ProbabilityInterval::point(rat(1)));
    CHECK(out.accept.hi == 0);
    CHECK(!out.expected_steps.has_value());
    CHECK(!out.halting_certified);
    CHECK(!expected_steps(pm, "0", Strategy::stall()).has_value());
}

TEST_CASE("strong stall-forever closes to certain rejection") {
    LanguageOracle L = LanguageOracle::empty(2);
    ProtocolMachine pm = build_strong(L, params(3, 2, true));
    for (const std::string& w : {"0", "1", "00", "10"}) {
        StrategyOutcome out = evaluate_strategy(pm, w, Strategy::stall());
        CHECK(out.accept == ProbabilityInterval::point(rat(0)));
        CHECK(out.reject == ProbabilityInterval::point(rat(1)));
        CHECK(out.nonhalt == ProbabilityInterval::point(rat(0)));
        CHECK(out.halting_certified);
        REQUIRE(out.expected_steps.has_value());
        // One coin weighting every |w|+2 steps, each rejecting with
        // p = 64^-(|w|+1): expectation (|w|+2)/p exactly.
        long l = static_cast<long>(w.size());
        Rational p = rat_pow(rat(1, 64), static_cast<unsigned long>(l) + 1);
        CHECK(*out.expected_steps == Rational(l + 2) / p);
        CHECK(*out.expected_steps <= 3 * Rational(l) * rat_pow(rat(64), static_cast<unsigned long>(l) + 1));
    }
}

TEST_CASE("geometric closure agrees with truncated sums plus tail bounds") {
    // Reject mass of the stalling strategy after N coin weightings is
    // 1 - (1-p)^N; the closed form must dominate every truncation and stay
    // below truncation + (1-p)^N.
    LanguageOracle L = LanguageOracle::empty(2);
    ProtocolMachine pm = build_strong(L, params(3, 2, true));
    StrategyOutcome out = evaluate_strategy(pm, "1", Strategy::stall());
    Rational p = rat(1, 4096);
    for (int n = 1; n <= 20; ++n) {
        Rational truncated = 1 - rat_pow(1 - p, static_cast<unsigned long>(n));
        Rational tail = rat_pow(1 - p, static_cast<unsigned long>(n));
        CHECK(truncated <= out.reject.lo);
        CHECK(out.reject.hi <= truncated + tail);
    }
}

TEST_CASE("strong honest member run survives K-1 weightings") {
    LanguageOracle L = LanguageOracle::from_members(2, {"1"});
    ProtocolMachine pm = build_strong(L, params(3, 2, true));
    Strategy honest = honest_strategy(L, "1", params(3, 2, true));
    StrategyOutcome out = evaluate_strategy(pm, "1", honest);
    CHECK(out.accept == ProbabilityInterval::point(rat_pow(rat(4095, 4096), 2)));
    CHECK(out.halting_certified);
    CHECK(out.accept.lo >= rat_pow(rat(4095, 4096), 2) * rat(2, 3));
}

TEST_CASE("oracle equivalence: simulation matches the closed form") {
    std::vector<LanguageOracle> langs = {
        LanguageOracle::empty(2), LanguageOracle::from_members(2, {"1"}),
        LanguageOracle::from_members(2, {"0", "11"}),
        LanguageOracle::from_members(2, {"101"}), LanguageOracle::all_strings(2, 2)};
    for (int k : {3, 5}) {
        for (const auto& L : langs) {
            ProtocolMachine pm = build_weak(L, params(k));
            for (Int i = 1; i <= 15; ++i) {
                std::string w = shortlex_string(i, 2);
                Strategy honest = honest_strategy(L, w, params(k));
                StrategyOutcome out = evaluate_strategy(pm, w, honest);
                Interval cf = closed_form_acceptance(L, w, params(k), honest);
                CHECK(out.accept.lo == cf.lo);
                CHECK(out.accept.hi == cf.hi);
            }
        }
    }
}

TEST_CASE("adversary search anchors") {
    LanguageOracle L = LanguageOracle::empty(2);
    ProtocolMachine pm = build_weak(L, params(3));
    AdversaryBound b = max_acceptance(pm, "0");
    CHECK(b.max_accept == ProbabilityInterval::point(rat(2, 7)));
    CHECK(b.max_accept.hi <= rat(1, 3));
    REQUIRE(b.witness.exit_iteration.has_value());
    CHECK(*b.witness.exit_iteration == 2);
    CHECK(b.witness.guesses == std::vector<int>{0, 1});
    // The witness value is attained by simulation.
    CHECK(evaluate_strategy(pm, "0", b.witness).accept.lo == rat(2, 7));
}

TEST_CASE("members give the honest lower bound") {
    LanguageOracle L = LanguageOracle::from_members(2, {"0", "11"});
    ProtocolMachine pm = build_weak(L, params(3));
    for (const std::string& w : {"0", "11"}) {
        AdversaryBound b = max_acceptance(pm, w);
        CHECK(b.max_accept.lo >= rat(2, 3));
    }
}

TEST_CASE("pruned search equals brute force on small horizons") {
    std::vector<LanguageOracle> langs = {LanguageOracle::empty(2),
                                         LanguageOracle::from_members(2, {"1"}),
                                         LanguageOracle::from_members(2, {"0", "11"})};
    for (const auto& L : langs) {
        ProtocolMachine pm = build_weak(L, params(3));
        for (const std::string& w : {"0", "10"}) {
            AdversaryBound pruned = max_acceptance(pm, w);
            AdversaryBound brute = brute_force_max(pm, w, 8);
            CHECK(pruned.max_accept.lo == brute.max_accept.lo);
            CHECK(evaluate_strategy(pm, w, brute.witness).accept.lo == brute.max_accept.lo);
        }
    }
}

TEST_CASE("strong adversary bound stays under the weak one") {
    LanguageOracle L = LanguageOracle::empty(2);
    ProtocolMachine weak = build_weak(L, params(3));
    ProtocolMachine strong = build_strong(L, params(3, 2, true));
    for (const std::string& w : {"0", "1", "01"}) {
        CHECK(max_acceptance(strong, w).max_accept.hi <=
              max_acceptance(weak, w).max_accept.hi);
    }
}

TEST_CASE("interval mode certifies bounds for infinite-support languages") {
    LanguageOracle even;
    even.alphabet_size = 2;
    even.membership = [](const std::string& w) { return w.size() % 2 == 0; };
    even.name = "even-length";
    // No machine exists (alpha is irrational in spirit), but the closed-form
    // analysis still brackets the honest acceptance.
    ProtocolParams p = params(3);
    Strategy honest = honest_strategy(even, "00", p);
    Interval shallow = closed_form_acceptance(even, "00", p, honest, 20);
    Interval deep = closed_form_acceptance(even, "00", p, honest, 60);
    CHECK(shallow.lo <= deep.lo);
    CHECK(deep.hi <= shallow.hi);
    CHECK(deep.lo >= rat(2, 3));
}

TEST_CASE("amplify_majority closed values") {
    CHECK(amplify_majority(rat(2, 3), 1) == rat(2, 3));
    CHECK(amplify_majority(rat(2, 3), 3) == rat(20, 27));
    CHECK(amplify_majority(rat(2, 3), 11) > rat(8, 10));
    CHECK(amplify_majority(rat(1), 7) == 1);
    CHECK(amplify_majority(rat(0), 5) == 0);
    CHECK(amplify_majority(rat(1, 2), 9) == rat(1, 2));
    CHECK_THROWS_AS(amplify_majority(rat(2, 3), 4), Error);
    CHECK_THROWS_AS(amplify_majority(rat(2, 3), 0), Error);
}

TEST_CASE("amplify_majority is monotone above 1/2") {
    Rational prev = amplify_majority(rat(2, 3), 1);
    for (long reps = 3; reps <= 15; reps += 2) {
        Rational cur = amplify_majority(rat(2, 3), reps);
        CHECK(cur > prev);
        prev = cur;
    }
    CHECK(amplify_majority(rat(3, 4), 5) > amplify_majority(rat(2, 3), 5));
}

TEST_CASE("monte carlo is reproducible and concordant") {
    LanguageOracle L = LanguageOracle::empty(2);
    ProtocolMachine pm = build_weak(L, params(3));
    Strategy s;
    s.guesses = {0, 1};
    s.exit_iteration = 2;

    MonteCarloResult a = monte_carlo(pm, "0", s, 4000, 99, 1000);
    MonteCarloResult b = monte_carlo(pm, "0", s, 4000, 99, 1000);
    CHECK(a.accept_freq == b.accept_freq);
    CHECK(a.mean_steps == b.mean_steps);
    CHECK(a.timeout_freq == 0);

    // 4-sigma binomial band around the exact acceptance 2/7.
    Rational p = rat(2, 7);
    Rational diff = a.accept_freq - p;
    CHECK(diff * diff <= 16 * p * (1 - p) / 4000);
}

TEST_CASE("monte carlo on a deterministic outcome is exact") {
    LanguageOracle L = LanguageOracle::from_members(2, {"1"});
    ProtocolMachine pm = build_weak(L, params(3));
    Strategy honest = honest_strategy(L, "1", params(3));
    MonteCarloResult r = monte_carlo(pm, "1", honest, 50, 5, 1000);
    CHECK(r.accept_freq == 1);
    CHECK(r.mean_steps == 8);
}

TEST_CASE("monte carlo reports timeouts instead of failing") {
    LanguageOracle L = LanguageOracle::empty(2);
    ProtocolMachine pm = build_strong(L, params(3, 2, true));
    MonteCarloResult r = monte_carlo(pm, "0", Strategy::stall(), 50, 5, 30);
    CHECK(r.timeout_freq > 0);
}
