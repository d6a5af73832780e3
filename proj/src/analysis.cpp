#include "afav/analysis.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace afav {

namespace {

/// The strategy's (affine option, classical option) at a configuration.
/// Outside iteration starts every table entry is a single option.
std::pair<std::size_t, std::size_t> strategy_choice(const ProtocolMachine& pm, const Strategy& s,
                                                    const Configuration& c, Symbol sym,
                                                    const Int& iter) {
    if (pm.is_iteration_start(c.state, sym)) {
        bool exit_now = s.exit_iteration.has_value() && *s.exit_iteration == iter;
        return pm.iteration_choice(s.guess(iter), exit_now);
    }
    return {0, 0};
}

struct Leaf {
    Rational fraction;  // relative to the segment's entry mass
    long abs_steps = 0;
    bool accepted = false;
};

/// Expansion from `entry` until every branch halts or (after at least one
/// step) reaches an iteration start. At most one branch may survive to an
/// iteration start; our protocols guarantee that.
struct Segment {
    std::vector<Leaf> leaves;
    Rational survive{0};
    Configuration next;  // meaningful when survive > 0
    std::set<std::size_t> weighted;  // registers weighted anywhere in the segment
};

Segment run_segment(const ProtocolMachine& pm, const std::string& w, const Configuration& entry,
                    const Strategy& s, const Int& iter) {
    const Machine& m = pm.machine;
    const long cap = entry.step_count + 16 * (static_cast<long>(w.size()) + 3) + 64;
    Segment seg;
    struct Node {
        Configuration config;
        Rational fraction;
        bool first;
    };
    std::vector<Node> stack{{entry, Rational(1), true}};
    while (!stack.empty()) {
        Node n = std::move(stack.back());
        stack.pop_back();
        if (halted(m, n.config)) {
            seg.leaves.push_back(
                {n.fraction, n.config.step_count, n.config.state == m.accept_state});
            continue;
        }
        Symbol sym = symbol_at(w, n.config.head, m.alphabet_size);
        if (!n.first && pm.is_iteration_start(n.config.state, sym)) {
            if (seg.survive != 0)
                throw Error("ambiguous periodic structure: multiple surviving branches");
            seg.survive = n.fraction;
            seg.next = n.config;
            continue;
        }
        if (n.config.step_count >= cap)
            throw Error("segment did not reach an iteration start within the step cap");
        auto [aff, cls] = strategy_choice(pm, s, n.config, sym, iter);
        auto branches = step(m, n.config, w, aff,
                             [cls](const OutcomeTuple&) { return cls; });
        for (auto& b : branches) {
            for (std::size_t reg = 0; reg < b.outcome.size(); ++reg)
                if (b.outcome[reg] != 0) seg.weighted.insert(reg);
            stack.push_back({std::move(b.config), n.fraction * b.probability, false});
        }
    }
    return seg;
}

/// Finite computation tree: the strategy exits, so every branch halts.
StrategyOutcome evaluate_finite(const ProtocolMachine& pm, const std::string& w,
                                const Strategy& s) {
    const Machine& m = pm.machine;
    Rational accept(0), reject(0), expect(0);
    struct Node {
        Configuration config;
        Rational mass;
        Int iter;
    };
    std::vector<Node> stack{{initial_configuration(m), Rational(1), Int(1)}};
    while (!stack.empty()) {
        Node n = std::move(stack.back());
        stack.pop_back();
        if (halted(m, n.config)) {
            (n.config.state == m.accept_state ? accept : reject) += n.mass;
            expect += n.mass * n.config.step_count;
            continue;
        }
        Symbol sym = symbol_at(w, n.config.head, m.alphabet_size);
        bool at_start = pm.is_iteration_start(n.config.state, sym);
        auto [aff, cls] = strategy_choice(pm, s, n.config, sym, n.iter);
        auto branches = step(m, n.config, w, aff,
                             [cls](const OutcomeTuple&) { return cls; });
        Int next_iter = at_start ? n.iter + 1 : n.iter;
        for (auto& b : branches)
            stack.push_back({std::move(b.config), n.mass * b.probability, next_iter});
    }
    StrategyOutcome out;
    out.accept = ProbabilityInterval::point(accept);
    out.reject = ProbabilityInterval::point(reject);
    out.nonhalt = ProbabilityInterval::point(Rational(0));
    out.expected_steps = expect;
    out.halting_certified = true;
    return out;
}

/// Never-exit strategy on the strong protocol: run cycle by cycle between
/// iteration starts until the run is provably periodic, then close the
/// remaining geometric series exactly.
StrategyOutcome evaluate_stalling(const ProtocolMachine& pm, const std::string& w,
                                  const Strategy& s) {
    Rational accept(0), reject(0), nonhalt(0), expect(0);
    bool infinite = false;
    auto add_leaf = [&](const Rational& mass, const Leaf& leaf) {
        (leaf.accepted ? accept : reject) += mass;
        expect += mass * leaf.abs_steps;
    };

    Segment prologue = run_segment(pm, w, initial_configuration(pm.machine), s, Int(0));
    for (const auto& leaf : prologue.leaves) add_leaf(leaf.fraction, leaf);

    struct CycleRec {
        Configuration entry;
        Segment seg;
    };
    std::vector<CycleRec> cycles;
    Configuration cur = prologue.next;
    Rational q = prologue.survive;
    Int iter = 1;
    std::size_t stabilized_from = static_cast<std::size_t>(-1);

    while (q != 0) {
        if (iter > Int(s.guesses.size())) {
            if (stabilized_from == static_cast<std::size_t>(-1)) stabilized_from = cycles.size();
            for (std::size_t j = stabilized_from; j < cycles.size(); ++j) {
                if (cycles[j].entry.state != cur.state || cycles[j].entry.head != cur.head)
                    continue;
                // Candidate period: cycles[j..end). The repeat is certified
                // when every register weighted inside the period holds the
                // same value at both period entries; unweighted registers
                // cannot influence leaf probabilities.
                std::set<std::size_t> weighted;
                for (std::size_t idx = j; idx < cycles.size(); ++idx)
                    weighted.insert(cycles[idx].seg.weighted.begin(),
                                    cycles[idx].seg.weighted.end());
                bool match = true;
                for (std::size_t reg : weighted)
                    if (!(cycles[j].entry.registers[reg] == cur.registers[reg])) match = false;
                if (!match) continue;

                // Finite prefix before the period.
                for (std::size_t idx = 0; idx < j; ++idx) {
                    for (const auto& leaf : cycles[idx].seg.leaves)
                        add_leaf(q * leaf.fraction, leaf);
                    q *= cycles[idx].seg.survive;
                }
                long t0 = cycles[j].entry.step_count;
                long T = cur.step_count - t0;
                Rational sfrac(1);
                for (std::size_t idx = j; idx < cycles.size(); ++idx)
                    sfrac *= cycles[idx].seg.survive;
                if (sfrac == 1) {
                    nonhalt += q;
                    infinite = infinite || q != 0;
                } else {
                    // Leaf at offset delta recurs at steps t0 + n*T + delta
                    // with mass q * s^n * alpha.
                    Rational rem = 1 - sfrac;
                    Rational pref(1);
                    for (std::size_t idx = j; idx < cycles.size(); ++idx) {
                        for (const auto& leaf : cycles[idx].seg.leaves) {
                            Rational alpha = pref * leaf.fraction;
                            (leaf.accepted ? accept : reject) += q * alpha / rem;
                            expect += q * alpha *
                                      (Rational(leaf.abs_steps) / rem +
                                       Rational(T) * sfrac / (rem * rem));
                        }
                        pref *= cycles[idx].seg.survive;
                    }
                }
                q = 0;
                break;
            }
            if (q == 0) break;
        }
        if (cycles.size() > 100000) throw Error("no periodic structure detected");
        Segment seg = run_segment(pm, w, cur, s, iter);
        if (seg.survive == 0) {
            // The run dies out on its own: everything is a finite sum.
            for (auto& rec : cycles) {
                for (const auto& leaf : rec.seg.leaves) add_leaf(q * leaf.fraction, leaf);
                q *= rec.seg.survive;
            }
            for (const auto& leaf : seg.leaves) add_leaf(q * leaf.fraction, leaf);
            q = 0;
            cycles.clear();
            break;
        }
        Configuration next = seg.next;
        cycles.push_back({std::move(cur), std::move(seg)});
        cur = std::move(next);
        ++iter;
    }

    StrategyOutcome out;
    out.accept = ProbabilityInterval::point(accept);
    out.reject = ProbabilityInterval::point(reject);
    out.nonhalt = ProbabilityInterval::point(nonhalt);
    out.expected_steps = infinite ? std::nullopt : std::optional<Rational>(expect);
    out.halting_certified = nonhalt == 0;
    return out;
}

}  // namespace

StrategyOutcome evaluate_strategy(const ProtocolMachine& pm, const std::string& w,
                                  const Strategy& s) {
    if (s.exit_iteration) return evaluate_finite(pm, w, s);
    if (pm.kind == ProtocolKind::weak) {
        // The loop never weights anything, so the stalling branch carries all
        // the mass and no leaf ever forms.
        StrategyOutcome out;
        out.accept = ProbabilityInterval::point(Rational(0));
        out.reject = ProbabilityInterval::point(Rational(0));
        out.nonhalt = ProbabilityInterval::point(Rational(1));
        out.expected_steps = std::nullopt;
        out.halting_certified = false;
        return out;
    }
    return evaluate_stalling(pm, w, s);
}

std::optional<Rational> expected_steps(const ProtocolMachine& pm, const std::string& w,
                                       const Strategy& s) {
    return evaluate_strategy(pm, w, s).expected_steps;
}

AdversaryBound max_acceptance(const ProtocolMachine& pm, const std::string& w, int depth) {
    const ProtocolParams& params = pm.params;
    const LanguageOracle& L = pm.language;
    const int d = params.d();
    const Rational c = params.c();
    const int k = params.k;

    if (pm.kind == ProtocolKind::strong && w.empty()) {
        AdversaryBound b;
        b.max_accept = ProbabilityInterval::point(Rational(L.contains("") ? 1 : 0));
        b.witness = Strategy::stall();
        return b;
    }

    Int K = shortlex_index(w, L.alphabet_size);
    Rational p_reject(0);
    if (pm.kind == ProtocolKind::strong)
        p_reject = rat_pow(Rational(1, params.coin_base),
                           static_cast<unsigned long>(w.size()) + 1);

    struct Node {
        Interval beta;
        std::vector<int> guesses;
    };
    int budget = L.finite() ? 0 : depth;
    std::vector<Node> frontier{
        {alpha_value(L, d, 1, budget).value.as_interval(), {}}};

    Rational best_lo(0);
    Rational global_hi(0);
    Strategy witness = Strategy::stall();
    Int frontier_index = 0;
    Rational survive(1);  // (1-p)^(i-1) in strong mode

    for (Int i = 1;; ++i) {
        if (i > K) {
            // Every exit at index >= i is worth at most the pure counter
            // penalty, no matter what beta is.
            Rational tail = survive / (1 + Rational(k) * Rational(i - K));
            if (tail <= best_lo) break;
        }
        if (!L.finite() && i > K + 1000)
            throw InconclusiveAtDepth("adversary search did not converge; increase depth");
        frontier_index = i;

        Rational delta = rat_abs(Rational(K - i));
        Rational base = 1 + Rational(k) * delta;
        std::map<std::pair<Rational, Rational>, Node> next;
        for (const auto& node : frontier) {
            // Exit now with g_i = 1 (exits with g_i = 0 accept nothing).
            Interval beta_exit = ((node.beta * Rational(d)) - Rational(1)).abs();
            Rational lo = survive / (base + 2 * c * beta_exit.hi);
            Rational hi = survive / (base + 2 * c * beta_exit.lo);
            global_hi = std::max(global_hi, hi);
            if (lo > best_lo) {
                best_lo = lo;
                witness.guesses = node.guesses;
                witness.guesses.push_back(1);
                witness.exit_iteration = i;
            }
            // Continue with either guess; drop branches whose beta has
            // certainly left [-2, 2] (dominated forever, see header).
            for (int g : {0, 1}) {
                Interval b2 = (node.beta * Rational(d)) - Rational(g);
                if (b2.abs().lo >= 2) continue;
                auto key = std::make_pair(b2.lo, b2.hi);
                if (next.find(key) == next.end()) {
                    Node child{b2, node.guesses};
                    child.guesses.push_back(g);
                    next.emplace(key, std::move(child));
                }
            }
        }
        if (!L.finite() && next.size() > 4096)
            throw InconclusiveAtDepth("beta intervals too wide to prune; increase depth");
        frontier.clear();
        for (auto& [key, node] : next) frontier.push_back(std::move(node));
        survive *= 1 - p_reject;
    }

    AdversaryBound b;
    b.max_accept = ProbabilityInterval::bounds(best_lo, std::max(best_lo, global_hi));
    b.witness = std::move(witness);
    b.search_frontier = frontier_index;
    return b;
}

AdversaryBound brute_force_max(const ProtocolMachine& pm, const std::string& w, long max_exit) {
    AdversaryBound best;
    best.max_accept = ProbabilityInterval::point(Rational(0));
    best.witness = Strategy::stall();
    best.search_frontier = max_exit;
    for (long i = 1; i <= max_exit; ++i) {
        for (unsigned long mask = 0; mask < (1ul << i); ++mask) {
            Strategy s;
            for (long j = 0; j < i; ++j) s.guesses.push_back((mask >> j) & 1u ? 1 : 0);
            s.exit_iteration = Int(i);
            StrategyOutcome out = evaluate_strategy(pm, w, s);
            if (out.accept.lo > best.max_accept.lo) {
                best.max_accept = out.accept;
                best.witness = s;
            }
        }
    }
    return best;
}

Rational amplify_majority(const Rational& acc_single, long reps) {
    if (reps < 1 || reps % 2 == 0) throw Error("repetition count must be odd and >= 1");
    Rational total(0);
    Int binom = 1;  // C(reps, j), updated incrementally
    for (long j = 0; j <= reps; ++j) {
        if (2 * j > reps)
            total += Rational(binom) * rat_pow(acc_single, static_cast<unsigned long>(j)) *
                     rat_pow(1 - acc_single, static_cast<unsigned long>(reps - j));
        binom = binom * (reps - j) / (j + 1);
    }
    return total;
}

MonteCarloResult monte_carlo(const ProtocolMachine& pm, const std::string& w, const Strategy& s,
                             long samples, unsigned long long seed, long step_cap) {
    if (samples < 1) throw Error("sample count must be >= 1");
    const Machine& m = pm.machine;
    std::mt19937_64 gen(seed);
    const Int denom = Int(1) << 64;

    long accepted = 0, rejected = 0, timeouts = 0;
    Int total_steps = 0;
    for (long n = 0; n < samples; ++n) {
        Configuration c = initial_configuration(m);
        Int iter = 1;
        while (!halted(m, c)) {
            if (c.step_count >= step_cap) break;
            Symbol sym = symbol_at(w, c.head, m.alphabet_size);
            bool at_start = pm.is_iteration_start(c.state, sym);
            auto [aff, cls] = strategy_choice(pm, s, c, sym, iter);
            auto branches = step(m, c, w, aff, [cls](const OutcomeTuple&) { return cls; });
            if (branches.size() == 1) {
                c = std::move(branches[0].config);
            } else {
                Rational u(Int(gen()), denom);
                Rational cum(0);
                std::size_t pick = branches.size() - 1;
                for (std::size_t bi = 0; bi < branches.size(); ++bi) {
                    cum += branches[bi].probability;
                    if (u < cum) {
                        pick = bi;
                        break;
                    }
                }
                c = std::move(branches[pick].config);
            }
            if (at_start) ++iter;
        }
        total_steps += c.step_count;
        if (!halted(m, c))
            ++timeouts;
        else if (c.state == m.accept_state)
            ++accepted;
        else
            ++rejected;
    }
    MonteCarloResult r;
    r.accept_freq = Rational(accepted, samples);
    r.reject_freq = Rational(rejected, samples);
    r.timeout_freq = Rational(timeouts, samples);
    r.mean_steps = Rational(total_steps, Int(samples));
    return r;
}

}  // namespace afav
