#include "afav/protocols.hpp"

namespace afav {

void ProtocolParams::validate() const {
    if (k < 3) throw UnsupportedParams("error bound parameter k must be >= 3");
    if (r < 2) throw UnsupportedParams("alphabet size r must be >= 2");
    if (coin_base < 2) throw UnsupportedParams("coin base must be >= 2");
}

int Strategy::guess(const Int& iteration) const {
    if (iteration >= 1 && iteration <= Int(guesses.size()))
        return guesses[iteration.convert_to<std::size_t>() - 1];
    return default_guess;
}

bool ProtocolMachine::is_iteration_start(int state, Symbol sym) const {
    if (kind == ProtocolKind::weak) return state == loop;
    return (state == scan && sym == kRightMarker) || state == it_dollar || state == it_cent;
}

std::pair<std::size_t, std::size_t> ProtocolMachine::iteration_choice(int guess,
                                                                      bool exit_now) const {
    std::size_t g = static_cast<std::size_t>(guess);
    if (kind == ProtocolKind::weak) return {g, exit_now ? 1u : 0u};
    return {(exit_now ? 2u : 0u) + g, 0u};
}

AffineOperator scan_start_operator(int r) {
    return r == 2 ? scan_operator_binary(1) : AffineOperator::identity(5);
}

AffineOperator scan_operator_binary(int bit) {
    Rational b(bit);
    return AffineOperator::validate({
        {1, 0, 0, 0, 0},
        {b, 2, 0, 0, 0},
        {-b, -1, 1, 0, 0},
        {0, 0, 0, 1, 0},
        {0, 0, 0, 0, 1},
    });
}

AffineOperator scan_operator_rary(int b, int r) {
    Rational bp(b + 1);
    return AffineOperator::validate({
        {1, 0, 0, 0, 0},
        {bp, Rational(r), 0, 0, 0},
        {-bp, Rational(1 - r), 1, 0, 0},
        {0, 0, 0, 1, 0},
        {0, 0, 0, 0, 1},
    });
}

AffineOperator loop_operator(int g, int d) {
    Rational gg(g);
    return AffineOperator::validate({
        {1, 0, 0, 0, 0},
        {-1, 1, 0, 0, 0},
        {1, 0, 1, 0, 0},
        {-gg, 0, 0, Rational(d), 0},
        {gg, 0, 0, Rational(1 - d), 1},
    });
}

AffineOperator exit_operator(const ProtocolParams& p) {
    Rational half_k(p.k, 2);
    Rational c = p.c();
    return AffineOperator::validate({
        {1, 0, 0, 0, 0},
        {0, half_k, 0, 0, 0},
        {0, 1 - half_k, 1, 0, 0},
        {0, 0, 0, c, 0},
        {0, 0, 0, 1 - c, 1},
    });
}

AffineOperator alpha_setup_operator(const Rational& alpha, bool rary_plus_one) {
    Rational adj(rary_plus_one ? 1 : 0);
    return AffineOperator::validate({
        {1, 0, 0, 0, 0},
        {adj, 1, 0, 0, 0},
        {-adj, 0, 1, 0, 0},
        {alpha, 0, 0, 1, 0},
        {-alpha, 0, 0, 0, 1},
    });
}

AffineOperator coin_operator(int base) {
    return AffineOperator::validate({
        {Rational(1, base), 0},
        {Rational(base - 1, base), 1},
    });
}

AffineOperator coin_reset_operator(int base) {
    // coin_operator(base) composed with the e1<->e2 swap: the surviving
    // weighting outcome collapses the register to e2, and the first coin
    // application of the next sweep folds the reset in.
    return AffineOperator::validate({
        {0, Rational(1, base)},
        {1, Rational(base - 1, base)},
    });
}

namespace {

Rational exact_alpha(const LanguageOracle& L, const ProtocolParams& params) {
    if (!L.finite())
        throw UnsupportedParams(
            "machine construction needs a finite-support language (exact alpha); "
            "use the closed-form interval analysis for infinite languages");
    AlphaValue a = alpha_value(L, params.d(), 1);
    return a.value.lo;
}

std::string in_op_name(int b) { return "in" + std::to_string(b); }

void add_main_scan_ops(RegisterSpec& reg, const ProtocolParams& params) {
    reg.operators.emplace("start", scan_start_operator(params.r));
    for (int b = 0; b < params.r; ++b) {
        reg.operators.emplace(in_op_name(b), params.r == 2 ? scan_operator_binary(b)
                                                           : scan_operator_rary(b, params.r));
    }
}

}  // namespace

ProtocolMachine build_weak(const LanguageOracle& L, const ProtocolParams& params) {
    params.validate();
    if (params.r != L.alphabet_size)
        throw AlphabetMismatch("protocol alphabet size differs from the language's");
    Rational alpha = exact_alpha(L, params);

    ProtocolMachine pm;
    pm.params = params;
    pm.language = L;
    pm.alpha = alpha;
    pm.kind = ProtocolKind::weak;

    Machine& m = pm.machine;
    m.alphabet_size = params.r;

    RegisterSpec main;
    main.dimension = 5;
    add_main_scan_ops(main, params);
    main.operators.emplace("setup", alpha_setup_operator(alpha, params.r > 2));
    main.operators.emplace("loop0", loop_operator(0, params.d()));
    main.operators.emplace("loop1", loop_operator(1, params.d()));
    main.operators.emplace("exit", exit_operator(params));
    m.registers.push_back(std::move(main));

    pm.scan = m.add_state("scan");
    pm.loop = m.add_state("loop");
    pm.exit = m.add_state("exit");
    pm.weigh = m.add_state("weigh");
    int acc = m.add_state("accept");
    int rej = m.add_state("reject");
    m.initial_state = pm.scan;
    m.accept_state = acc;
    m.reject_state = rej;

    auto single = [](std::string op) { return OperatorTuple{AffineAction::applying(std::move(op))}; };

    m.affine_table[{pm.scan, kLeftMarker}] = {single("start")};
    m.classical_table[{pm.scan, kLeftMarker, 0, {0}}] = {{pm.scan, +1}};
    for (int b = 0; b < params.r; ++b) {
        m.affine_table[{pm.scan, b}] = {single(in_op_name(b))};
        m.classical_table[{pm.scan, b, 0, {0}}] = {{pm.scan, +1}};
    }
    m.affine_table[{pm.scan, kRightMarker}] = {single("setup")};
    m.classical_table[{pm.scan, kRightMarker, 0, {0}}] = {{pm.loop, 0}};

    // Loop iteration: guess g in the affine phase, then continue or exit in
    // the classical phase. Exiting after g = 0 rejects outright; after g = 1
    // the exit operator and the single weighting follow.
    m.affine_table[{pm.loop, kRightMarker}] = {single("loop0"), single("loop1")};
    m.classical_table[{pm.loop, kRightMarker, 0, {0}}] = {{pm.loop, 0}, {rej, 0}};
    m.classical_table[{pm.loop, kRightMarker, 1, {0}}] = {{pm.loop, 0}, {pm.exit, 0}};

    m.affine_table[{pm.exit, kRightMarker}] = {single("exit")};
    m.classical_table[{pm.exit, kRightMarker, 0, {0}}] = {{pm.weigh, 0}};

    m.affine_table[{pm.weigh, kRightMarker}] = {OperatorTuple{AffineAction::weighting()}};
    for (int j = 1; j <= 5; ++j)
        m.classical_table[{pm.weigh, kRightMarker, 0, {j}}] = {{j == 1 ? acc : rej, 0}};

    validate_machine(m);
    return pm;
}

ProtocolMachine build_strong(const LanguageOracle& L, const ProtocolParams& params) {
    ProtocolParams p = params;
    p.strong = true;
    p.validate();
    if (p.r != L.alphabet_size)
        throw AlphabetMismatch("protocol alphabet size differs from the language's");
    Rational alpha = exact_alpha(L, p);

    ProtocolMachine pm;
    pm.params = p;
    pm.language = L;
    pm.alpha = alpha;
    pm.kind = ProtocolKind::strong;

    Machine& m = pm.machine;
    m.alphabet_size = p.r;

    RegisterSpec main;
    main.dimension = 5;
    add_main_scan_ops(main, p);
    AffineOperator setup = alpha_setup_operator(alpha, p.r > 2);
    // Iteration 1's guess operator composed with the alpha setup, so the
    // first coin weighting shares the setup step and iterations cost exactly
    // |w|+2 steps each.
    main.operators.emplace("it0", loop_operator(0, p.d()).compose(setup));
    main.operators.emplace("it1", loop_operator(1, p.d()).compose(setup));
    main.operators.emplace("loop0", loop_operator(0, p.d()));
    main.operators.emplace("loop1", loop_operator(1, p.d()));
    main.operators.emplace("exit", exit_operator(p));
    main.operators.emplace("id", AffineOperator::identity(5));
    m.registers.push_back(std::move(main));

    RegisterSpec coin;
    coin.dimension = 2;
    coin.operators.emplace("coin", coin_operator(p.coin_base));
    coin.operators.emplace("coinreset", coin_reset_operator(p.coin_base));
    coin.operators.emplace("id", AffineOperator::identity(2));
    m.registers.push_back(std::move(coin));

    pm.scan0 = m.add_state("scan0");
    pm.scan1 = m.add_state("scan1");
    pm.scan = m.add_state("scan");
    pm.it_dollar = m.add_state("it$");
    pm.it_cent = m.add_state("it^");
    pm.rst_left = m.add_state("rstL");
    pm.mv_left = m.add_state("mvL");
    pm.rst_right = m.add_state("rstR");
    pm.mv_right = m.add_state("mvR");
    pm.exit = m.add_state("exit");
    pm.weigh = m.add_state("weigh");
    int acc = m.add_state("accept");
    int rej = m.add_state("reject");
    m.initial_state = pm.scan0;
    m.accept_state = acc;
    m.reject_state = rej;

    auto pair = [](std::string a, std::string b) {
        return OperatorTuple{AffineAction::applying(std::move(a)),
                             AffineAction::applying(std::move(b))};
    };
    auto weigh_coin = [](std::string a) {
        return OperatorTuple{AffineAction::applying(std::move(a)), AffineAction::weighting()};
    };

    // Scan phase: build K in the main register while charging the coin once
    // per cell of the left marker and the input.
    m.affine_table[{pm.scan0, kLeftMarker}] = {pair("start", "coin")};
    m.classical_table[{pm.scan0, kLeftMarker, 0, {0, 0}}] = {{pm.scan1, +1}};
    // Empty input: decide deterministically.
    m.affine_table[{pm.scan1, kRightMarker}] = {pair("id", "id")};
    m.classical_table[{pm.scan1, kRightMarker, 0, {0, 0}}] = {
        {L.contains("") ? acc : rej, 0}};
    for (int b = 0; b < p.r; ++b) {
        m.affine_table[{pm.scan1, b}] = {pair(in_op_name(b), "coin")};
        m.classical_table[{pm.scan1, b, 0, {0, 0}}] = {{pm.scan, +1}};
        m.affine_table[{pm.scan, b}] = {pair(in_op_name(b), "coin")};
        m.classical_table[{pm.scan, b, 0, {0, 0}}] = {{pm.scan, +1}};
    }

    // Iteration starts. Options in order: continue with g=0, continue with
    // g=1, exit with g=0, exit with g=1. Continuing weights the coin
    // (outcome e1 rejects, e2 survives into the next sweep); exiting skips
    // the coin weighting for this iteration.
    auto iteration_start = [&](int state, Symbol sym, const std::string& g0,
                               const std::string& g1, int survive_state, int survive_move) {
        m.affine_table[{state, sym}] = {weigh_coin(g0), weigh_coin(g1), pair(g0, "id"),
                                        pair(g1, "id")};
        for (std::size_t opt = 0; opt < 2; ++opt) {
            m.classical_table[{state, sym, opt, {0, 1}}] = {{rej, 0}};
            m.classical_table[{state, sym, opt, {0, 2}}] = {{survive_state, survive_move}};
        }
        m.classical_table[{state, sym, 2, {0, 0}}] = {{rej, 0}};
        m.classical_table[{state, sym, 3, {0, 0}}] = {{pm.exit, 0}};
    };
    iteration_start(pm.scan, kRightMarker, "it0", "it1", pm.rst_left, -1);
    iteration_start(pm.it_dollar, kRightMarker, "loop0", "loop1", pm.rst_left, -1);
    iteration_start(pm.it_cent, kLeftMarker, "loop0", "loop1", pm.rst_right, +1);

    // Sweeps between the end-markers, charging the coin on every cell. The
    // first step after a surviving weighting uses the reset-composed coin
    // operator; the step on the far end-marker is stationary so the next
    // iteration starts there.
    for (int b = 0; b < p.r; ++b) {
        m.affine_table[{pm.rst_left, b}] = {pair("id", "coinreset")};
        m.classical_table[{pm.rst_left, b, 0, {0, 0}}] = {{pm.mv_left, -1}};
        m.affine_table[{pm.mv_left, b}] = {pair("id", "coin")};
        m.classical_table[{pm.mv_left, b, 0, {0, 0}}] = {{pm.mv_left, -1}};
        m.affine_table[{pm.rst_right, b}] = {pair("id", "coinreset")};
        m.classical_table[{pm.rst_right, b, 0, {0, 0}}] = {{pm.mv_right, +1}};
        m.affine_table[{pm.mv_right, b}] = {pair("id", "coin")};
        m.classical_table[{pm.mv_right, b, 0, {0, 0}}] = {{pm.mv_right, +1}};
    }
    m.affine_table[{pm.mv_left, kLeftMarker}] = {pair("id", "coin")};
    m.classical_table[{pm.mv_left, kLeftMarker, 0, {0, 0}}] = {{pm.it_cent, 0}};
    m.affine_table[{pm.mv_right, kRightMarker}] = {pair("id", "coin")};
    m.classical_table[{pm.mv_right, kRightMarker, 0, {0, 0}}] = {{pm.it_dollar, 0}};

    // Exit path, reachable on either end-marker.
    for (Symbol sym : {kLeftMarker, kRightMarker}) {
        m.affine_table[{pm.exit, sym}] = {pair("exit", "id")};
        m.classical_table[{pm.exit, sym, 0, {0, 0}}] = {{pm.weigh, 0}};
        m.affine_table[{pm.weigh, sym}] = {
            OperatorTuple{AffineAction::weighting(), AffineAction::applying("id")}};
        for (int j = 1; j <= 5; ++j)
            m.classical_table[{pm.weigh, sym, 0, {j, 0}}] = {{j == 1 ? acc : rej, 0}};
    }

    validate_machine(m);
    return pm;
}

Strategy honest_strategy(const LanguageOracle& L, const std::string& w,
                         const ProtocolParams& params) {
    params.validate();
    Int K = shortlex_index(w, L.alphabet_size);
    Strategy s;
    for (Int i = 1; i <= K; ++i) s.guesses.push_back(L.digit(i));
    s.exit_iteration = K;
    return s;
}

Interval closed_form_acceptance(const LanguageOracle& L, const std::string& w,
                                const ProtocolParams& params, const Strategy& strategy,
                                int depth) {
    params.validate();
    if (params.strong && w.empty())
        return Interval::point(Rational(L.contains("") ? 1 : 0));
    if (!strategy.exit_iteration) return Interval::point(Rational(0));
    Int i = *strategy.exit_iteration;
    if (strategy.guess(i) == 0) return Interval::point(Rational(0));

    const int d = params.d();
    const Rational c = params.c();
    Int K = shortlex_index(w, L.alphabet_size);

    // Truncation budget: interval mode needs one digit per loop iteration on
    // top of the requested depth.
    int budget = L.finite() ? 0 : depth + i.convert_to<int>();
    Interval beta = alpha_value(L, d, 1, budget).value.as_interval();
    for (Int j = 1; j <= i; ++j) beta = (beta * Rational(d)) - Rational(strategy.guess(j));

    Interval beta_abs = beta.abs();
    Rational delta = rat_abs(Rational(K - i));
    Rational base = 1 + Rational(params.k) * delta;
    Interval accept{Rational(1) / (base + 2 * c * beta_abs.hi),
                    Rational(1) / (base + 2 * c * beta_abs.lo)};

    if (params.strong) {
        Rational p = rat_pow(Rational(1, params.coin_base),
                             static_cast<unsigned long>(w.size()) + 1);
        Rational survive = rat_pow(1 - p, (i - 1).convert_to<unsigned long>());
        accept = accept * survive;
    }
    return accept;
}

}  // namespace afav
