#include <doctest.h>

#include <random>

#include "afav/machine.hpp"
#include "support.hpp"

using namespace afav;

namespace {

/// One-register machine that walks right over binary input, applies `op` on
/// every symbol, then weights on $: outcome 1 accepts, others reject.
Machine walker(const AffineOperator& op) {
    Machine m;
    m.alphabet_size = 2;
    RegisterSpec reg;
    reg.dimension = op.dimension();
    reg.operators.emplace("op", op);
    reg.operators.emplace("id", AffineOperator::identity(op.dimension()));
    m.registers.push_back(std::move(reg));

    int run = m.add_state("run");
    int acc = m.add_state("accept");
    int rej = m.add_state("reject");
    m.initial_state = run;
    m.accept_state = acc;
    m.reject_state = rej;

    m.affine_table[{run, kLeftMarker}] = {{AffineAction::applying("id")}};
    m.classical_table[{run, kLeftMarker, 0, {0}}] = {{run, +1}};
    for (int b = 0; b < 2; ++b) {
        m.affine_table[{run, b}] = {{AffineAction::applying("op")}};
        m.classical_table[{run, b, 0, {0}}] = {{run, +1}};
    }
    m.affine_table[{run, kRightMarker}] = {{AffineAction::weighting()}};
    for (int j = 1; j <= static_cast<int>(op.dimension()); ++j)
        m.classical_table[{run, kRightMarker, 0, {j}}] = {{j == 1 ? acc : rej, 0}};
    return m;
}

}  // namespace

TEST_CASE("validate_machine catches structural mistakes") {
    Machine m = walker(AffineOperator::identity(2));
    CHECK_NOTHROW(validate_machine(m));

    SUBCASE("distinguished states must differ") {
        m.reject_state = m.accept_state;
        CHECK_THROWS(validate_machine(m));
    }
    SUBCASE("operators must be declared") {
        m.affine_table[{0, 0}] = {{AffineAction::applying("nope")}};
        CHECK_THROWS_AS(validate_machine(m), UnknownOperator);
    }
    SUBCASE("operators must have the register's dimension") {
        m.registers[0].operators.emplace("bad", AffineOperator::identity(3));
        m.affine_table[{0, 0}] = {{AffineAction::applying("bad")}};
        CHECK_THROWS_AS(validate_machine(m), InvalidOperator);
    }
    SUBCASE("classical table must be total over possible outcomes") {
        m.classical_table.erase({0, kRightMarker, 0, {2}});
        CHECK_THROWS_AS(validate_machine(m), MissingTransition);
    }
    SUBCASE("tuple arity must match the register count") {
        m.affine_table[{0, 0}] = {{AffineAction::applying("id"), AffineAction::applying("id")}};
        CHECK_THROWS_AS(validate_machine(m), InvalidOperator);
    }
}

TEST_CASE("symbol_at maps the tape layout") {
    CHECK(symbol_at("01", 0, 2) == kLeftMarker);
    CHECK(symbol_at("01", 1, 2) == 0);
    CHECK(symbol_at("01", 2, 2) == 1);
    CHECK(symbol_at("01", 3, 2) == kRightMarker);
    CHECK_THROWS_AS(symbol_at("01", 4, 2), HeadOutOfTape);
    CHECK_THROWS_AS(symbol_at("01", -1, 2), HeadOutOfTape);
    CHECK_THROWS_AS(symbol_at("2", 1, 2), InvalidSymbol);
}

TEST_CASE("initial configuration starts every register at e1") {
    Machine m = walker(AffineOperator::identity(3));
    Configuration c = initial_configuration(m);
    CHECK(c.state == m.initial_state);
    CHECK(c.head == 0);
    CHECK(c.step_count == 0);
    CHECK(c.registers[0] == AffineState::basis(3, 1));
}

TEST_CASE("step applies operators exactly and counts steps") {
    AffineOperator op =
        AffineOperator::validate({{rat(2), rat(0)}, {rat(-1), rat(1)}});
    Machine m = walker(op);
    Configuration c = initial_configuration(m);
    auto next = [&](Configuration cur) {
        auto branches = step(m, cur, "11", 0, [](const OutcomeTuple&) { return 0u; });
        REQUIRE(branches.size() == 1);
        return branches[0].config;
    };
    c = next(c);  // left marker
    c = next(c);  // first 1: e1 -> (2, -1)
    CHECK(c.registers[0] == AffineState::validate({rat(2), rat(-1)}));
    c = next(c);  // second 1: (2,-1) -> (4,-3)
    CHECK(c.registers[0] == AffineState::validate({rat(4), rat(-3)}));
    CHECK(c.step_count == 3);
    CHECK(c.head == 3);

    auto leaves = step(m, c, "11", 0, [](const OutcomeTuple&) { return 0u; });
    REQUIRE(leaves.size() == 2);
    CHECK(leaves[0].probability == rat(4, 7));
    CHECK(leaves[0].outcome == OutcomeTuple{1});
    CHECK(leaves[0].config.state == m.accept_state);
    CHECK(leaves[1].probability == rat(3, 7));
    CHECK(leaves[1].config.state == m.reject_state);
    CHECK(leaves[0].config.registers[0] == AffineState::basis(2, 1));
}

TEST_CASE("stepping a halted configuration throws") {
    Machine m = walker(AffineOperator::identity(2));
    Configuration c = initial_configuration(m);
    c.state = m.accept_state;
    CHECK_THROWS_AS(step(m, c, "0", 0, [](const OutcomeTuple&) { return 0u; }), Halted);
    CHECK_THROWS_AS(enumerate_choices(m, c, "0"), Halted);
}

TEST_CASE("enumerate_choices lists only realizable outcomes") {
    Machine m = walker(AffineOperator::identity(2));
    Configuration c = initial_configuration(m);
    c.head = 2;  // on $ of a length-1 input, register still e1
    ChoicePoint cp = enumerate_choices(m, c, "0");
    REQUIRE(cp.affine_options.size() == 1);
    CHECK(cp.classical_options[0].size() == 1);  // only outcome (1) has mass
    CHECK(cp.classical_options[0].count({1}) == 1);
}

TEST_CASE("choice indices out of range throw") {
    Machine m = walker(AffineOperator::identity(2));
    Configuration c = initial_configuration(m);
    CHECK_THROWS_AS(step(m, c, "0", 1, [](const OutcomeTuple&) { return 0u; }),
                    UnresolvedChoice);
    c.head = 2;
    CHECK_THROWS_AS(step(m, c, "0", 0, [](const OutcomeTuple&) { return 5u; }),
                    UnresolvedChoice);
}

TEST_CASE("run_deterministic drives a weighting-free machine") {
    Machine m = walker(AffineOperator::identity(2));
    // Replace the weighting with a plain accept so the run is deterministic.
    m.affine_table[{0, kRightMarker}] = {{AffineAction::applying("id")}};
    m.classical_table.erase({0, kRightMarker, 0, {1}});
    m.classical_table.erase({0, kRightMarker, 0, {2}});
    m.classical_table[{0, kRightMarker, 0, {0}}] = {{m.accept_state, 0}};
    validate_machine(m);
    DeterministicRun r = run_deterministic(m, "0110", 100);
    CHECK(r.accepted);
    CHECK(r.steps == 6);
}

TEST_CASE("property: branch probabilities sum to 1 at every step") {
    std::mt19937_64 g(77);
    std::uniform_int_distribution<std::size_t> dims(2, 5);
    int cases = 0;
    while (cases < 10000) {
        Machine m = walker(testgen::random_affine_operator(g, dims(g)));
        std::string w;
        for (int i = 0, n = static_cast<int>(g() % 5); i < n; ++i)
            w.push_back(static_cast<char>('0' + (g() & 1)));
        Configuration c = initial_configuration(m);
        while (!halted(m, c)) {
            auto branches = step(m, c, w, 0, [](const OutcomeTuple&) { return 0u; });
            Rational total(0);
            for (const auto& b : branches) {
                total += b.probability;
                CHECK(b.probability > 0);
                CHECK(b.config.step_count == c.step_count + 1);
            }
            CHECK(total == 1);
            ++cases;
            // Descend into a pseudo-random branch to vary the visited states.
            c = branches[g() % branches.size()].config;
        }
    }
}
