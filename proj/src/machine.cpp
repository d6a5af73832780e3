#include "afav/machine.hpp"

#include <algorithm>

namespace afav {

int Machine::add_state(const std::string& name) {
    state_names.push_back(name);
    return static_cast<int>(state_names.size()) - 1;
}

int Machine::state_id(const std::string& name) const {
    auto it = std::find(state_names.begin(), state_names.end(), name);
    if (it == state_names.end()) throw Error("unknown state: " + name);
    return static_cast<int>(it - state_names.begin());
}

namespace {

/// All outcome-index combinations an operator tuple can produce: {0} for
/// applied registers, 1..m for weighted ones.
void outcome_combinations(const Machine& m, const OperatorTuple& tuple, std::size_t reg,
                          OutcomeTuple& partial, std::vector<OutcomeTuple>& out) {
    if (reg == tuple.size()) {
        out.push_back(partial);
        return;
    }
    if (!tuple[reg].is_weight()) {
        partial.push_back(0);
        outcome_combinations(m, tuple, reg + 1, partial, out);
        partial.pop_back();
        return;
    }
    for (std::size_t j = 1; j <= m.registers[reg].dimension; ++j) {
        partial.push_back(static_cast<int>(j));
        outcome_combinations(m, tuple, reg + 1, partial, out);
        partial.pop_back();
    }
}

}  // namespace

const Machine& validate_machine(const Machine& m) {
    if (m.state_names.empty()) throw Error("machine has no states");
    if (m.initial_state == m.accept_state || m.accept_state == m.reject_state ||
        m.initial_state == m.reject_state)
        throw Error("initial, accepting, and rejecting states must be distinct");
    for (const auto& [key, options] : m.affine_table) {
        for (std::size_t opt = 0; opt < options.size(); ++opt) {
            const OperatorTuple& tuple = options[opt];
            if (tuple.size() != m.registers.size())
                throw InvalidOperator("operator tuple arity mismatch");
            for (std::size_t reg = 0; reg < tuple.size(); ++reg) {
                if (tuple[reg].is_weight()) continue;
                const auto& ops = m.registers[reg].operators;
                auto it = ops.find(*tuple[reg].op);
                if (it == ops.end())
                    throw UnknownOperator("operator '" + *tuple[reg].op + "' not declared");
                if (it->second.dimension() != m.registers[reg].dimension)
                    throw InvalidOperator("operator '" + *tuple[reg].op + "' has wrong dimension");
            }
            std::vector<OutcomeTuple> combos;
            OutcomeTuple partial;
            outcome_combinations(m, tuple, 0, partial, combos);
            for (const auto& outcome : combos) {
                auto cit = m.classical_table.find({key.first, key.second, opt, outcome});
                if (cit == m.classical_table.end() || cit->second.empty())
                    throw MissingTransition("no classical rule for state " +
                                            m.state_names[static_cast<std::size_t>(key.first)] +
                                            " option " + std::to_string(opt));
            }
        }
    }
    // Operators are AffineOperator values, so column sums were checked at
    // construction; nothing further to verify there.
    return m;
}

Configuration initial_configuration(const Machine& m) {
    Configuration c;
    c.state = m.initial_state;
    c.head = 0;
    for (const auto& reg : m.registers)
        c.registers.push_back(AffineState::basis(reg.dimension, 1));
    return c;
}

Symbol symbol_at(const std::string& input, long head, int alphabet_size) {
    if (head == 0) return kLeftMarker;
    if (head == static_cast<long>(input.size()) + 1) return kRightMarker;
    if (head < 0 || head > static_cast<long>(input.size()) + 1)
        throw HeadOutOfTape("head position " + std::to_string(head) + " outside tape");
    int v = input[static_cast<std::size_t>(head - 1)] - '0';
    if (v < 0 || v >= alphabet_size) throw InvalidSymbol("input symbol outside alphabet");
    return v;
}

bool halted(const Machine& m, const Configuration& c) {
    return c.state == m.accept_state || c.state == m.reject_state;
}

ChoicePoint enumerate_choices(const Machine& m, const Configuration& c,
                              const std::string& input) {
    if (halted(m, c)) throw Halted();
    Symbol sym = symbol_at(input, c.head, m.alphabet_size);
    auto it = m.affine_table.find({c.state, sym});
    if (it == m.affine_table.end() || it->second.empty())
        throw MissingTransition("no affine rule for state " +
                                m.state_names[static_cast<std::size_t>(c.state)] + " on symbol " +
                                std::to_string(sym));
    ChoicePoint cp;
    cp.affine_options = it->second;
    for (std::size_t opt = 0; opt < cp.affine_options.size(); ++opt) {
        std::map<OutcomeTuple, std::vector<ClassicalMove>> per_outcome;
        // Outcomes that can actually occur: nonzero entries of weighted registers.
        std::vector<std::vector<int>> per_register;
        for (std::size_t reg = 0; reg < cp.affine_options[opt].size(); ++reg) {
            if (!cp.affine_options[opt][reg].is_weight()) {
                per_register.push_back({0});
            } else {
                std::vector<int> idx;
                for (const auto& o : weight(c.registers[reg]))
                    idx.push_back(static_cast<int>(o.index));
                per_register.push_back(idx);
            }
        }
        OutcomeTuple partial;
        std::function<void(std::size_t)> rec = [&](std::size_t reg) {
            if (reg == per_register.size()) {
                auto cit = m.classical_table.find({c.state, sym, opt, partial});
                if (cit == m.classical_table.end() || cit->second.empty())
                    throw MissingTransition("no classical rule for observed outcome");
                per_outcome[partial] = cit->second;
                return;
            }
            for (int v : per_register[reg]) {
                partial.push_back(v);
                rec(reg + 1);
                partial.pop_back();
            }
        };
        rec(0);
        cp.classical_options.push_back(std::move(per_outcome));
    }
    return cp;
}

std::vector<Branch> step(const Machine& m, const Configuration& c, const std::string& input,
                         std::size_t affine_choice,
                         const std::function<std::size_t(const OutcomeTuple&)>& classical_choice) {
    if (halted(m, c)) throw Halted();
    Symbol sym = symbol_at(input, c.head, m.alphabet_size);
    auto it = m.affine_table.find({c.state, sym});
    if (it == m.affine_table.end()) throw MissingTransition("no affine rule");
    if (affine_choice >= it->second.size()) throw UnresolvedChoice("affine choice out of range");
    const OperatorTuple& tuple = it->second[affine_choice];

    // Affine phase: per register either the exact operator product or the
    // weighting branch set.
    struct RegBranch {
        int outcome;  // 0 or 1..m
        Rational probability;
        AffineState state;
    };
    std::vector<std::vector<RegBranch>> reg_branches;
    for (std::size_t reg = 0; reg < tuple.size(); ++reg) {
        std::vector<RegBranch> branches;
        if (tuple[reg].is_weight()) {
            for (const auto& o : weight(c.registers[reg]))
                branches.push_back({static_cast<int>(o.index), o.probability, o.post_state});
        } else {
            const auto& ops = m.registers[reg].operators;
            auto oit = ops.find(*tuple[reg].op);
            if (oit == ops.end()) throw UnknownOperator("operator '" + *tuple[reg].op + "'");
            branches.push_back({0, Rational(1), apply(oit->second, c.registers[reg])});
        }
        reg_branches.push_back(std::move(branches));
    }

    std::vector<Branch> result;
    OutcomeTuple outcome;
    std::vector<AffineState> regs;
    Rational prob(1);
    std::function<void(std::size_t)> rec = [&](std::size_t reg) {
        if (reg == reg_branches.size()) {
            auto cit = m.classical_table.find({c.state, sym, affine_choice, outcome});
            if (cit == m.classical_table.end() || cit->second.empty())
                throw MissingTransition("no classical rule for observed outcome");
            std::size_t pick = classical_choice(outcome);
            if (pick >= cit->second.size()) throw UnresolvedChoice("classical choice out of range");
            const ClassicalMove& mv = cit->second[pick];
            Configuration next;
            next.state = mv.next_state;
            next.head = c.head + mv.head_move;
            if (next.head < 0 || next.head > static_cast<long>(input.size()) + 1)
                throw HeadOutOfTape("step would move the head off the tape");
            next.registers = regs;
            next.step_count = c.step_count + 1;
            result.push_back(Branch{prob, outcome, std::move(next)});
            return;
        }
        for (const auto& b : reg_branches[reg]) {
            outcome.push_back(b.outcome);
            regs.push_back(b.state);
            Rational saved = prob;
            prob *= b.probability;
            rec(reg + 1);
            prob = saved;
            regs.pop_back();
            outcome.pop_back();
        }
    };
    rec(0);
    return result;
}

DeterministicRun run_deterministic(const Machine& m, const std::string& input, long step_cap) {
    Configuration c = initial_configuration(m);
    while (!halted(m, c)) {
        if (c.step_count >= step_cap) throw Error("deterministic run exceeded step cap");
        ChoicePoint cp = enumerate_choices(m, c, input);
        if (cp.affine_options.size() != 1)
            throw UnresolvedChoice("machine is not deterministic (affine branching)");
        for (const auto& [outcome, moves] : cp.classical_options[0]) {
            (void)outcome;
            if (moves.size() != 1)
                throw UnresolvedChoice("machine is not deterministic (classical branching)");
        }
        auto branches = step(m, c, input, 0, [](const OutcomeTuple&) { return 0u; });
        if (branches.size() != 1)
            throw UnresolvedChoice("machine is not deterministic (weighting branch)");
        c = branches[0].config;
    }
    return {c.state == m.accept_state, c.step_count};
}

}  // namespace afav
