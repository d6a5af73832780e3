#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "afav/core.hpp"
#include "afav/errors.hpp"

namespace afav {

/// Tape symbols: input symbols are 0..r-1; the end-markers get reserved
/// negative values.
using Symbol = int;
constexpr Symbol kLeftMarker = -1;
constexpr Symbol kRightMarker = -2;

/// One register's slot in an affine phase option: either a named operator or
/// a weighting.
struct AffineAction {
    std::optional<std::string> op;  // nullopt => weighting

    static AffineAction weighting() { return {std::nullopt}; }
    static AffineAction applying(std::string name) { return {std::move(name)}; }
    bool is_weight() const { return !op.has_value(); }

    bool operator==(const AffineAction&) const = default;
    auto operator<=>(const AffineAction&) const = default;
};

using OperatorTuple = std::vector<AffineAction>;  // one entry per register
using OutcomeTuple = std::vector<int>;            // 0 = not weighted, else 1..m_i

struct ClassicalMove {
    int next_state = 0;
    int head_move = 0;  // -1, 0, +1
    bool operator==(const ClassicalMove&) const = default;
};

struct RegisterSpec {
    std::size_t dimension = 1;
    std::map<std::string, AffineOperator> operators;
};

/// Full 2ANfA description. Nondeterminism lives in both tables: the affine
/// table offers an ordered list of operator tuples per (state, symbol), and
/// the classical table offers an ordered list of moves per (state, symbol,
/// chosen affine option, observed outcome tuple). Option order is declaration
/// order, so strategies indexing into it are reproducible.
struct Machine {
    std::vector<std::string> state_names;
    int initial_state = 0;
    int accept_state = 0;
    int reject_state = 0;
    int alphabet_size = 2;
    std::vector<RegisterSpec> registers;

    std::map<std::pair<int, Symbol>, std::vector<OperatorTuple>> affine_table;
    std::map<std::tuple<int, Symbol, std::size_t, OutcomeTuple>, std::vector<ClassicalMove>>
        classical_table;

    int add_state(const std::string& name);
    int state_id(const std::string& name) const;
};

/// Static checks: distinguished states distinct, every named operator exists
/// with the right dimension, and the classical table is total over every
/// (state, symbol, option, outcome-combination) the affine table can produce.
/// The head-bound guarantee is checked dynamically at step time.
const Machine& validate_machine(const Machine& m);

struct Configuration {
    int state = 0;
    long head = 0;  // 0 = left marker, |w|+1 = right marker
    std::vector<AffineState> registers;
    long step_count = 0;
};

Configuration initial_configuration(const Machine& m);

Symbol symbol_at(const std::string& input, long head, int alphabet_size);

bool halted(const Machine& m, const Configuration& c);

/// All options available at a non-halted configuration: the affine options,
/// and for each affine option the classical options per outcome tuple that
/// can actually occur (zero-probability weighting outcomes are not listed).
struct ChoicePoint {
    std::vector<OperatorTuple> affine_options;
    std::vector<std::map<OutcomeTuple, std::vector<ClassicalMove>>> classical_options;
};

ChoicePoint enumerate_choices(const Machine& m, const Configuration& c, const std::string& input);

struct Branch {
    Rational probability;
    OutcomeTuple outcome;
    Configuration config;
};

/// Executes one (affine phase, classical phase) step under the given choices.
/// Weighted registers branch per outcome with its exact probability and
/// collapse to the observed basis state; the realized outcome tuple selects
/// the classical rule. Branch probabilities sum to exactly 1 and step_count
/// increments by 1.
std::vector<Branch> step(const Machine& m, const Configuration& c, const std::string& input,
                         std::size_t affine_choice,
                         const std::function<std::size_t(const OutcomeTuple&)>& classical_choice);

/// Runs a machine with no branching anywhere (t = z = 1, no weighting) to
/// termination, 2DFA style. Throws if a choice point ever offers more than
/// one option or a weighting occurs.
struct DeterministicRun {
    bool accepted = false;
    long steps = 0;
};
DeterministicRun run_deterministic(const Machine& m, const std::string& input, long step_cap);

}  // namespace afav
