#pragma once

#include <string>
#include <vector>

#include "afav/analysis.hpp"

namespace afav {

inline constexpr const char* kVersion = "0.1.0";

/// Reads a language spec file (JSON): either an explicit member list
///   {"name": "...", "alphabet_size": r, "members": ["0", "11"]}
/// with an optional "support_bound" (defaults to the longest member), or a
/// DFA description
///   {"name": "...", "alphabet_size": r, "support_bound": n,
///    "dfa": {"start": q0, "accepting": [..], "transitions": [[..], ..]}}
/// where transitions[q][b] is the successor state. support_bound is required
/// in the DFA form: it is what keeps alpha exactly computable.
LanguageOracle parse_language_spec(const std::string& path);
LanguageOracle parse_language_spec_text(const std::string& text);

/// Member-list JSON for the oracle (enumerates strings up to the support
/// bound); parse(emit(L)) agrees with L on every string.
std::string emit_language_spec(const LanguageOracle& L);

struct VerificationRow {
    std::string input;
    bool member = false;
    Rational honest_accept;
    ProbabilityInterval max_accept;
    std::optional<Rational> expected_steps;  // honest strategy; nullopt = +inf
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::string language;
    ProtocolParams params;
    std::vector<VerificationRow> rows;

    bool all_pass() const;
};

struct VerifyOptions {
    int depth = 0;
    long monte_carlo_samples = 0;  // 0 disables the stochastic cross-check
    unsigned long long seed = 1;
    long step_cap = 100000;
};

/// Builds the protocol for (L, params) and analyses every input: honest
/// acceptance (cross-checked against the closed form), certified adversary
/// maximum, expected steps, and an optional Monte-Carlo concordance check.
/// A row passes when the acceptance/soundness inequalities for the run's k
/// hold; in strong mode the stall-forever strategy must additionally be
/// rejected with certified probability 1 on nonmembers.
VerificationReport run_verify(const LanguageOracle& L, const ProtocolParams& params,
                              const std::vector<std::string>& inputs,
                              const VerifyOptions& opts = {});

enum class ReportFormat { text, json, csv };

/// Byte-deterministic serialization; Rationals stay "num/den" everywhere,
/// with a clearly marked decimal approximation in the text format only.
std::string emit_report(const VerificationReport& report, ReportFormat format);

/// Diff-friendly structured-text listing of a machine: states, operator
/// matrices as "num/den" grids, and both transition tables.
std::string dump_machine(const Machine& m);

/// Step-by-step listing of the honest run's accepting branch.
std::string trace_honest(const ProtocolMachine& pm, const std::string& w);

/// All strings over {0..r-1} of length <= max_len, in shortlex order.
std::vector<std::string> all_strings_up_to(int r, int max_len);

}  // namespace afav
