#include "afav/report.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace afav {

using ordered_json = nlohmann::ordered_json;

namespace {

LanguageOracle oracle_from_json(const ordered_json& j) {
    if (!j.is_object()) throw ParseError("language spec must be a JSON object");
    int r = j.value("alphabet_size", 2);
    if (r < 2) throw ParseError("alphabet_size must be >= 2");
    std::string name = j.value("name", "");

    if (j.contains("dfa")) {
        if (!j.contains("support_bound"))
            throw ParseError("DFA-described languages need an explicit support_bound");
        const auto& dfa = j.at("dfa");
        int start = dfa.at("start").get<int>();
        std::vector<int> accepting = dfa.at("accepting").get<std::vector<int>>();
        auto transitions = dfa.at("transitions").get<std::vector<std::vector<int>>>();
        int states = static_cast<int>(transitions.size());
        for (const auto& row : transitions)
            if (static_cast<int>(row.size()) != r)
                throw ParseError("each DFA transition row needs one entry per symbol");
        auto in_range = [states](int q) { return q >= 0 && q < states; };
        if (!in_range(start)) throw ParseError("DFA start state out of range");
        for (int q : accepting)
            if (!in_range(q)) throw ParseError("DFA accepting state out of range");
        for (const auto& row : transitions)
            for (int q : row)
                if (!in_range(q)) throw ParseError("DFA successor state out of range");

        LanguageOracle L;
        L.alphabet_size = r;
        L.support_bound = j.at("support_bound").get<int>();
        L.name = name;
        L.membership = [start, accepting, transitions](const std::string& w) {
            int q = start;
            for (char ch : w) q = transitions[static_cast<std::size_t>(q)]
                                             [static_cast<std::size_t>(ch - '0')];
            return std::find(accepting.begin(), accepting.end(), q) != accepting.end();
        };
        return L;
    }

    std::vector<std::string> members = j.value("members", std::vector<std::string>{});
    LanguageOracle L;
    try {
        L = LanguageOracle::from_members(r, members, name);
    } catch (const InvalidSymbol& e) {
        throw AlphabetMismatch(e.what());
    }
    if (j.contains("support_bound")) {
        int bound = j.at("support_bound").get<int>();
        if (bound < *L.support_bound)
            throw ParseError("support_bound smaller than the longest member");
        L.support_bound = bound;
    }
    return L;
}

std::string symbol_name(Symbol s) {
    if (s == kLeftMarker) return "^";
    if (s == kRightMarker) return "$";
    return std::string(1, static_cast<char>('0' + s));
}

std::string state_vector(const AffineState& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.dimension(); ++i) {
        if (i) out += " ";
        out += to_fraction(v[i]);
    }
    return out + ")";
}

std::string tuple_name(const OperatorTuple& t) {
    std::string out = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += " ";
        out += t[i].is_weight() ? "weight" : *t[i].op;
    }
    return out + "]";
}

}  // namespace

LanguageOracle parse_language_spec_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    return oracle_from_json(j);
}

LanguageOracle parse_language_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open language spec '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_language_spec_text(buffer.str());
}

std::string emit_language_spec(const LanguageOracle& L) {
    if (!L.finite()) throw UnsupportedParams("only finite-support oracles serialize");
    ordered_json j;
    j["name"] = L.name;
    j["alphabet_size"] = L.alphabet_size;
    j["support_bound"] = *L.support_bound;
    std::vector<std::string> members;
    for (const auto& w : all_strings_up_to(L.alphabet_size, *L.support_bound))
        if (L.contains(w)) members.push_back(w);
    j["members"] = members;
    return j.dump(2) + "\n";
}

std::vector<std::string> all_strings_up_to(int r, int max_len) {
    std::vector<std::string> out;
    Int count = 0;
    Int pw = 1;
    for (int j = 0; j <= max_len; ++j) {
        count += pw;
        pw *= r;
    }
    for (Int i = 1; i <= count; ++i) out.push_back(shortlex_string(i, r));
    return out;
}

bool VerificationReport::all_pass() const {
    for (const auto& row : rows)
        if (!row.pass) return false;
    return true;
}

VerificationReport run_verify(const LanguageOracle& L, const ProtocolParams& params,
                              const std::vector<std::string>& inputs,
                              const VerifyOptions& opts) {
    ProtocolMachine pm =
        params.strong ? build_strong(L, params) : build_weak(L, params);

    VerificationReport report;
    report.language = L.name;
    report.params = pm.params;
    Rational eps = pm.params.error_bound();

    for (const auto& w : inputs) {
        VerificationRow row;
        row.input = w;
        row.member = L.contains(w);

        Strategy honest = honest_strategy(L, w, pm.params);
        StrategyOutcome out = evaluate_strategy(pm, w, honest);
        row.honest_accept = out.accept.lo;
        row.expected_steps = out.expected_steps;

        Interval cf = closed_form_acceptance(L, w, pm.params, honest, opts.depth);
        bool cross_ok = cf.lo <= out.accept.lo && out.accept.hi <= cf.hi;
        if (!cross_ok) row.note = "closed-form mismatch";

        AdversaryBound adv = max_acceptance(pm, w, opts.depth);
        row.max_accept = adv.max_accept;

        bool pass;
        if (row.member) {
            Rational threshold = 1 - eps;
            if (pm.params.strong) {
                Rational p = rat_pow(Rational(1, pm.params.coin_base),
                                     static_cast<unsigned long>(w.size()) + 1);
                Int K = shortlex_index(w, L.alphabet_size);
                threshold *= rat_pow(1 - p, (K - 1).convert_to<unsigned long>());
            }
            pass = row.honest_accept >= threshold;
        } else {
            pass = adv.max_accept.hi <= eps;
            if (pm.params.strong) {
                StrategyOutcome stall = evaluate_strategy(pm, w, Strategy::stall());
                bool rejected = stall.reject.lo == 1 && stall.halting_certified;
                if (!rejected) {
                    pass = false;
                    if (row.note.empty()) row.note = "stall rejection not certified";
                }
            }
        }

        if (opts.monte_carlo_samples > 0) {
            MonteCarloResult mc = monte_carlo(pm, w, honest, opts.monte_carlo_samples,
                                              opts.seed, opts.step_cap);
            // 4-sigma binomial concordance, checked exactly:
            // (freq - p)^2 <= 16 p (1-p) / n.
            Rational p = row.honest_accept;
            Rational diff = mc.accept_freq - p;
            Rational bound = 16 * p * (1 - p) / opts.monte_carlo_samples;
            if (diff * diff > bound || mc.timeout_freq != 0) {
                pass = false;
                if (row.note.empty()) row.note = "monte-carlo discordance";
            }
        }

        row.pass = pass && cross_ok;
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

std::string expected_text(const std::optional<Rational>& e) {
    return e ? to_fraction(*e) : std::string("inf");
}

std::string emit_text(const VerificationReport& r) {
    std::ostringstream os;
    os << "afav " << kVersion << "  language=" << r.language << "  k=" << r.params.k
       << "  r=" << r.params.r << "  d=" << r.params.d() << "  c=" << to_fraction(r.params.c())
       << "  mode=" << (r.params.strong ? "strong" : "weak") << "\n";

    std::vector<std::array<std::string, 7>> cells;
    cells.push_back({"input", "member", "honest_accept", "max_accept", "expected_steps",
                     "verdict", "note"});
    for (const auto& row : r.rows) {
        std::string honest =
            to_fraction(row.honest_accept) + " (~" + to_decimal(row.honest_accept) + ")";
        std::string maxacc = "[" + to_fraction(row.max_accept.lo) + ", " +
                             to_fraction(row.max_accept.hi) + "]";
        cells.push_back({row.input.empty() ? "(empty)" : row.input,
                         row.member ? "yes" : "no", honest, maxacc,
                         expected_text(row.expected_steps), row.pass ? "PASS" : "FAIL",
                         row.note});
    }
    std::array<std::size_t, 7> width{};
    for (const auto& c : cells)
        for (std::size_t i = 0; i < 7; ++i) width[i] = std::max(width[i], c[i].size());
    for (const auto& c : cells) {
        for (std::size_t i = 0; i < 7; ++i) {
            os << c[i];
            if (i + 1 < 7) os << std::string(width[i] - c[i].size() + 2, ' ');
        }
        os << "\n";
    }
    os << (r.all_pass() ? "result: PASS" : "result: FAIL") << "\n";
    return os.str();
}

std::string emit_json(const VerificationReport& r) {
    ordered_json j;
    j["version"] = kVersion;
    j["language"] = r.language;
    j["params"] = {{"k", r.params.k},
                   {"r", r.params.r},
                   {"strong", r.params.strong},
                   {"coin_base", r.params.coin_base},
                   {"d", r.params.d()},
                   {"c", to_fraction(r.params.c())}};
    j["rows"] = ordered_json::array();
    for (const auto& row : r.rows) {
        j["rows"].push_back({{"input", row.input},
                             {"member", row.member},
                             {"honest_accept", to_fraction(row.honest_accept)},
                             {"max_accept_lo", to_fraction(row.max_accept.lo)},
                             {"max_accept_hi", to_fraction(row.max_accept.hi)},
                             {"expected_steps", expected_text(row.expected_steps)},
                             {"verdict", row.pass ? "PASS" : "FAIL"},
                             {"note", row.note}});
    }
    j["all_pass"] = r.all_pass();
    return j.dump(2) + "\n";
}

std::string emit_csv(const VerificationReport& r) {
    std::ostringstream os;
    os << "input,member,honest_accept,max_accept_lo,max_accept_hi,expected_steps,verdict,note\n";
    for (const auto& row : r.rows) {
        os << row.input << "," << (row.member ? "yes" : "no") << ","
           << to_fraction(row.honest_accept) << "," << to_fraction(row.max_accept.lo) << ","
           << to_fraction(row.max_accept.hi) << "," << expected_text(row.expected_steps) << ","
           << (row.pass ? "PASS" : "FAIL") << "," << row.note << "\n";
    }
    return os.str();
}

}  // namespace

std::string emit_report(const VerificationReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::text: return emit_text(report);
        case ReportFormat::json: return emit_json(report);
        case ReportFormat::csv: return emit_csv(report);
    }
    throw Error("unknown report format");
}

std::string dump_machine(const Machine& m) {
    std::ostringstream os;
    os << "machine\n";
    os << "  alphabet_size: " << m.alphabet_size << "\n";
    os << "  states:";
    for (const auto& s : m.state_names) os << " " << s;
    os << "\n";
    os << "  initial: " << m.state_names[static_cast<std::size_t>(m.initial_state)]
       << "  accept: " << m.state_names[static_cast<std::size_t>(m.accept_state)]
       << "  reject: " << m.state_names[static_cast<std::size_t>(m.reject_state)] << "\n";
    for (std::size_t reg = 0; reg < m.registers.size(); ++reg) {
        os << "register " << reg << " (dim " << m.registers[reg].dimension << ")\n";
        for (const auto& [name, op] : m.registers[reg].operators) {
            os << "  operator " << name << ":\n";
            for (const auto& row : op.rows()) {
                os << "   ";
                for (const auto& v : row) os << " " << to_fraction(v);
                os << "\n";
            }
        }
    }
    os << "affine table\n";
    for (const auto& [key, options] : m.affine_table) {
        os << "  (" << m.state_names[static_cast<std::size_t>(key.first)] << ", "
           << symbol_name(key.second) << "):";
        for (std::size_t i = 0; i < options.size(); ++i)
            os << (i ? " | " : " ") << tuple_name(options[i]);
        os << "\n";
    }
    os << "classical table\n";
    for (const auto& [key, moves] : m.classical_table) {
        const auto& [state, sym, opt, outcome] = key;
        os << "  (" << m.state_names[static_cast<std::size_t>(state)] << ", "
           << symbol_name(sym) << ", opt " << opt << ", outcome (";
        for (std::size_t i = 0; i < outcome.size(); ++i)
            os << (i ? " " : "") << outcome[i];
        os << ")):";
        for (std::size_t i = 0; i < moves.size(); ++i)
            os << (i ? " | " : " ") << "("
               << m.state_names[static_cast<std::size_t>(moves[i].next_state)] << ", "
               << (moves[i].head_move > 0 ? "+1" : moves[i].head_move < 0 ? "-1" : "0") << ")";
        os << "\n";
    }
    return os.str();
}

std::string trace_honest(const ProtocolMachine& pm, const std::string& w) {
    const Machine& m = pm.machine;
    Strategy s = honest_strategy(pm.language, w, pm.params);
    std::ostringstream os;
    os << "honest run, input \"" << w << "\" (K="
       << shortlex_index(w, pm.language.alphabet_size).str() << ")\n";
    Configuration c = initial_configuration(m);
    Int iter = 1;
    while (!halted(m, c)) {
        Symbol sym = symbol_at(w, c.head, m.alphabet_size);
        bool at_start = pm.is_iteration_start(c.state, sym);
        std::size_t aff = 0, cls = 0;
        if (at_start) {
            bool exit_now = s.exit_iteration && *s.exit_iteration == iter;
            std::tie(aff, cls) = pm.iteration_choice(s.guess(iter), exit_now);
        }
        auto branches = step(m, c, w, aff, [cls](const OutcomeTuple&) { return cls; });
        // Follow the accepting branch: stay alive if possible, accept if not.
        std::size_t pick = 0;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            if (!halted(m, branches[i].config) ||
                branches[i].config.state == m.accept_state) {
                pick = i;
                break;
            }
        }
        const Branch& b = branches[pick];
        os << "step " << b.config.step_count << ": "
           << m.state_names[static_cast<std::size_t>(c.state)] << " @" << c.head << " on "
           << symbol_name(sym) << "  ->  "
           << m.state_names[static_cast<std::size_t>(b.config.state)] << " @" << b.config.head;
        if (branches.size() > 1) os << "  p=" << to_fraction(b.probability);
        for (const auto& reg : b.config.registers) os << "  " << state_vector(reg);
        os << "\n";
        if (at_start) ++iter;
        c = b.config;
    }
    os << (c.state == m.accept_state ? "accepted" : "rejected") << " after " << c.step_count
       << " steps\n";
    return os.str();
}

}  // namespace afav
