#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "afav/report.hpp"

using namespace afav;

namespace {

struct CommonOpts {
    std::string spec_path;
    int k = 3;
    int r = 2;
    bool strong = false;
    int depth = 0;
    std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("spec", o.spec_path, "language spec file (JSON)")->required();
    cmd->add_option("--k", o.k, "error bound parameter (error = 1/k)");
    cmd->add_option("--r", o.r, "input alphabet size");
    cmd->add_flag("--strong", o.strong, "build the strong (halting) protocol");
    cmd->add_option("--depth", o.depth, "alpha truncation depth (interval mode)");
}

ProtocolParams params_of(const CommonOpts& o) {
    ProtocolParams p;
    p.k = o.k;
    p.r = o.r;
    p.strong = o.strong;
    return p;
}

ProtocolMachine build(const CommonOpts& o, const LanguageOracle& L) {
    ProtocolParams p = params_of(o);
    return o.strong ? build_strong(L, p) : build_weak(L, p);
}

ReportFormat format_of(const std::string& name) {
    if (name == "text") return ReportFormat::text;
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    throw Error("unknown format '" + name + "' (expected text, json, or csv)");
}

Strategy strategy_of(const std::string& name, const LanguageOracle& L, const std::string& w,
                     const ProtocolParams& params) {
    if (name == "honest") return honest_strategy(L, w, params);
    if (name == "stall") return Strategy::stall();
    throw Error("unknown strategy '" + name + "' (expected honest or stall)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analysis of affine-automaton verification protocols"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts build_o, verify_o, trace_o, adv_o, sample_o;
    std::string trace_w, adv_w, sample_w;
    int max_len = 2;
    std::vector<std::string> inputs;
    long samples = 100000, mc_samples = 0;
    unsigned long long seed = 1;
    long step_cap = 100000;
    std::string sample_strategy = "honest";

    CLI::App* cmd_build = app.add_subcommand("build", "dump the protocol machine");
    add_common(cmd_build, build_o);

    CLI::App* cmd_verify = app.add_subcommand("verify", "run the full verification suite");
    add_common(cmd_verify, verify_o);
    cmd_verify->add_option("--max-len", max_len, "analyze all inputs up to this length");
    cmd_verify->add_option("--inputs", inputs, "explicit input list (overrides --max-len)");
    cmd_verify->add_option("--format", verify_o.format, "text, json, or csv");
    cmd_verify->add_option("--samples", mc_samples, "Monte-Carlo cross-check sample count");
    cmd_verify->add_option("--seed", seed, "Monte-Carlo seed");
    cmd_verify->add_option("--step-cap", step_cap, "Monte-Carlo per-run step cap");

    CLI::App* cmd_trace = app.add_subcommand("trace", "honest-run step listing");
    add_common(cmd_trace, trace_o);
    cmd_trace->add_option("input", trace_w, "input string")->required();

    CLI::App* cmd_adv = app.add_subcommand("adversary", "certified maximum acceptance");
    add_common(cmd_adv, adv_o);
    cmd_adv->add_option("input", adv_w, "input string")->required();

    CLI::App* cmd_sample = app.add_subcommand("sample", "Monte-Carlo estimate only");
    add_common(cmd_sample, sample_o);
    cmd_sample->add_option("input", sample_w, "input string")->required();
    cmd_sample->add_option("--samples", samples, "sample count");
    cmd_sample->add_option("--seed", seed, "PRNG seed");
    cmd_sample->add_option("--step-cap", step_cap, "per-run step cap");
    cmd_sample->add_option("--strategy", sample_strategy, "honest or stall");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (cmd_build->parsed()) {
            LanguageOracle L = parse_language_spec(build_o.spec_path);
            std::cout << dump_machine(build(build_o, L).machine);
            return 0;
        }
        if (cmd_trace->parsed()) {
            LanguageOracle L = parse_language_spec(trace_o.spec_path);
            std::cout << trace_honest(build(trace_o, L), trace_w);
            return 0;
        }
        if (cmd_adv->parsed()) {
            LanguageOracle L = parse_language_spec(adv_o.spec_path);
            ProtocolMachine pm = build(adv_o, L);
            AdversaryBound b = max_acceptance(pm, adv_w, adv_o.depth);
            std::cout << "max_accept: [" << to_fraction(b.max_accept.lo) << ", "
                      << to_fraction(b.max_accept.hi) << "]\n";
            std::cout << "search_frontier: " << b.search_frontier.str() << "\n";
            std::cout << "witness: guesses=";
            for (int g : b.witness.guesses) std::cout << g;
            if (b.witness.exit_iteration)
                std::cout << " exit=" << b.witness.exit_iteration->str();
            else
                std::cout << " (stall)";
            std::cout << "\n";
            return 0;
        }
        if (cmd_sample->parsed()) {
            LanguageOracle L = parse_language_spec(sample_o.spec_path);
            ProtocolMachine pm = build(sample_o, L);
            Strategy s = strategy_of(sample_strategy, L, sample_w, pm.params);
            MonteCarloResult mc = monte_carlo(pm, sample_w, s, samples, seed, step_cap);
            std::cout << "accept_freq: " << to_fraction(mc.accept_freq) << " (~"
                      << to_decimal(mc.accept_freq) << ")\n";
            std::cout << "reject_freq: " << to_fraction(mc.reject_freq) << " (~"
                      << to_decimal(mc.reject_freq) << ")\n";
            std::cout << "timeout_freq: " << to_fraction(mc.timeout_freq) << "\n";
            std::cout << "mean_steps: " << to_fraction(mc.mean_steps) << " (~"
                      << to_decimal(mc.mean_steps) << ")\n";
            return 0;
        }
        // verify
        LanguageOracle L = parse_language_spec(verify_o.spec_path);
        if (inputs.empty()) inputs = all_strings_up_to(verify_o.r, max_len);
        VerifyOptions opts;
        opts.depth = verify_o.depth;
        opts.monte_carlo_samples = mc_samples;
        opts.seed = seed;
        opts.step_cap = step_cap;
        auto t0 = std::chrono::steady_clock::now();
        VerificationReport report = run_verify(L, params_of(verify_o), inputs, opts);
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
        std::cout << emit_report(report, format_of(verify_o.format));
        // Wall time never enters the report body: reports stay byte-identical
        // across runs.
        std::cerr << "wall time: " << elapsed.count() << "s\n";
        return report.all_pass() ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
