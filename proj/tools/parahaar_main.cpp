// Command-line front end: ensemble generation, verification runs, depth
// sweeps, two-weight checks.  Exit codes: 0 all in-class assertions passed,
// 1 an assertion failed, 2 bad configuration.
#include "parahaar/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

void add_common_flags(CLI::App* cmd, parahaar::RunConfig& cfg) {
    cmd->add_option("--L", cfg.L, "grid depth (resolution 2^-L)")->capture_default_str();
    cmd->add_option("--ensemble", cfg.ensemble, "gaussian | sparse | chain | file")->capture_default_str();
    cmd->add_option("--density", cfg.density, "nonzero fraction for the sparse ensemble")->capture_default_str();
    cmd->add_option("--trials", cfg.trials, "ensemble draws per run")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    cmd->add_option("--format", cfg.format, "json | csv")->capture_default_str();
    cmd->add_option("--out", cfg.out_path, "also write the report stream to this path");
    cmd->add_option("--symbols", cfg.symbols_path, "symbol file for the file ensemble");
    cmd->add_option("--symbols-beta", cfg.symbols_beta_path, "second symbol file for two-symbol cases");
    cmd->add_option("--mc-trials", cfg.mc_trials, "attach a Monte Carlo first-moment estimate (0 = off)");
}

int finish(const parahaar::RunResult& res) {
    std::fputs(res.output.c_str(), res.exit_code == 2 ? stderr : stdout);
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dyadic Haar paraproduct laboratory: builds random-sign paraproduct "
                 "compositions as finite operators and verifies their norm characterizations"};
    app.require_subcommand(1);

    parahaar::RunConfig cfg;

    auto* verify = app.add_subcommand("verify", "verify one characterization over ensemble draws");
    verify->add_option("--case", cfg.case_id,
                       "10-01 01-00 01-00p 01-01 01-10 classical embedding, or a nine-case id "
                       "(100-001 010-100 100-100 100-010 001-100 001-010 010-010 001-001 010-001)")
        ->capture_default_str();
    add_common_flags(verify, cfg);

    auto* twow = app.add_subcommand("two-weight", "verify the two-weight multiplier characterization");
    add_common_flags(twow, cfg);

    auto* sweep = app.add_subcommand("sweep", "run one case over a depth range, CSV output");
    sweep->add_option("--case", cfg.case_id, "case id as in verify")->capture_default_str();
    sweep->add_option("--L-max", cfg.L_max, "upper depth of the sweep (inclusive)");
    add_common_flags(sweep, cfg);

    auto* gen = app.add_subcommand("gen-symbols", "draw a symbol file for a chosen ensemble");
    add_common_flags(gen, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (app.got_subcommand(verify)) return finish(parahaar::run_verify(cfg));
    if (app.got_subcommand(twow)) return finish(parahaar::run_two_weight(cfg));
    if (app.got_subcommand(sweep)) {
        cfg.format = "csv";
        return finish(parahaar::run_sweep(cfg));
    }
    return finish(parahaar::run_gen_symbols(cfg));
}
