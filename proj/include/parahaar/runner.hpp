// Command implementations behind the CLI: ensemble generation, verification
// runs, depth sweeps, report emission.  Kept header-level so tests can drive
// the exact code paths the binary uses.
#pragma once

#include "parahaar/ensembles.hpp"
#include "parahaar/io.hpp"
#include "parahaar/theorems.hpp"

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace parahaar {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string case_id = "01-00";
    int L = 6;
    int L_max = -1;  // sweep upper depth; -1 means single depth
    std::string ensemble = "gaussian";
    double density = 0.1;
    int trials = 50;
    std::uint64_t seed = 1;
    std::string format = "json";  // json | csv
    std::string out_path;         // empty: caller prints
    std::string symbols_path;
    std::string symbols_beta_path;
    int mc_trials = 0;
};

struct RunResult {
    int exit_code = 0;  // 0 ok, 1 assertion failure, 2 usage error
    std::string output;
};

inline const std::set<std::string>& symbol_pair_cases() {
    static const std::set<std::string> s = {"10-01", "01-00", "01-00p", "01-01", "01-10"};
    return s;
}
inline const std::set<std::string>& single_symbol_cases() {
    static const std::set<std::string> s = {"classical", "embedding"};
    return s;
}
inline const std::set<std::string>& function_pair_cases() {
    static const std::set<std::string> s = {"100-001", "010-100", "100-100", "100-010", "001-100",
                                            "001-010", "010-010", "001-001", "010-001"};
    return s;
}

inline void validate(const RunConfig& cfg) {
    if (cfg.L < 1 || cfg.L > 12) throw ConfigError("--L must lie in [1,12] for dense verification");
    if (cfg.L_max >= 0 && (cfg.L_max < cfg.L || cfg.L_max > 12))
        throw ConfigError("--L-max must lie in [--L,12]");
    if (cfg.trials < 1) throw ConfigError("--trials must be >= 1");
    if (cfg.density <= 0.0 || cfg.density > 1.0) throw ConfigError("--density must lie in (0,1]");
    if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("--format must be json or csv");
    const EnsembleKind kind = parse_ensemble(cfg.ensemble);
    if (kind == EnsembleKind::file && cfg.symbols_path.empty())
        throw ConfigError("file ensemble requires --symbols");
}

namespace detail {

inline CoefSequence sequence_for_trial(const RunConfig& cfg, int depth, std::uint64_t tag) {
    SplitMix64 rng(derive_seed(cfg.seed, tag));
    return draw_sequence(depth, parse_ensemble(cfg.ensemble), cfg.density, rng);
}

// Stable per-(depth, trial, slot) stream tags.
inline std::uint64_t stream_tag(int depth, int trial, int slot) {
    return (static_cast<std::uint64_t>(depth) << 40) | (static_cast<std::uint64_t>(trial) << 8) |
           static_cast<std::uint64_t>(slot);
}

inline std::string emit(const RunConfig& cfg, const std::vector<VerificationReport>& reports) {
    std::string out;
    if (cfg.format == "csv") {
        out += csv_header();
        for (const auto& r : reports) out += csv_row(r);
    } else {
        for (const auto& r : reports) out += report_json(r).dump() + "\n";
    }
    return out;
}

inline std::vector<VerificationReport> run_case_at_depth(const RunConfig& cfg, int depth) {
    const TruncatedGrid grid = make_grid(depth);
    const EnsembleKind kind = parse_ensemble(cfg.ensemble);
    const int trials = kind == EnsembleKind::file ? 1 : cfg.trials;
    std::vector<VerificationReport> reports;
    reports.reserve(static_cast<std::size_t>(trials));

    for (int t = 0; t < trials; ++t) {
        VerifyOptions opts;
        opts.seed = derive_seed(cfg.seed, stream_tag(depth, t, 0));
        opts.mc_trials = cfg.mc_trials;
        VerificationReport rep;

        if (symbol_pair_cases().count(cfg.case_id)) {
            CoefSequence b = kind == EnsembleKind::file
                                 ? read_symbol_file(cfg.symbols_path)
                                 : sequence_for_trial(cfg, depth, stream_tag(depth, t, 1));
            CoefSequence beta = kind == EnsembleKind::file
                                    ? (cfg.symbols_beta_path.empty()
                                           ? throw ConfigError("case needs --symbols-beta with the file ensemble")
                                           : read_symbol_file(cfg.symbols_beta_path))
                                    : sequence_for_trial(cfg, depth, stream_tag(depth, t, 2));
            if (b.depth() != depth || beta.depth() != depth)
                throw ConfigError("symbol file depth differs from --L");
            rep = verify_main(cfg.case_id, b, beta, grid, opts);
        } else if (single_symbol_cases().count(cfg.case_id)) {
            CoefSequence b = kind == EnsembleKind::file
                                 ? read_symbol_file(cfg.symbols_path)
                                 : sequence_for_trial(cfg, depth, stream_tag(depth, t, 1));
            if (b.depth() != depth) throw ConfigError("symbol file depth differs from --L");
            rep = cfg.case_id == "classical" ? verify_classical(b, grid, opts)
                                             : verify_embedding(b, grid, opts);
        } else if (function_pair_cases().count(cfg.case_id)) {
            CoefSequence cb = kind == EnsembleKind::file
                                  ? read_symbol_file(cfg.symbols_path)
                                  : sequence_for_trial(cfg, depth, stream_tag(depth, t, 1));
            CoefSequence cbeta = kind == EnsembleKind::file
                                     ? (cfg.symbols_beta_path.empty()
                                            ? throw ConfigError("case needs --symbols-beta with the file ensemble")
                                            : read_symbol_file(cfg.symbols_beta_path))
                                     : sequence_for_trial(cfg, depth, stream_tag(depth, t, 2));
            if (cb.depth() != depth || cbeta.depth() != depth)
                throw ConfigError("symbol file depth differs from --L");
            const GridFunction b = function_from_sequence(grid, cb);
            const GridFunction beta = function_from_sequence(grid, cbeta);
            rep = nine_case_verify(grid, b, beta, opts).at(cfg.case_id);
        } else {
            throw ConfigError("unknown case '" + cfg.case_id + "'");
        }

        rep.trial = t;
        rep.ensemble = cfg.ensemble;
        reports.push_back(std::move(rep));
    }
    return reports;
}

inline int write_out(const RunConfig& cfg, RunResult& res) {
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write to '" + cfg.out_path + "'");
        out << res.output;
    }
    return res.exit_code;
}

}  // namespace detail

inline RunResult run_verify(const RunConfig& cfg) {
    RunResult res;
    try {
        validate(cfg);
        auto reports = detail::run_case_at_depth(cfg, cfg.L);
        res.output = detail::emit(cfg, reports);
        for (const auto& r : reports)
            if (!r.pass) res.exit_code = 1;
        detail::write_out(cfg, res);
    } catch (const std::exception& e) {
        res.exit_code = 2;
        res.output = std::string("error: ") + e.what() + "\n";
    }
    return res;
}

inline RunResult run_two_weight(const RunConfig& cfg) {
    RunResult res;
    try {
        validate(cfg);
        const TruncatedGrid grid = make_grid(cfg.L);
        const EnsembleKind kind = parse_ensemble(cfg.ensemble);
        const int trials = kind == EnsembleKind::file ? 1 : cfg.trials;
        std::vector<VerificationReport> reports;
        for (int t = 0; t < trials; ++t) {
            VerifyOptions opts;
            opts.seed = derive_seed(cfg.seed, detail::stream_tag(cfg.L, t, 0));
            opts.mc_trials = cfg.mc_trials;
            CoefSequence cb = kind == EnsembleKind::file
                                  ? read_symbol_file(cfg.symbols_path)
                                  : detail::sequence_for_trial(cfg, cfg.L, detail::stream_tag(cfg.L, t, 1));
            CoefSequence cbeta =
                kind == EnsembleKind::file
                    ? (cfg.symbols_beta_path.empty() ? throw ConfigError("two-weight needs --symbols-beta with the file ensemble")
                                                     : read_symbol_file(cfg.symbols_beta_path))
                    : detail::sequence_for_trial(cfg, cfg.L, detail::stream_tag(cfg.L, t, 2));
            if (cb.depth() != cfg.L || cbeta.depth() != cfg.L)
                throw ConfigError("symbol file depth differs from --L");
            VerificationReport rep = two_weight_verify(grid, function_from_sequence(grid, cb),
                                                       function_from_sequence(grid, cbeta), opts);
            rep.trial = t;
            rep.ensemble = cfg.ensemble;
            reports.push_back(std::move(rep));
        }
        res.output = detail::emit(cfg, reports);
        for (const auto& r : reports)
            if (!r.pass) res.exit_code = 1;
        detail::write_out(cfg, res);
    } catch (const std::exception& e) {
        res.exit_code = 2;
        res.output = std::string("error: ") + e.what() + "\n";
    }
    return res;
}

inline RunResult run_sweep(const RunConfig& cfg) {
    RunResult res;
    try {
        validate(cfg);
        if (parse_ensemble(cfg.ensemble) == EnsembleKind::file)
            throw ConfigError("sweep does not take the file ensemble");
        const int hi = cfg.L_max >= 0 ? cfg.L_max : cfg.L;
        std::string out = csv_header();
        for (int depth = cfg.L; depth <= hi; ++depth) {
            auto reports = detail::run_case_at_depth(cfg, depth);
            for (const auto& r : reports) {
                out += csv_row(r);
                if (!r.pass) res.exit_code = 1;
            }
        }
        res.output = std::move(out);
        detail::write_out(cfg, res);
    } catch (const std::exception& e) {
        res.exit_code = 2;
        res.output = std::string("error: ") + e.what() + "\n";
    }
    return res;
}

inline RunResult run_gen_symbols(const RunConfig& cfg) {
    RunResult res;
    try {
        validate(cfg);
        if (parse_ensemble(cfg.ensemble) == EnsembleKind::file)
            throw ConfigError("gen-symbols draws an ensemble; choose gaussian, sparse or chain");
        if (cfg.out_path.empty()) throw ConfigError("gen-symbols requires --out");
        SplitMix64 rng(derive_seed(cfg.seed, detail::stream_tag(cfg.L, 0, 1)));
        const CoefSequence seq = draw_sequence(cfg.L, parse_ensemble(cfg.ensemble), cfg.density, rng);
        res.output = serialize_symbols(seq);
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write to '" + cfg.out_path + "'");
        out << res.output;
    } catch (const std::exception& e) {
        res.exit_code = 2;
        res.output = std::string("error: ") + e.what() + "\n";
    }
    return res;
}

}  // namespace parahaar
