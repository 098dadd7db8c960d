// Symbol ensembles for randomized testing.  Chain towers stress the
// Carleson-type suprema (extremal mass on nested intervals); sparse draws
// probe pairings of coefficients far apart in scale.
#pragma once

#include "parahaar/dyadic.hpp"
#include "parahaar/rng.hpp"
#include "parahaar/symbols.hpp"

#include <stdexcept>
#include <string>

namespace parahaar {

enum class EnsembleKind { gaussian, sparse, chain, file };

inline EnsembleKind parse_ensemble(const std::string& name) {
    if (name == "gaussian") return EnsembleKind::gaussian;
    if (name == "sparse") return EnsembleKind::sparse;
    if (name == "chain") return EnsembleKind::chain;
    if (name == "file") return EnsembleKind::file;
    throw std::invalid_argument("unknown ensemble '" + name + "'");
}

inline const char* to_string(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::gaussian: return "gaussian";
        case EnsembleKind::sparse: return "sparse";
        case EnsembleKind::chain: return "chain";
        default: return "file";
    }
}

inline CoefSequence draw_sequence(int depth, EnsembleKind kind, double density, SplitMix64& rng) {
    CoefSequence out(depth);
    switch (kind) {
        case EnsembleKind::gaussian:
            for (std::int64_t i = 0; i < out.size(); ++i) out.set_index(i, rng.next_gaussian());
            break;
        case EnsembleKind::sparse:
            for (std::int64_t i = 0; i < out.size(); ++i) {
                const bool keep = rng.next_double() < density;
                const double v = rng.next_gaussian();  // drawn unconditionally: keeps streams aligned
                if (keep) out.set_index(i, v);
            }
            break;
        case EnsembleKind::chain:
            for (int k = 0; k < depth; ++k) out.set(DyadicInterval{k, 0}, rng.next_gaussian());
            break;
        case EnsembleKind::file:
            throw std::invalid_argument("draw_sequence: the file ensemble is not drawn");
    }
    return out;
}

// Mean-zero step function with the given Haar coefficients: f = sum c_I h_I.
inline GridFunction function_from_sequence(const TruncatedGrid& grid, const CoefSequence& seq) {
    if (seq.depth() != grid.depth()) throw std::invalid_argument("function_from_sequence: depth mismatch");
    GridFunction f(grid.cell_count());
    for (std::int64_t i = 0; i < seq.size(); ++i) {
        const double c = seq.at_index(i);
        if (c == 0.0) continue;
        f.values += c * haar(grid, grid.interval_at(i)).values;
    }
    return f;
}

inline GridFunction draw_mean_zero_function(const TruncatedGrid& grid, EnsembleKind kind, double density,
                                            SplitMix64& rng) {
    return function_from_sequence(grid, draw_sequence(grid.depth(), kind, density, rng));
}

}  // namespace parahaar
