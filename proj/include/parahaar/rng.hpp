// splitmix64-based deterministic RNG with per-task seed derivation, so runs
// are reproducible at any parallelism level and across platforms (no
// std::distribution involvement).
#pragma once

#include <cmath>
#include <cstdint>

namespace parahaar {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return (next() >> 11) * 0x1.0p-53; }

    int next_sign() { return (next() >> 63) ? +1 : -1; }

    // Box-Muller, pair cached
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stable child-stream seed: mixes the master seed with a stream tag so that
// task k's stream never depends on how many draws other tasks made.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    return g.next();
}

}  // namespace parahaar
