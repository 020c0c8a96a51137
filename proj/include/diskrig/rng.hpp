#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace diskrig {

/// Seeded random source used by every generator.
///
/// mt19937_64 output is fully specified by the standard, and the uniform
/// mappings below avoid std::uniform_*_distribution (whose results are
/// implementation-defined), so identical seeds give identical packings on
/// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform in {0, ..., bound-1}, bound >= 1, without modulo bias.
    int index(int bound) {
        const auto span = static_cast<std::uint64_t>(bound);
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<int>(x % span);
    }

    /// Fair coin as +1 / -1.
    int sign() { return (engine_() & 1u) ? 1 : -1; }

private:
    std::mt19937_64 engine_;
};

}  // namespace diskrig
