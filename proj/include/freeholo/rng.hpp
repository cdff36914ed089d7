#pragma once

#include <cstdint>
#include <random>

#include "freeholo/matcore.hpp"

namespace freeholo {

/// Seeded random stream. The engine is std::mt19937_64 (fully specified by the
/// standard); the distributions are written out here so that every draw is
/// bit-identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    std::uint64_t index(std::uint64_t lo, std::uint64_t hi) { return lo + engine_() % (hi - lo + 1); }
    double normal();
    /// Standard complex Gaussian (E|z|^2 = 1).
    Complex complex_normal();
    CMatrix gaussian(std::size_t rows, std::size_t cols);
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Per-trial seed derivation used by the property harness.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return seed ^ trial; }

/// Haar-distributed unitary of size n.
CMatrix random_unitary(std::size_t n, Rng& rng);

}  // namespace freeholo
