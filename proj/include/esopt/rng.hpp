#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace esopt {

/// Source of uniform draws in [0, 1). Virtual so tests can script exact
/// values where an update rule is checked against hand arithmetic.
class DrawSource {
public:
    virtual ~DrawSource() = default;

    /// Next uniform draw in [0, 1).
    virtual double uniform() = 0;

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

/// Deterministic generator behind all stochastic operations. One instance
/// per optimizer run; replaying a 64-bit seed replays the exact sequence.
class Rng final : public DrawSource {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() override {
        // 53-bit mantissa in [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

/// Standard normal via Box-Muller; consumes exactly two uniforms per call
/// so the draw stream stays easy to reason about when replaying seeds.
inline double standard_normal(DrawSource& rng) {
    const double u1 = 1.0 - rng.uniform(); // (0, 1], keeps log() finite
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace esopt
