#ifndef QCLAB_RNG_HPP
#define QCLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "qclab/energy.hpp"

namespace qclab {

/// Seeded 64-bit generator with platform-independent uniform draws.
///
/// std::uniform_real_distribution is implementation-defined, so uniform
/// doubles are built directly from the top 53 bits of mt19937_64 output.
/// Every stream is therefore reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform on the unit circle.
    Vec2 unit_vector() {
        const double theta = 2.0 * std::numbers::pi * uniform();
        return {std::cos(theta), std::sin(theta)};
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace qclab

#endif  // QCLAB_RNG_HPP
