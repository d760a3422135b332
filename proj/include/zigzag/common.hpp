#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace zigzag {

inline constexpr const char* kVersion = "0.1.0";

/// State fell outside a map's guard band.
class OutOfDomainError : public std::runtime_error {
public:
    OutOfDomainError(double x, double lo, double hi, double guard)
        : std::runtime_error("state " + std::to_string(x) + " outside guard band [" +
                             std::to_string(lo - guard) + ", " + std::to_string(hi + guard) + "]"),
          x(x), lo(lo), hi(hi), guard(guard) {}

    double x, lo, hi, guard;
};

/// An iterated orbit escaped. `step` is the index of the offending state
/// (orbit index, or clock count for a pipeline), `stage` the pipeline stage
/// (-1 for plain orbits).
class OrbitEscapeError : public std::runtime_error {
public:
    OrbitEscapeError(std::size_t step, int stage, double x)
        : std::runtime_error("orbit escaped at step " + std::to_string(step) +
                             (stage >= 0 ? " (stage " + std::to_string(stage) + ")" : "") +
                             ", state " + std::to_string(x)),
          step(step), stage(stage), x(x) {}

    std::size_t step;
    int stage;
    double x;
};

/// Deterministic noise source: mt19937_64 + Box-Muller. The transform is
/// spelled out here instead of std::normal_distribution so that a (seed,
/// parameters) pair reproduces the same stream on every standard library.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : eng_(seed) {}

    /// Uniform draw on (0, 1].
    double uniform01() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

    /// Zero-mean Gaussian draw with standard deviation sigma.
    double gaussian(double sigma) {
        if (have_spare_) {
            have_spare_ = false;
            return spare_ * sigma;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a) * sigma;
    }

    std::uint64_t next_u64() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace zigzag
