#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zigzag/bitstream.hpp"
#include "zigzag/maps.hpp"

namespace zigzag::dynamics {

/// Parameters of a pipeline run. x0 = nullopt means "auto": the initial state
/// is one noise sample around the zero state (its magnitude on (0,1)-domain
/// maps, which model magnitudes).
struct SimConfig {
    double noise_std = 1e-6;
    std::uint64_t seed = 0;
    int stages = 4;
    std::size_t n_bits = 0;
    std::size_t discard = 0;
    std::optional<double> x0;

    void validate() const;
};

/// Iterates x_{k+1} = eval(map, x_k) + eta_k, eta ~ N(0, noise_std^2), from a
/// deterministic generator. Returns the n states starting with x0. Escape
/// (beyond the guard band) raises OrbitEscapeError with the escape index.
std::vector<double> iterate_orbit(const maps::PiecewiseAffineMap& map, double x0, std::size_t n,
                                  double noise_std, std::uint64_t seed);

using maps::extract_bit;

/// Runs S pipelined stages in a ring: one global state circulates, each stage
/// applying eval + independent noise; one bit per stage evaluation, emitted in
/// ascending stage order per clock (bit shuffling). The first config.discard
/// bits are dropped; the result holds config.n_bits bits.
BitStream run_pipeline(std::span<const maps::PiecewiseAffineMap> stage_maps,
                       const SimConfig& config);

/// Warm-up bits to drop while loop gain A amplifies the noise floor to
/// detectable power: ceil(log_A(pd_over_n)). Rejects A <= 1.
long warmup_discard(double A, double pd_over_n);

}  // namespace zigzag::dynamics
