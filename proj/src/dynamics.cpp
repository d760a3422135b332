#include "zigzag/dynamics.hpp"

#include <cmath>

namespace zigzag::dynamics {

void SimConfig::validate() const {
    if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");
    if (n_bits == 0) throw std::invalid_argument("n_bits must be positive");
    if (discard > 1000000) throw std::invalid_argument("discard exceeds sanity bound 10^6");
}

std::vector<double> iterate_orbit(const maps::PiecewiseAffineMap& map, double x0, std::size_t n,
                                  double noise_std, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("orbit length must be >= 1");
    if (x0 < map.lo() || x0 > map.hi()) throw std::invalid_argument("x0 outside map domain");
    std::vector<double> orbit;
    orbit.reserve(n);
    orbit.push_back(x0);
    RandomSource rng(seed);
    double x = x0;
    for (std::size_t k = 1; k < n; ++k) {
        double y;
        try {
            y = map.eval(x);
        } catch (const OutOfDomainError&) {
            throw OrbitEscapeError(k - 1, -1, x);
        }
        if (noise_std > 0.0) y += rng.gaussian(noise_std);
        x = y;
        orbit.push_back(x);
    }
    return orbit;
}

BitStream run_pipeline(std::span<const maps::PiecewiseAffineMap> stage_maps,
                       const SimConfig& config) {
    config.validate();
    if (stage_maps.empty()) throw std::invalid_argument("pipeline needs at least one stage");
    if (static_cast<int>(stage_maps.size()) != config.stages)
        throw std::invalid_argument("stage map count does not match config.stages");
    const double lo = stage_maps.front().lo();
    const double hi = stage_maps.front().hi();
    for (const auto& m : stage_maps)
        if (m.lo() != lo || m.hi() != hi)
            throw std::invalid_argument("stage maps must share a domain");

    RandomSource rng(config.seed);
    double x;
    if (config.x0) {
        x = *config.x0;
        if (x < lo || x > hi) throw std::invalid_argument("x0 outside map domain");
    } else {
        // auto: the noise floor sets the initial state around zero; on (0,1)
        // domains the state is a magnitude.
        const double eta = config.noise_std > 0.0 ? rng.gaussian(config.noise_std) : 0.0;
        x = lo == 0.0 ? std::abs(eta) : eta;
    }

    const std::size_t total = config.discard + config.n_bits;
    BitStream out;
    out.reserve(config.n_bits);
    std::size_t produced = 0;
    std::size_t clock = 0;
    while (produced < total) {
        for (int s = 0; s < config.stages && produced < total; ++s) {
            const int bit = maps::extract_bit(stage_maps[s], x);
            if (produced >= config.discard) out.push_back(bit);
            ++produced;
            if (produced == total) break;
            double y;
            try {
                y = stage_maps[s].eval(x);
            } catch (const OutOfDomainError&) {
                throw OrbitEscapeError(clock, s, x);
            }
            if (config.noise_std > 0.0) y += rng.gaussian(config.noise_std);
            x = y;
        }
        ++clock;
    }

    out.meta = {{"map_kind", maps::to_string(stage_maps.front().kind())},
                {"stages", config.stages},
                {"seed", config.seed},
                {"noise_std", config.noise_std},
                {"discard", config.discard},
                {"n_bits", config.n_bits}};
    if (config.x0)
        out.meta["x0"] = *config.x0;
    else
        out.meta["x0"] = "auto";
    return out;
}

long warmup_discard(double A, double pd_over_n) {
    if (!(A > 1.0)) throw std::invalid_argument("open-loop gain A must exceed 1");
    if (!(pd_over_n > 1.0)) throw std::invalid_argument("detect-to-noise ratio must exceed 1");
    // tolerance keeps exact powers (e.g. log_16(16^20)) from rounding up
    return static_cast<long>(std::ceil(std::log(pd_over_n) / std::log(A) - 1e-9));
}

}  // namespace zigzag::dynamics
