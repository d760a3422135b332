#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "zigzag/maps.hpp"

namespace zigzag::variability {

/// Relative device-level variations feeding the current-mirror gain factor.
/// All fields in [0, 0.2) (first-order regime).
struct DeviceVariation {
    double dW = 0.0;             ///< relative width variation
    double dL = 0.0;             ///< relative length variation
    double dVth_over_Vov = 0.0;  ///< |dVth| / (Vgs - Vth)
    double lam_dVds_term = 0.0;  ///< lambda |dVds| / (1 + lambda Vds)

    void validate() const;
};

/// Worst-case first-order mirror-ratio deviation:
/// 1 + 2|dW| + 2|dL| + 4|dVth|/Vov + 2 lambda|dVds|/(1+lambda Vds).
double mirror_gain_factor(const DeviceVariation& v);

struct StageDeltas {
    double dg1;
    double dg2;
};

/// Per-stage slope deltas drawn for one Monte-Carlo variation scenario.
struct VariationScenario {
    std::vector<StageDeltas> stages;
    double sigma_device = 0.0;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
    static VariationScenario from_json(const nlohmann::json& j);
};

/// Draws independent zero-mean Gaussian slope deltas per stage. Per-piece
/// spreads scale as (1x, 2x, 0.5x)*sigma_device; the middle piece is the
/// falling branch of the tent-form map (dg2), the two rising pieces fold into
/// dg2's partner by averaging. Draws beyond 5 sigma are resampled, as are
/// folded deltas at or beyond the 0.25 validity bound.
VariationScenario sample_slope_deltas(double sigma_device, int stages, std::uint64_t seed);

/// Non-ideal stage maps for a scenario.
std::vector<maps::PiecewiseAffineMap> scenario_maps(const VariationScenario& scenario);

}  // namespace zigzag::variability
