#include "zigzag/variability.hpp"

#include <cmath>

#include "zigzag/common.hpp"

namespace zigzag::variability {

void DeviceVariation::validate() const {
    for (double v : {dW, dL, dVth_over_Vov, lam_dVds_term})
        if (!(v >= 0.0 && v < 0.2))
            throw std::invalid_argument("device variations must lie in [0, 0.2)");
}

double mirror_gain_factor(const DeviceVariation& v) {
    v.validate();
    return 1.0 + 2.0 * v.dW + 2.0 * v.dL + 4.0 * v.dVth_over_Vov + 2.0 * v.lam_dVds_term;
}

nlohmann::json VariationScenario::to_json() const {
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : stages) st.push_back({{"dg1", s.dg1}, {"dg2", s.dg2}});
    return {{"sigma_device", sigma_device}, {"seed", seed}, {"stages", st}};
}

VariationScenario VariationScenario::from_json(const nlohmann::json& j) {
    VariationScenario sc;
    sc.sigma_device = j.at("sigma_device").get<double>();
    sc.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& row : j.at("stages"))
        sc.stages.push_back({row.at("dg1").get<double>(), row.at("dg2").get<double>()});
    return sc;
}

VariationScenario sample_slope_deltas(double sigma_device, int stages, std::uint64_t seed) {
    if (!(sigma_device >= 0.0 && sigma_device <= 0.1))
        throw std::invalid_argument("sigma_device must lie in [0, 0.1]");
    if (stages < 1) throw std::invalid_argument("stages must be >= 1");

    RandomSource rng(seed);
    auto draw = [&rng](double sigma) {
        if (sigma == 0.0) return 0.0;
        double d;
        do {
            d = rng.gaussian(sigma);
        } while (std::abs(d) >= 5.0 * sigma);
        return d;
    };

    VariationScenario sc;
    sc.sigma_device = sigma_device;
    sc.seed = seed;
    sc.stages.reserve(static_cast<std::size_t>(stages));
    for (int s = 0; s < stages; ++s) {
        double dg1, dg2;
        do {
            // measured per-piece spreads: 1x, 2x, 0.5x of sigma_device; the
            // two rising pieces average into the tent-form rising slope
            const double d_first = draw(1.0 * sigma_device);
            const double d_third = draw(0.5 * sigma_device);
            dg1 = 0.5 * (d_first + d_third);
            dg2 = draw(2.0 * sigma_device);
        } while (std::abs(dg1) >= 0.25 || std::abs(dg2) >= 0.25);
        sc.stages.push_back({dg1, dg2});
    }
    return sc;
}

std::vector<maps::PiecewiseAffineMap> scenario_maps(const VariationScenario& scenario) {
    std::vector<maps::PiecewiseAffineMap> out;
    out.reserve(scenario.stages.size());
    for (const auto& s : scenario.stages) out.push_back(maps::make_nonideal(s.dg1, s.dg2).map);
    return out;
}

}  // namespace zigzag::variability
