#include "zigzag/maps.hpp"

#include <algorithm>
#include <cmath>

namespace zigzag::maps {

std::string to_string(MapKind kind) {
    switch (kind) {
        case MapKind::Zigzag: return "zigzag";
        case MapKind::Tent: return "tent";
        case MapKind::Bernoulli: return "bernoulli";
        case MapKind::NonIdealSymmetric: return "nonideal_symmetric";
        case MapKind::Custom: return "custom";
    }
    return "custom";
}

MapKind map_kind_from_string(const std::string& name) {
    if (name == "zigzag") return MapKind::Zigzag;
    if (name == "tent") return MapKind::Tent;
    if (name == "bernoulli") return MapKind::Bernoulli;
    if (name == "nonideal_symmetric" || name == "nonideal") return MapKind::NonIdealSymmetric;
    if (name == "custom") return MapKind::Custom;
    throw std::invalid_argument("unknown map kind: " + name);
}

PiecewiseAffineMap::PiecewiseAffineMap(MapKind kind, double lo, double hi,
                                       std::vector<Segment> segments, double guard_fraction)
    : kind_(kind), lo_(lo), hi_(hi), segments_(std::move(segments)) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("invalid map domain");
    if (segments_.empty()) throw std::invalid_argument("map needs at least one segment");
    if (!(guard_fraction >= 0.0)) throw std::invalid_argument("negative guard fraction");
    guard_ = guard_fraction * (hi - lo);
    if (segments_.front().lower_x != lo_ || segments_.back().upper_x != hi_)
        throw std::invalid_argument("segments must cover the domain exactly");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (!(s.lower_x < s.upper_x)) throw std::invalid_argument("empty or reversed segment");
        if (!std::isfinite(s.slope) || s.slope == 0.0)
            throw std::invalid_argument("segment slope must be finite and nonzero");
        if (i + 1 < segments_.size() && segments_[i + 1].lower_x != s.upper_x)
            throw std::invalid_argument("segments must be contiguous");
    }
}

double PiecewiseAffineMap::eval(double x) const {
    if (x < lo_ - guard_ || x > hi_ + guard_) throw OutOfDomainError(x, lo_, hi_, guard_);
    double xx = x;
    if (reflects_at_zero() && xx < lo_) xx = 2.0 * lo_ - xx;  // even extension

    const Segment* seg = &segments_.back();
    if (xx <= segments_.front().upper_x) {
        seg = &segments_.front();
    } else {
        for (const Segment& s : segments_) {
            if (xx <= s.upper_x) {
                seg = &s;
                break;
            }
        }
    }
    double y = seg->apply(xx);
    if (reflects_at_zero() && y < lo_) y = 2.0 * lo_ - y;
    return y;
}

nlohmann::json PiecewiseAffineMap::to_json() const {
    nlohmann::json segs = nlohmann::json::array();
    for (const Segment& s : segments_) segs.push_back({s.lower_x, s.upper_x, s.slope, s.intercept});
    return {{"kind", to_string(kind_)}, {"domain", {lo_, hi_}}, {"segments", segs}};
}

PiecewiseAffineMap PiecewiseAffineMap::from_json(const nlohmann::json& j) {
    const MapKind kind = map_kind_from_string(j.at("kind").get<std::string>());
    const auto domain = j.at("domain");
    std::vector<Segment> segs;
    for (const auto& row : j.at("segments"))
        segs.push_back({row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>(),
                        row.at(3).get<double>()});
    return PiecewiseAffineMap(kind, domain.at(0).get<double>(), domain.at(1).get<double>(),
                              std::move(segs));
}

PiecewiseAffineMap make_generalized_zigzag(double m) {
    if (!(m > -3.0 && m < 3.0) || m == 0.0)
        throw std::invalid_argument("bifurcation parameter m must lie in (-3,3) and be nonzero");
    const double br = 1.0 / std::abs(m);
    const double sgn = m > 0 ? 1.0 : -1.0;
    const MapKind kind = (m == -2.0) ? MapKind::Zigzag : MapKind::Custom;
    std::vector<Segment> segs;
    if (br < 1.0) {
        segs.push_back({-1.0, -br, -m, -2.0 * sgn});
        segs.push_back({-br, br, m, 0.0});
        segs.push_back({br, 1.0, -m, 2.0 * sgn});
    } else {
        // |m| <= 1: the breakpoints leave the domain and only the linear
        // branch remains.
        segs.push_back({-1.0, 1.0, m, 0.0});
    }
    return PiecewiseAffineMap(kind, -1.0, 1.0, std::move(segs));
}

PiecewiseAffineMap make_zigzag() { return make_generalized_zigzag(-2.0); }

PiecewiseAffineMap make_tent() {
    return PiecewiseAffineMap(MapKind::Tent, 0.0, 1.0,
                              {{0.0, 0.5, 2.0, 0.0}, {0.5, 1.0, -2.0, 2.0}});
}

PiecewiseAffineMap make_bernoulli() {
    return PiecewiseAffineMap(MapKind::Bernoulli, -1.0, 1.0,
                              {{-1.0, 0.0, 2.0, 1.0}, {0.0, 1.0, 2.0, -1.0}});
}

NonIdealMap make_nonideal(double dg1, double dg2) {
    if (!(std::abs(dg1) < 0.25) || !(std::abs(dg2) < 0.25))
        throw std::invalid_argument("slope deltas must satisfy |dg| < 0.25");
    const double x_b = 1.0 / (2.0 * (1.0 + dg1));
    const double rising = 2.0 * (1.0 + dg1);
    const double falling = -2.0 * (1.0 + dg2);
    NonIdealParams params{dg1,
                          dg2,
                          x_b,
                          -(dg1 + dg2),
                          x_b / (2.0 * (1.0 + dg1)),
                          x_b + (1.0 - x_b) / (2.0 * (1.0 + dg2))};
    PiecewiseAffineMap map(MapKind::NonIdealSymmetric, 0.0, 1.0,
                           {{0.0, x_b, rising, 0.0}, {x_b, 1.0, falling, 1.0 - falling * x_b}});
    return {std::move(map), params};
}

int extract_bit(const PiecewiseAffineMap& map, double x) {
    switch (map.kind()) {
        case MapKind::Zigzag:
        case MapKind::Custom:
            return std::abs(x) < 0.5 ? 0 : 1;
        case MapKind::Tent:
        case MapKind::Bernoulli:
            return x < 0.5 * (map.lo() + map.hi()) ? 0 : 1;
        case MapKind::NonIdealSymmetric:
            return x < map.segments().front().upper_x ? 0 : 1;
    }
    return 0;
}

}  // namespace zigzag::maps
