#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "zigzag/common.hpp"

namespace zigzag::maps {

enum class MapKind { Zigzag, Tent, Bernoulli, NonIdealSymmetric, Custom };

std::string to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& name);

/// One affine piece of a map. Segments own their upper endpoint: a point x
/// belongs to the segment with lower_x < x <= upper_x.
struct Segment {
    double lower_x;
    double upper_x;
    double slope;
    double intercept;

    double apply(double x) const { return slope * x + intercept; }
    bool operator==(const Segment&) const = default;
};

/// A chaotic map as ordered affine segments over an interval. Immutable after
/// construction; eval is pure and safe to share across threads.
class PiecewiseAffineMap {
public:
    /// guard_fraction sets the extrapolation band outside the domain as a
    /// fraction of the domain width.
    PiecewiseAffineMap(MapKind kind, double lo, double hi, std::vector<Segment> segments,
                       double guard_fraction = 0.1);

    /// Applies the segment containing x. Inside the guard band but outside the
    /// domain, the nearest boundary segment's affine rule is extrapolated;
    /// beyond the guard band, OutOfDomainError. NonIdealSymmetric maps model
    /// the magnitude of an odd-symmetric map and reflect at the lower
    /// boundary: inputs below lo use the even extension, outputs below lo fold
    /// back to lo + (lo - y).
    double eval(double x) const;

    MapKind kind() const { return kind_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double guard_band() const { return guard_; }
    std::span<const Segment> segments() const { return segments_; }

    /// True for map kinds whose state is a magnitude (NonIdealSymmetric).
    bool reflects_at_zero() const { return kind_ == MapKind::NonIdealSymmetric; }

    nlohmann::json to_json() const;
    static PiecewiseAffineMap from_json(const nlohmann::json& j);

private:
    MapKind kind_;
    double lo_, hi_, guard_;
    std::vector<Segment> segments_;
};

/// Slope deltas of the non-ideal symmetric map plus derived geometry.
struct NonIdealParams {
    double dg1;      ///< rising-slope relative deviation
    double dg2;      ///< falling-slope relative deviation
    double x_b;      ///< breakpoint abscissa, 1/(2(1+dg1)) exactly
    double delta_o;  ///< end-point ordinate deviation, -(dg1+dg2)
    double x_t1;     ///< rising-branch point with ordinate x_b
    double x_t2;     ///< falling-branch point with ordinate x_b
};

struct NonIdealMap {
    PiecewiseAffineMap map;
    NonIdealParams params;
};

/// Generalized zigzag on (-1, 1], breakpoints at +-1/|m|. m = -2 is the
/// zigzag map proper. Rejects m outside (-3, 3) and m == 0.
PiecewiseAffineMap make_generalized_zigzag(double m);

/// Zigzag map, i.e. make_generalized_zigzag(-2).
PiecewiseAffineMap make_zigzag();

/// Tent map on (0, 1): 2x then 2(1-x).
PiecewiseAffineMap make_tent();

/// Bernoulli shift on (-1, 1): 2x+1 below 0, 2x-1 above.
PiecewiseAffineMap make_bernoulli();

/// Non-ideal symmetric (tent-form) map with branch gains 2(1+dg1), -2(1+dg2).
/// Rejects |dg1| >= 0.25 or |dg2| >= 0.25.
NonIdealMap make_nonideal(double dg1, double dg2);

/// Threshold comparison per map kind: zigzag/custom use |x| < 1/2, tent and
/// Bernoulli the domain midpoint, non-ideal maps their exact x_b.
int extract_bit(const PiecewiseAffineMap& map, double x);

}  // namespace zigzag::maps
