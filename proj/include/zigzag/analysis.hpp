#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "zigzag/bitstream.hpp"
#include "zigzag/maps.hpp"

namespace zigzag::analysis {

/// Piecewise-constant probability density on uniform bins over [lo, hi].
struct DensityHistogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> density;  ///< one value per bin

    static DensityHistogram uniform(double lo, double hi, int n_bins);

    int n_bins() const { return static_cast<int>(density.size()); }
    double bin_width() const { return (hi - lo) / static_cast<double>(density.size()); }
    double bin_center(int i) const { return lo + (i + 0.5) * bin_width(); }

    /// Integral of the density over the whole support (1 when normalized).
    double integral() const;
    /// Exact integral over [a, b], partial bins included.
    double integrate(double a, double b) const;
    bool is_normalized(double eps = 1e-9) const;

    nlohmann::json to_json() const;
};

/// Normalized histogram of an orbit over [lo, hi]; the first 100 samples are
/// excluded as warm-up. Requires orbit length >= 10 * n_bins.
DensityHistogram empirical_density(std::span<const double> orbit, int n_bins, double lo, double hi);

/// The piecewise-constant stationary-density approximation of the non-ideal
/// map: values (f0, f1, f2, f_u) on regions split at |delta_o|, 2|delta_o|,
/// 4|delta_o|. Integrates to exactly 1 by construction.
struct FourStepDensity {
    double delta_o;
    double f0, f1, f2, f_u;
    std::array<double, 5> region_edges;  ///< 0, |do|, 2|do|, 4|do|, 1

    double value(double x) const;
    double integral() const;
};

/// Requires 0 < |delta_o| <= 1/16. delta_o > 0: steps (0, fu/2, 3fu/4, fu)
/// with fu = 1/(1-2 delta_o); delta_o < 0: steps (2fu, 3fu/2, 5fu/4, fu) with
/// fu = 1/(1+2|delta_o|) fixed by unit normalization.
FourStepDensity four_step_model(double delta_o);

/// Stationary density via the Ulam discretization of the transfer operator:
/// the mass of each cell is redistributed to the cells overlapping its affine
/// image proportionally to overlap length (folded at the lower boundary for
/// magnitude maps), then power-iterated until the L1 successive difference
/// drops below tol. Requires an expanding map (all |slopes| > 1), n_bins >= 64.
DensityHistogram fp_fixed_point(const maps::PiecewiseAffineMap& map, int n_bins = 512,
                                double tol = 1e-10);

/// Two-state chain of the generated bits: p = P(0|0), q = P(1|1), with the
/// derived bias, second eigenvalue lambda1 = |p+q-1| and correlation exponent
/// c = -log2(lambda1) (+infinity when lambda1 = 0).
struct MarkovModel {
    double p;
    double q;
    double b;        ///< exact stationary bias
    double lambda1;
    double c;

    nlohmann::json to_json() const;
};

/// Fills the derived fields; requires 0 < p, q < 1.
MarkovModel make_markov(double p, double q);

/// Exact stationary bias |1/2 - P(0)| = |p-q| / (2 (2-p-q)).
double bias_exact(double p, double q);
/// The paper-form value |p-q| / (2-p-q) (omits the factor 2); kept for
/// comparison reporting.
double bias_paper_form(double p, double q);
/// Alias for bias_exact on a model.
double bias_of(const MarkovModel& model);

/// p, q by numeric integration of a stationary density over (0,x_t1), x_b,
/// x_t2 boundaries. The density must be normalized over the map domain.
MarkovModel transition_probs_numeric(const maps::PiecewiseAffineMap& map,
                                     const maps::NonIdealParams& params,
                                     const DensityHistogram& density);

/// First-order closed form: p = 1/2 + (3/2) dg1 + 2 dg2, q = 1/2 - dg2/2.
/// Requires |dg1|, |dg2| <= 1/16.
MarkovModel transition_probs_analytic(double dg1, double dg2);

/// Empirical transition probabilities counted from a bit stream.
MarkovModel markov_from_bits(const dynamics::BitStream& bits);

/// Model for post-processing sizing: transition probabilities from the
/// stream, with lambda1 widened to the measured effective decay base
/// max_k |r_k|^{1/k} over statistically significant lags. Multi-stage
/// pipelines carry slowly decaying same-stage correlations (period = stage
/// count) that plain lag-1 transition counts miss entirely.
MarkovModel effective_markov(const dynamics::BitStream& bits, int max_lag = 16);

/// Two-state Markov chain sampler (initial state from the stationary
/// distribution); the generative counterpart of MarkovModel.
dynamics::BitStream simulate_markov_bits(double p, double q, std::size_t n, std::uint64_t seed);

/// Sample Pearson autocorrelation of the +-1-mapped bits at lags 1..max_lag.
/// Requires length >= 100 * max_lag and a non-constant stream.
std::vector<double> autocorrelation(const dynamics::BitStream& bits, int max_lag);

struct BifurcationPoint {
    double m;
    double x;
    bool stable;  ///< false marks an escaped (unstable) orbit
};

/// Steady states of the generalized zigzag over an m-grid: per grid point,
/// iterate from x0, drop n_transient, keep n_keep states. Escapes are marked
/// unstable rather than fatal; grid points with |m| < 1e-9 are skipped.
std::vector<BifurcationPoint> bifurcation_diagram(double m_lo, double m_hi, int n_m,
                                                  int n_transient, int n_keep, double x0 = 1e-9,
                                                  std::uint64_t seed = 0, double noise_std = 0.0);

}  // namespace zigzag::analysis
