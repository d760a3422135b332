#include "zigzag/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zigzag::analysis {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// DensityHistogram

DensityHistogram DensityHistogram::uniform(double lo, double hi, int n_bins) {
    if (n_bins < 1 || !(lo < hi)) throw std::invalid_argument("bad histogram support");
    DensityHistogram h;
    h.lo = lo;
    h.hi = hi;
    h.density.assign(static_cast<std::size_t>(n_bins), 1.0 / (hi - lo));
    return h;
}

double DensityHistogram::integral() const {
    double s = 0.0;
    for (double d : density) s += d;
    return s * bin_width();
}

double DensityHistogram::integrate(double a, double b) const {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (!(a < b)) return 0.0;
    const double w = bin_width();
    const int n = n_bins();
    const int i0 = std::clamp(static_cast<int>((a - lo) / w), 0, n - 1);
    const int i1 = std::clamp(static_cast<int>((b - lo) / w), 0, n - 1);
    double s = 0.0;
    for (int i = i0; i <= i1; ++i) {
        const double blo = lo + i * w;
        const double bhi = lo + (i + 1) * w;
        const double ov = std::min(b, bhi) - std::max(a, blo);
        if (ov > 0.0) s += density[static_cast<std::size_t>(i)] * ov;
    }
    return s;
}

bool DensityHistogram::is_normalized(double eps) const { return std::abs(integral() - 1.0) <= eps; }

nlohmann::json DensityHistogram::to_json() const {
    return {{"lo", lo}, {"hi", hi}, {"density", density}};
}

DensityHistogram empirical_density(std::span<const double> orbit, int n_bins, double lo,
                                   double hi) {
    if (n_bins < 1) throw std::invalid_argument("n_bins must be >= 1");
    if (orbit.size() < static_cast<std::size_t>(10 * n_bins))
        throw std::invalid_argument("orbit too short: need at least 10 bins worth of samples");
    const std::size_t skip = orbit.size() > 100 ? 100 : 0;
    DensityHistogram h;
    h.lo = lo;
    h.hi = hi;
    h.density.assign(static_cast<std::size_t>(n_bins), 0.0);
    const double w = (hi - lo) / n_bins;
    std::size_t count = 0;
    for (std::size_t k = skip; k < orbit.size(); ++k) {
        int i = static_cast<int>((orbit[k] - lo) / w);
        i = std::clamp(i, 0, n_bins - 1);  // guard-band strays go to edge bins
        h.density[static_cast<std::size_t>(i)] += 1.0;
        ++count;
    }
    for (double& d : h.density) d /= static_cast<double>(count) * w;
    return h;
}

// ---------------------------------------------------------------------------
// Four-step model

double FourStepDensity::value(double x) const {
    if (x < region_edges[1]) return f0;
    if (x < region_edges[2]) return f1;
    if (x < region_edges[3]) return f2;
    return f_u;
}

double FourStepDensity::integral() const {
    const double a = region_edges[1];
    return f0 * a + f1 * a + f2 * 2.0 * a + f_u * (1.0 - 4.0 * a);
}

FourStepDensity four_step_model(double delta_o) {
    const double a = std::abs(delta_o);
    if (!(a > 0.0) || a > 1.0 / 16.0)
        throw std::invalid_argument("four-step model requires 0 < |delta_o| <= 1/16");
    FourStepDensity d;
    d.delta_o = delta_o;
    d.region_edges = {0.0, a, 2.0 * a, 4.0 * a, 1.0};
    if (delta_o > 0.0) {
        d.f_u = 1.0 / (1.0 - 2.0 * delta_o);
        d.f0 = 0.0;
        d.f1 = d.f_u / 2.0;
        d.f2 = 3.0 * d.f_u / 4.0;
    } else {
        // unit normalization fixes f_u (the paper's first-order value 1+2*do
        // agrees to O(do))
        d.f_u = 1.0 / (1.0 + 2.0 * a);
        d.f0 = 2.0 * d.f_u;
        d.f1 = 1.5 * d.f_u;
        d.f2 = 1.25 * d.f_u;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Frobenius-Perron fixed point (Ulam)

class NonConvergenceError : public std::runtime_error {
public:
    explicit NonConvergenceError(double residual)
        : std::runtime_error("transfer operator power iteration did not converge; residual " +
                             std::to_string(residual)),
          residual(residual) {}
    double residual;
};

DensityHistogram fp_fixed_point(const maps::PiecewiseAffineMap& map, int n_bins, double tol) {
    for (const auto& s : map.segments())
        if (!(std::abs(s.slope) > 1.0))
            throw std::invalid_argument("transfer operator needs an expanding map (|slope| > 1)");
    if (n_bins < 64) throw std::invalid_argument("n_bins must be >= 64");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

    const double lo = map.lo();
    const double hi = map.hi();
    const int n = n_bins;
    const double w = (hi - lo) / n;
    const bool fold = map.reflects_at_zero();

    struct Entry {
        int cell;
        double weight;
    };
    std::vector<std::vector<Entry>> rows(static_cast<std::size_t>(n));

    auto deposit = [&](std::vector<Entry>& row, double y0, double y1, double frac_per_len) {
        // spread mass uniformly over the image interval [y0,y1] clipped to the
        // domain; frac_per_len is mass per unit image length
        y0 = std::max(y0, lo);
        y1 = std::min(y1, hi);
        if (!(y1 > y0)) return;
        int i0 = std::clamp(static_cast<int>((y0 - lo) / w), 0, n - 1);
        int i1 = std::clamp(static_cast<int>((y1 - lo) / w), 0, n - 1);
        for (int i = i0; i <= i1; ++i) {
            const double blo = lo + i * w;
            const double bhi = lo + (i + 1) * w;
            const double ov = std::min(y1, bhi) - std::max(y0, blo);
            if (ov > 0.0) row.push_back({i, frac_per_len * ov});
        }
    };

    const auto segs = map.segments();
    for (int j = 0; j < n; ++j) {
        const double a = lo + j * w;
        const double b = lo + (j + 1) * w;
        auto& row = rows[static_cast<std::size_t>(j)];
        for (const auto& s : segs) {
            const double xa = std::max(a, s.lower_x);
            const double xb = std::min(b, s.upper_x);
            if (!(xb > xa)) continue;
            double y0 = s.apply(xa);
            double y1 = s.apply(xb);
            if (y0 > y1) std::swap(y0, y1);
            const double frac = (xb - xa) / w;          // mass fraction of cell j here
            const double per_len = frac / (y1 - y0);    // uniform over the image
            if (fold && y0 < lo) {
                const double neg_hi = std::min(y1, lo);
                deposit(row, 2.0 * lo - neg_hi, 2.0 * lo - y0, per_len);  // folded part
                if (y1 > lo) deposit(row, lo, y1, per_len);
            } else {
                deposit(row, y0, y1, per_len);
            }
        }
    }

    std::vector<double> mass(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> next(static_cast<std::size_t>(n));
    double residual = kInf;
    for (int it = 0; it < 100000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            const double mj = mass[static_cast<std::size_t>(j)];
            if (mj == 0.0) continue;
            for (const Entry& e : rows[static_cast<std::size_t>(j)])
                next[static_cast<std::size_t>(e.cell)] += mj * e.weight;
        }
        double total = 0.0;
        for (double m : next) total += m;
        for (double& m : next) m /= total;
        residual = 0.0;
        for (int i = 0; i < n; ++i)
            residual += std::abs(next[static_cast<std::size_t>(i)] - mass[static_cast<std::size_t>(i)]);
        mass.swap(next);
        if (residual < tol) {
            DensityHistogram h;
            h.lo = lo;
            h.hi = hi;
            h.density.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) h.density[static_cast<std::size_t>(i)] = mass[static_cast<std::size_t>(i)] / w;
            return h;
        }
    }
    throw NonConvergenceError(residual);
}

// ---------------------------------------------------------------------------
// Markov model

MarkovModel make_markov(double p, double q) {
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
        throw std::invalid_argument("transition probabilities must lie in (0, 1)");
    MarkovModel m;
    m.p = p;
    m.q = q;
    m.b = bias_exact(p, q);
    m.lambda1 = std::abs(p + q - 1.0);
    m.c = m.lambda1 > 0.0 ? -std::log2(m.lambda1) : kInf;
    return m;
}

nlohmann::json MarkovModel::to_json() const {
    nlohmann::json j{{"p", p},
                     {"q", q},
                     {"bias", b},
                     {"bias_paper_form", bias_paper_form(p, q)},
                     {"lambda1", lambda1}};
    if (std::isinf(c))
        j["c"] = "inf";
    else
        j["c"] = c;
    return j;
}

double bias_exact(double p, double q) {
    if (p + q >= 2.0) throw std::invalid_argument("absorbing chain: p + q = 2");
    return std::abs(p - q) / (2.0 * (2.0 - p - q));
}

double bias_paper_form(double p, double q) {
    if (p + q >= 2.0) throw std::invalid_argument("absorbing chain: p + q = 2");
    return std::abs(p - q) / (2.0 - p - q);
}

double bias_of(const MarkovModel& model) { return bias_exact(model.p, model.q); }

MarkovModel transition_probs_numeric(const maps::PiecewiseAffineMap& map,
                                     const maps::NonIdealParams& params,
                                     const DensityHistogram& density) {
    if (density.lo != map.lo() || density.hi != map.hi())
        throw std::invalid_argument("density support does not match the map domain");
    if (!density.is_normalized())
        throw std::invalid_argument("density is not normalized");
    const double m0 = density.integrate(map.lo(), params.x_b);
    const double m1 = density.integrate(params.x_b, map.hi());
    const double p = density.integrate(map.lo(), params.x_t1) / m0;
    const double q = density.integrate(params.x_b, params.x_t2) / m1;
    return make_markov(p, q);
}

MarkovModel transition_probs_analytic(double dg1, double dg2) {
    if (!(std::abs(dg1) <= 1.0 / 16.0) || !(std::abs(dg2) <= 1.0 / 16.0))
        throw std::invalid_argument("first-order transition probabilities need |dg| <= 1/16");
    const double p = 0.5 + 1.5 * dg1 + 2.0 * dg2;
    const double q = 0.5 - 0.5 * dg2;
    return make_markov(p, q);
}

MarkovModel markov_from_bits(const dynamics::BitStream& bits) {
    if (bits.size() < 2) throw std::invalid_argument("need at least two bits");
    std::size_t c[2][2] = {{0, 0}, {0, 0}};
    int prev = bits[0];
    for (std::size_t i = 1; i < bits.size(); ++i) {
        const int b = bits[i];
        ++c[prev][b];
        prev = b;
    }
    const std::size_t n0 = c[0][0] + c[0][1];
    const std::size_t n1 = c[1][0] + c[1][1];
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("stream never visits one of the states");
    auto clamp01 = [](double v) { return std::clamp(v, 1e-12, 1.0 - 1e-12); };
    return make_markov(clamp01(static_cast<double>(c[0][0]) / static_cast<double>(n0)),
                       clamp01(static_cast<double>(c[1][1]) / static_cast<double>(n1)));
}

MarkovModel effective_markov(const dynamics::BitStream& bits, int max_lag) {
    MarkovModel m = markov_from_bits(bits);
    const std::size_t n = bits.size();
    const int lags = std::min<int>(max_lag, static_cast<int>(n / 100));
    if (lags < 1) return m;
    const auto r = autocorrelation(bits, lags);
    const double floor = 4.0 / std::sqrt(static_cast<double>(n));
    double lam = m.lambda1;
    for (int k = 1; k <= lags; ++k) {
        const double rk = std::abs(r[static_cast<std::size_t>(k - 1)]);
        if (rk > floor) lam = std::max(lam, std::pow(rk, 1.0 / k));
    }
    m.lambda1 = lam;
    m.c = lam > 0.0 ? -std::log2(lam) : kInf;
    return m;
}

dynamics::BitStream simulate_markov_bits(double p, double q, std::size_t n, std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
        throw std::invalid_argument("transition probabilities must lie in (0, 1)");
    if (n == 0) throw std::invalid_argument("n must be positive");
    RandomSource rng(seed);
    const double pi1 = (1.0 - p) / (2.0 - p - q);  // stationary P(1)
    int state = rng.uniform01() < pi1 ? 1 : 0;
    dynamics::BitStream out;
    out.reserve(n);
    out.push_back(state);
    for (std::size_t i = 1; i < n; ++i) {
        const double u = rng.uniform01();
        state = state == 0 ? (u < p ? 0 : 1) : (u < q ? 1 : 0);
        out.push_back(state);
    }
    out.meta = {{"source", "markov"}, {"p", p}, {"q", q}, {"seed", seed}};
    return out;
}

std::vector<double> autocorrelation(const dynamics::BitStream& bits, int max_lag) {
    if (max_lag < 1) throw std::invalid_argument("max_lag must be >= 1");
    const std::size_t n = bits.size();
    if (n < static_cast<std::size_t>(100) * static_cast<std::size_t>(max_lag))
        throw std::invalid_argument("stream too short: need length >= 100 * max_lag");
    std::vector<double> x(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = 2.0 * bits[i] - 1.0;
        mean += x[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] -= mean;
        var += x[i] * x[i];
    }
    var /= static_cast<double>(n);
    if (var == 0.0) throw std::invalid_argument("constant stream has no autocorrelation");
    std::vector<double> r(static_cast<std::size_t>(max_lag));
    for (int k = 1; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i + static_cast<std::size_t>(k) < n; ++i)
            s += x[i] * x[i + static_cast<std::size_t>(k)];
        r[static_cast<std::size_t>(k - 1)] =
            s / (static_cast<double>(n - static_cast<std::size_t>(k)) * var);
    }
    return r;
}

std::vector<BifurcationPoint> bifurcation_diagram(double m_lo, double m_hi, int n_m,
                                                  int n_transient, int n_keep, double x0,
                                                  std::uint64_t seed, double noise_std) {
    if (!(m_lo > -3.0 && m_hi < 3.0 && m_lo <= m_hi))
        throw std::invalid_argument("m range must lie inside (-3, 3)");
    if (n_transient < 500) throw std::invalid_argument("n_transient must be >= 500");
    if (n_m < 1 || n_keep < 1) throw std::invalid_argument("n_m and n_keep must be positive");

    std::vector<BifurcationPoint> out;
    out.reserve(static_cast<std::size_t>(n_m) * static_cast<std::size_t>(n_keep));
    for (int i = 0; i < n_m; ++i) {
        const double m =
            n_m == 1 ? m_lo : m_lo + (m_hi - m_lo) * static_cast<double>(i) / (n_m - 1);
        if (std::abs(m) < 1e-9) continue;  // Eq. breakpoints undefined at m = 0
        const auto map = maps::make_generalized_zigzag(m);
        RandomSource rng(seed + static_cast<std::uint64_t>(i));
        double x = x0;
        bool escaped = false;
        for (int t = 0; t < n_transient + n_keep && !escaped; ++t) {
            try {
                x = map.eval(x);
            } catch (const OutOfDomainError&) {
                out.push_back({m, x, false});
                escaped = true;
                break;
            }
            if (noise_std > 0.0) x += rng.gaussian(noise_std);
            if (t >= n_transient) out.push_back({m, x, true});
        }
    }
    return out;
}

}  // namespace zigzag::analysis
