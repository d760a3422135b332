#include "zigzag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <future>
#include <mutex>
#include <sstream>

#include <fftw3.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_gamma.h>

namespace zigzag::stats {

namespace {

std::once_flag gsl_handler_flag;

/// Regularized upper incomplete gamma Q(a, x); tail values that under/overflow
/// GSL's evaluation collapse to the appropriate limit.
double igamc(double a, double x) {
    std::call_once(gsl_handler_flag, [] { gsl_set_error_handler_off(); });
    gsl_sf_result r;
    const int status = gsl_sf_gamma_inc_Q_e(a, x, &r);
    if (status != GSL_SUCCESS) return x > a ? 0.0 : 1.0;
    return r.val;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

SubTestResult skip(std::string name, std::string why) {
    SubTestResult r;
    r.name = std::move(name);
    r.skipped = true;
    r.note = std::move(why);
    return r;
}

std::mutex fftw_plan_mutex;  // plan creation is not thread-safe

}  // namespace

bool SubTestResult::passed(const BatteryConfig& cfg) const {
    if (skipped) return false;
    if (pass_fraction >= 0.0) return pass_fraction >= cfg.template_pass_threshold;
    for (double p : p_values)
        if (p < cfg.alpha) return false;
    return !p_values.empty();
}

BiasEstimate bias_estimate(const dynamics::BitStream& bits) {
    if (bits.size() < 10000) throw std::invalid_argument("bias estimate needs >= 10^4 bits");
    const double f = std::abs(bits.ones_fraction() - 0.5);
    return {f, 100.0 * f};
}

namespace tests {

SubTestResult frequency(Bits e) {
    if (e.size() < 100) return skip("Frequency", "insufficient data");
    double sum = 0.0;
    for (auto b : e) sum += 2.0 * b - 1.0;
    const double s_obs = std::abs(sum) / std::sqrt(static_cast<double>(e.size()));
    SubTestResult r;
    r.name = "Frequency";
    r.p_values = {std::erfc(s_obs / std::sqrt(2.0))};
    return r;
}

SubTestResult block_frequency(Bits e, int M) {
    const std::size_t n = e.size();
    if (n < static_cast<std::size_t>(M)) return skip("Block frequency", "insufficient data");
    const std::size_t N = n / static_cast<std::size_t>(M);
    double chi2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double ones = 0.0;
        for (int j = 0; j < M; ++j) ones += e[i * static_cast<std::size_t>(M) + static_cast<std::size_t>(j)];
        const double pi = ones / M;
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * M;
    SubTestResult r;
    r.name = "Block frequency";
    r.p_values = {igamc(static_cast<double>(N) / 2.0, chi2 / 2.0)};
    return r;
}

SubTestResult cumulative_sums(Bits e) {
    const std::size_t n = e.size();
    if (n < 100) return skip("Cumulative sums", "insufficient data");
    SubTestResult r;
    r.name = "Cumulative sums";
    for (int mode = 0; mode < 2; ++mode) {
        long sum = 0;
        long z = 0;
        if (mode == 0) {
            for (std::size_t i = 0; i < n; ++i) {
                sum += 2 * static_cast<long>(e[i]) - 1;
                z = std::max(z, std::labs(sum));
            }
        } else {
            for (std::size_t i = n; i-- > 0;) {
                sum += 2 * static_cast<long>(e[i]) - 1;
                z = std::max(z, std::labs(sum));
            }
        }
        const double sqn = std::sqrt(static_cast<double>(n));
        const long ni = static_cast<long>(n);
        double sum1 = 0.0;
        for (long k = (-ni / z + 1) / 4; k <= (ni / z - 1) / 4; ++k)
            sum1 += normal_cdf((4 * k + 1) * z / sqn) - normal_cdf((4 * k - 1) * z / sqn);
        double sum2 = 0.0;
        for (long k = (-ni / z - 3) / 4; k <= (ni / z - 1) / 4; ++k)
            sum2 += normal_cdf((4 * k + 3) * z / sqn) - normal_cdf((4 * k + 1) * z / sqn);
        r.p_values.push_back(1.0 - sum1 + sum2);
    }
    return r;
}

SubTestResult runs(Bits e) {
    const std::size_t n = e.size();
    if (n < 100) return skip("Runs", "insufficient data");
    double ones = 0.0;
    for (auto b : e) ones += b;
    const double pi = ones / static_cast<double>(n);
    SubTestResult r;
    r.name = "Runs";
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(static_cast<double>(n))) {
        // frequency pre-test failed; the sequence is non-random already
        r.p_values = {0.0};
        r.note = "monobit pre-test failed";
        return r;
    }
    double v_obs = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) v_obs += e[i] != e[i + 1] ? 1.0 : 0.0;
    const double prod = pi * (1.0 - pi);
    const double arg =
        std::abs(v_obs - 2.0 * static_cast<double>(n) * prod) /
        (2.0 * std::sqrt(2.0 * static_cast<double>(n)) * prod);
    r.p_values = {std::erfc(arg)};
    return r;
}

SubTestResult longest_run(Bits e) {
    const std::size_t n = e.size();
    int M, K;
    std::vector<double> pi;
    if (n >= 750000) {
        M = 10000, K = 6;
        pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    } else if (n >= 6272) {
        M = 128, K = 5;
        pi = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847};
    } else if (n >= 128) {
        M = 8, K = 3;
        pi = {0.21484375, 0.3671875, 0.23046875, 0.1875};
    } else {
        return skip("Longest run", "insufficient data");
    }
    const std::size_t N = n / static_cast<std::size_t>(M);
    std::vector<double> nu(static_cast<std::size_t>(K + 1), 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        int run = 0, vmax = 0;
        for (int j = 0; j < M; ++j) {
            if (e[i * static_cast<std::size_t>(M) + static_cast<std::size_t>(j)]) {
                ++run;
                vmax = std::max(vmax, run);
            } else {
                run = 0;
            }
        }
        int cls;
        if (M == 8)
            cls = std::clamp(vmax - 1, 0, K);
        else if (M == 128)
            cls = std::clamp(vmax - 4, 0, K);
        else
            cls = std::clamp(vmax - 10, 0, K);
        nu[static_cast<std::size_t>(cls)] += 1.0;
    }
    double chi2 = 0.0;
    for (int i = 0; i <= K; ++i) {
        const double expect = static_cast<double>(N) * pi[static_cast<std::size_t>(i)];
        chi2 += (nu[static_cast<std::size_t>(i)] - expect) * (nu[static_cast<std::size_t>(i)] - expect) / expect;
    }
    SubTestResult r;
    r.name = "Longest run";
    r.p_values = {igamc(K / 2.0, chi2 / 2.0)};
    return r;
}

namespace {
int binary_rank_32(std::array<std::uint32_t, 32>& rows) {
    int rank = 0;
    for (int col = 0; col < 32 && rank < 32; ++col) {
        const std::uint32_t mask = 1u << (31 - col);
        int pivot = -1;
        for (int i = rank; i < 32; ++i)
            if (rows[static_cast<std::size_t>(i)] & mask) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(pivot)]);
        for (int i = 0; i < 32; ++i)
            if (i != rank && (rows[static_cast<std::size_t>(i)] & mask))
                rows[static_cast<std::size_t>(i)] ^= rows[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank;
}
}  // namespace

SubTestResult rank(Bits e) {
    const std::size_t N = e.size() / 1024;
    if (N < 38) return skip("Rank", "insufficient data");  // standard's minimum matrix count
    double p32 = 1.0, p31 = 1.0;
    for (int i = 0; i <= 31; ++i) {
        const double t = 1.0 - std::pow(2.0, static_cast<double>(i - 32));
        p32 *= t * t / t;
    }
    for (int i = 0; i <= 30; ++i) {
        const double a = 1.0 - std::pow(2.0, static_cast<double>(i - 32));
        const double b = 1.0 - std::pow(2.0, static_cast<double>(i - 31));
        p31 *= a * a / b;
    }
    p31 /= 2.0;
    const double p30 = 1.0 - (p32 + p31);

    std::size_t f32 = 0, f31 = 0;
    for (std::size_t k = 0; k < N; ++k) {
        std::array<std::uint32_t, 32> rows{};
        for (int i = 0; i < 32; ++i) {
            std::uint32_t row = 0;
            for (int j = 0; j < 32; ++j)
                row = (row << 1) | e[k * 1024 + static_cast<std::size_t>(i) * 32 + static_cast<std::size_t>(j)];
            rows[static_cast<std::size_t>(i)] = row;
        }
        const int rk = binary_rank_32(rows);
        if (rk == 32) ++f32;
        if (rk == 31) ++f31;
    }
    const double f30 = static_cast<double>(N - f32 - f31);
    const double Nd = static_cast<double>(N);
    const double chi2 = std::pow(static_cast<double>(f32) - Nd * p32, 2) / (Nd * p32) +
                        std::pow(static_cast<double>(f31) - Nd * p31, 2) / (Nd * p31) +
                        std::pow(f30 - Nd * p30, 2) / (Nd * p30);
    SubTestResult r;
    r.name = "Rank";
    r.p_values = {std::exp(-chi2 / 2.0)};
    return r;
}

SubTestResult dft(Bits e) {
    const std::size_t n = e.size();
    if (n < 1000) return skip("FFT", "insufficient data");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 2.0 * e[i] - 1.0;
    std::vector<double> out(2 * (n / 2 + 1));
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(),
                                              reinterpret_cast<fftw_complex*>(out.data()),
                                              FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    const double threshold = std::sqrt(2.995732273553991 * static_cast<double>(n));  // log(1/0.05)
    const std::size_t half = n / 2;
    std::size_t below = 0;
    for (std::size_t i = 0; i < half; ++i) {
        const double re = out[2 * i];
        const double im = out[2 * i + 1];
        if (std::sqrt(re * re + im * im) < threshold) ++below;
    }
    const double n0 = 0.95 * static_cast<double>(half);
    const double d = (static_cast<double>(below) - n0) /
                     std::sqrt(static_cast<double>(n) * 0.95 * 0.05 / 4.0);
    SubTestResult r;
    r.name = "FFT";
    r.p_values = {std::erfc(std::abs(d) / std::sqrt(2.0))};
    return r;
}

namespace {
/// Aperiodic binary templates of length m (no nontrivial shift overlap).
std::vector<std::uint32_t> aperiodic_templates(int m) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < (1u << m); ++v) {
        bool periodic = false;
        for (int shift = 1; shift < m && !periodic; ++shift) {
            bool match = true;
            for (int i = 0; i + shift < m; ++i) {
                const int a = (v >> (m - 1 - i)) & 1;
                const int b = (v >> (m - 1 - i - shift)) & 1;
                if (a != b) {
                    match = false;
                    break;
                }
            }
            if (match) periodic = true;
        }
        if (!periodic) out.push_back(v);
    }
    return out;
}
}  // namespace

SubTestResult non_overlapping_templates(Bits e, int m, double alpha) {
    const std::size_t n = e.size();
    if (n < 10000) return skip("Non-periodic templates", "insufficient data");
    const int N = 8;
    const std::size_t M = n / N;
    const double lambda =
        static_cast<double>(M - static_cast<std::size_t>(m) + 1) / std::pow(2.0, m);
    const double var = static_cast<double>(M) * (1.0 / std::pow(2.0, m) -
                                                 (2.0 * m - 1.0) / std::pow(2.0, 2.0 * m));
    // rolling m-bit window values per position
    std::vector<std::uint32_t> window(n - static_cast<std::size_t>(m) + 1);
    {
        std::uint32_t w = 0;
        const std::uint32_t mask = (1u << m) - 1;
        for (std::size_t i = 0; i < n; ++i) {
            w = ((w << 1) | e[i]) & mask;
            if (i + 1 >= static_cast<std::size_t>(m)) window[i + 1 - static_cast<std::size_t>(m)] = w;
        }
    }
    SubTestResult r;
    r.name = "Non-periodic templates";
    int passes = 0;
    const auto templates = aperiodic_templates(m);
    for (std::uint32_t t : templates) {
        double chi2 = 0.0;
        for (int blk = 0; blk < N; ++blk) {
            const std::size_t base = static_cast<std::size_t>(blk) * M;
            std::size_t hits = 0;
            std::size_t j = 0;
            const std::size_t limit = M - static_cast<std::size_t>(m) + 1;
            while (j < limit) {
                if (window[base + j] == t) {
                    ++hits;
                    j += static_cast<std::size_t>(m);  // non-overlapping scan
                } else {
                    ++j;
                }
            }
            chi2 += (static_cast<double>(hits) - lambda) * (static_cast<double>(hits) - lambda) / var;
        }
        const double p = igamc(N / 2.0, chi2 / 2.0);
        r.p_values.push_back(p);
        if (p >= alpha) ++passes;
    }
    r.pass_fraction = static_cast<double>(passes) / static_cast<double>(templates.size());
    return r;
}

SubTestResult overlapping_templates(Bits e, int m) {
    const std::size_t n = e.size();
    if (n < 100000) return skip("Overlapping templates", "insufficient data");
    const int M = 1032, K = 5;
    // SP 800-22 class probabilities for m = 9, M = 1032
    const double pi[6] = {0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865};
    const std::size_t N = n / static_cast<std::size_t>(M);
    std::vector<double> nu(K + 1, 0.0);
    const std::uint32_t all_ones = (1u << m) - 1;
    for (std::size_t blk = 0; blk < N; ++blk) {
        const std::size_t base = blk * static_cast<std::size_t>(M);
        std::uint32_t w = 0;
        int hits = 0;
        for (int j = 0; j < M; ++j) {
            w = ((w << 1) | e[base + static_cast<std::size_t>(j)]) & all_ones;
            if (j + 1 >= m && w == all_ones) ++hits;
        }
        nu[static_cast<std::size_t>(std::min(hits, K))] += 1.0;
    }
    double chi2 = 0.0;
    for (int i = 0; i <= K; ++i) {
        const double expect = static_cast<double>(N) * pi[i];
        chi2 += (nu[static_cast<std::size_t>(i)] - expect) * (nu[static_cast<std::size_t>(i)] - expect) / expect;
    }
    SubTestResult r;
    r.name = "Overlapping templates";
    r.p_values = {igamc(K / 2.0, chi2 / 2.0)};
    return r;
}

namespace {
/// Sum of squared cyclic m-window counts scaled per the serial statistic;
/// psi2(0) = psi2(-1) = 0.
double psi_squared(Bits e, int m) {
    if (m <= 0) return 0.0;
    const std::size_t n = e.size();
    std::vector<std::uint32_t> counts(1u << m, 0);
    const std::uint32_t mask = (1u << m) - 1;
    std::uint32_t w = 0;
    for (std::size_t i = 0; i < n + static_cast<std::size_t>(m) - 1; ++i) {
        w = ((w << 1) | e[i % n]) & mask;
        if (i + 1 >= static_cast<std::size_t>(m)) ++counts[w];
    }
    double sum = 0.0;
    for (std::uint32_t c : counts) sum += static_cast<double>(c) * static_cast<double>(c);
    return sum * std::pow(2.0, m) / static_cast<double>(n) - static_cast<double>(n);
}
}  // namespace

SubTestResult serial(Bits e, int m) {
    const std::size_t n = e.size();
    if (n < (static_cast<std::size_t>(1) << (m + 2))) return skip("Serial", "insufficient data");
    const double psim0 = psi_squared(e, m);
    const double psim1 = psi_squared(e, m - 1);
    const double psim2 = psi_squared(e, m - 2);
    const double del1 = psim0 - psim1;
    const double del2 = psim0 - 2.0 * psim1 + psim2;
    SubTestResult r;
    r.name = "Serial";
    r.p_values = {igamc(std::pow(2.0, m - 2), del1 / 2.0),
                  igamc(std::pow(2.0, m - 3), del2 / 2.0)};
    return r;
}

SubTestResult approximate_entropy(Bits e, int m) {
    const std::size_t n = e.size();
    if (n < (static_cast<std::size_t>(1) << (m + 5))) return skip("apen", "insufficient data");
    auto phi = [&](int blk) {
        if (blk == 0) return 0.0;
        std::vector<std::uint32_t> counts(1u << blk, 0);
        const std::uint32_t mask = (1u << blk) - 1;
        std::uint32_t w = 0;
        for (std::size_t i = 0; i < n + static_cast<std::size_t>(blk) - 1; ++i) {
            w = ((w << 1) | e[i % n]) & mask;
            if (i + 1 >= static_cast<std::size_t>(blk)) ++counts[w];
        }
        double sum = 0.0;
        for (std::uint32_t c : counts)
            if (c > 0)
                sum += static_cast<double>(c) *
                       std::log(static_cast<double>(c) / static_cast<double>(n));
        return sum / static_cast<double>(n);
    };
    const double apen = phi(m) - phi(m + 1);
    const double chi2 = 2.0 * static_cast<double>(n) * (std::log(2.0) - apen);
    SubTestResult r;
    r.name = "apen";
    r.p_values = {igamc(std::pow(2.0, m - 1), chi2 / 2.0)};
    return r;
}

SubTestResult linear_complexity(Bits e, int M) {
    const std::size_t n = e.size();
    const std::size_t N = n / static_cast<std::size_t>(M);
    if (N < 200) return skip("Linear complexity", "insufficient data");
    const int K = 6;
    const double pi[7] = {0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833};
    std::vector<double> nu(K + 1, 0.0);
    std::vector<std::uint8_t> B(static_cast<std::size_t>(M)), C(static_cast<std::size_t>(M)),
        T(static_cast<std::size_t>(M));
    for (std::size_t blk = 0; blk < N; ++blk) {
        const std::size_t base = blk * static_cast<std::size_t>(M);
        std::fill(B.begin(), B.end(), 0);
        std::fill(C.begin(), C.end(), 0);
        B[0] = C[0] = 1;
        int L = 0, mlast = -1;
        for (int nn = 0; nn < M; ++nn) {
            // Berlekamp-Massey discrepancy
            int d = e[base + static_cast<std::size_t>(nn)];
            for (int i = 1; i <= L; ++i)
                d ^= C[static_cast<std::size_t>(i)] & e[base + static_cast<std::size_t>(nn - i)];
            if (d == 1) {
                std::copy(C.begin(), C.end(), T.begin());
                const int shift = nn - mlast;
                for (int j = 0; j + shift < M; ++j)
                    C[static_cast<std::size_t>(j + shift)] ^= B[static_cast<std::size_t>(j)];
                if (L <= nn / 2) {
                    L = nn + 1 - L;
                    mlast = nn;
                    std::copy(T.begin(), T.end(), B.begin());
                }
            }
        }
        const double sign_mu = (M + 1) % 2 == 0 ? -1.0 : 1.0;
        const double mean = M / 2.0 + (9.0 + sign_mu) / 36.0 -
                            (M / 3.0 + 2.0 / 9.0) / std::pow(2.0, M);
        const double sign_t = M % 2 == 0 ? 1.0 : -1.0;
        const double t = sign_t * (L - mean) + 2.0 / 9.0;
        int cls;
        if (t <= -2.5)
            cls = 0;
        else if (t <= -1.5)
            cls = 1;
        else if (t <= -0.5)
            cls = 2;
        else if (t <= 0.5)
            cls = 3;
        else if (t <= 1.5)
            cls = 4;
        else if (t <= 2.5)
            cls = 5;
        else
            cls = 6;
        nu[static_cast<std::size_t>(cls)] += 1.0;
    }
    double chi2 = 0.0;
    for (int i = 0; i <= K; ++i) {
        const double expect = static_cast<double>(N) * pi[i];
        chi2 += (nu[static_cast<std::size_t>(i)] - expect) * (nu[static_cast<std::size_t>(i)] - expect) / expect;
    }
    SubTestResult r;
    r.name = "Linear complexity";
    r.p_values = {igamc(K / 2.0, chi2 / 2.0)};
    return r;
}

}  // namespace tests

TestReport run_battery(const dynamics::BitStream& bits, const BatteryConfig& cfg) {
    const std::vector<std::uint8_t> e = bits.unpack();
    const std::span<const std::uint8_t> s(e);

    // independent sub-tests over a read-only stream; assembly order is fixed
    auto f_apen = std::async(std::launch::async, [&] { return tests::approximate_entropy(s, cfg.apen_m); });
    auto f_bfreq = std::async(std::launch::async, [&] { return tests::block_frequency(s, cfg.block_frequency_block); });
    auto f_cusum = std::async(std::launch::async, [&] { return tests::cumulative_sums(s); });
    auto f_dft = std::async(std::launch::async, [&] { return tests::dft(s); });
    auto f_freq = std::async(std::launch::async, [&] { return tests::frequency(s); });
    auto f_lc = std::async(std::launch::async, [&] { return tests::linear_complexity(s, cfg.linear_complexity_block); });
    auto f_lrun = std::async(std::launch::async, [&] { return tests::longest_run(s); });
    auto f_nonov = std::async(std::launch::async, [&] { return tests::non_overlapping_templates(s, cfg.template_m, cfg.alpha); });
    auto f_ov = std::async(std::launch::async, [&] { return tests::overlapping_templates(s, cfg.template_m); });
    auto f_rank = std::async(std::launch::async, [&] { return tests::rank(s); });
    auto f_runs = std::async(std::launch::async, [&] { return tests::runs(s); });
    auto f_serial = std::async(std::launch::async, [&] { return tests::serial(s, cfg.serial_m); });

    TestReport rep;
    rep.length = bits.size();
    rep.alpha = cfg.alpha;
    rep.meta = bits.meta;
    rep.tests.push_back(f_apen.get());
    rep.tests.push_back(f_bfreq.get());
    rep.tests.push_back(f_cusum.get());
    rep.tests.push_back(f_dft.get());
    rep.tests.push_back(f_freq.get());
    rep.tests.push_back(f_lc.get());
    rep.tests.push_back(f_lrun.get());
    rep.tests.push_back(f_nonov.get());
    rep.tests.push_back(f_ov.get());
    rep.tests.push_back(f_rank.get());
    rep.tests.push_back(f_runs.get());
    rep.tests.push_back(f_serial.get());

    if (bits.size() >= 10000) {
        rep.bias = bias_estimate(bits);
        rep.bias_percent_x2 = 2.0 * rep.bias.percent;
    }
    return rep;
}

bool TestReport::all_pass() const {
    BatteryConfig cfg;
    cfg.alpha = alpha;
    for (const auto& t : tests)
        if (!t.skipped && !t.passed(cfg)) return false;
    return true;
}

int TestReport::n_failed() const {
    BatteryConfig cfg;
    cfg.alpha = alpha;
    int k = 0;
    for (const auto& t : tests)
        if (!t.skipped && !t.passed(cfg)) ++k;
    return k;
}

int TestReport::n_skipped() const {
    int k = 0;
    for (const auto& t : tests)
        if (t.skipped) ++k;
    return k;
}

nlohmann::json TestReport::to_json() const {
    BatteryConfig cfg;
    cfg.alpha = alpha;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& t : tests) {
        nlohmann::json row{{"name", t.name}};
        if (t.skipped) {
            row["status"] = "insufficient data";
        } else {
            row["pass"] = t.passed(cfg);
            if (t.pass_fraction >= 0.0)
                row["pass_fraction"] = t.pass_fraction;
            else
                row["p_values"] = t.p_values;
        }
        if (!t.note.empty()) row["note"] = t.note;
        rows.push_back(row);
    }
    return {{"alpha", alpha},
            {"length", length},
            {"tests", rows},
            {"bias_percent", bias.percent},
            {"bias_fraction", bias.fraction},
            {"bias_percent_x2", bias_percent_x2},
            {"meta", meta}};
}

std::string TestReport::to_table() const {
    BatteryConfig cfg;
    cfg.alpha = alpha;
    std::ostringstream os;
    os << "NIST-800-22 subset (n = " << length << ", alpha = " << alpha << ")\n";
    auto row = [&os](const std::string& name, const std::string& value) {
        os << "  " << name;
        for (std::size_t i = name.size(); i < 28; ++i) os << ' ';
        os << value << '\n';
    };
    for (const auto& t : tests) {
        if (t.skipped) {
            row(t.name, "insufficient data");
            continue;
        }
        if (t.pass_fraction >= 0.0) {
            std::ostringstream v;
            v.precision(4);
            v << 100.0 * t.pass_fraction << "% Success";
            row(t.name, v.str());
            continue;
        }
        for (double p : t.p_values) {
            std::ostringstream v;
            v.precision(6);
            v << std::fixed << p << (p >= alpha ? "" : "  Failure");
            row(t.name, v.str());
        }
    }
    {
        std::ostringstream v;
        v.precision(4);
        v << bias.percent << "%  (|f1-f0| form: " << bias_percent_x2 << "%)";
        row("bias", v.str());
    }
    return os.str();
}

}  // namespace zigzag::stats
