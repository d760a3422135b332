#include <doctest.h>

#include <cmath>

#include "zigzag/analysis.hpp"
#include "zigzag/common.hpp"
#include "zigzag/postprocess.hpp"

using namespace zigzag;
using namespace zigzag::postprocess;
using dynamics::BitStream;

TEST_CASE("von neumann pairing rule") {
    const auto out = von_neumann(BitStream::from01("00011011"));
    REQUIRE(out.size() == 2);
    CHECK(out[0] == 0);
    CHECK(out[1] == 1);

    std::string s;
    for (int i = 0; i < 10000; ++i) s += "01";
    const auto zeros = von_neumann(BitStream::from01(s));
    CHECK(zeros.size() == 10000);
    CHECK(zeros.count_ones() == 0);

    CHECK(von_neumann(BitStream::from01("0011")).empty());
}

TEST_CASE("von neumann unbiases an iid biased source") {
    // iid Bernoulli(0.6): output rate 2*0.6*0.4 per pair, unbiased output
    RandomSource rng(2718);
    BitStream in;
    const std::size_t n = 1000000;
    in.reserve(n);
    for (std::size_t i = 0; i < n; ++i) in.push_back(rng.uniform01() < 0.6 ? 1 : 0);
    const auto out = von_neumann(in);
    const double rate = static_cast<double>(out.size()) / static_cast<double>(n);
    CHECK(std::abs(rate - 0.24) < 0.005);
    const double bias = std::abs(out.ones_fraction() - 0.5);
    CHECK(bias < 3.0 * 0.5 / std::sqrt(static_cast<double>(out.size())));
}

TEST_CASE("von neumann repeated-trial bias") {
    // over 100 trials at n = 10^5, the output bias sits within 3 sigma of 0 in
    // at least 95 of them
    int inside = 0;
    for (int t = 0; t < 100; ++t) {
        RandomSource rng(1000 + static_cast<std::uint64_t>(t));
        BitStream in;
        for (int i = 0; i < 100000; ++i) in.push_back(rng.uniform01() < 0.6 ? 1 : 0);
        const auto out = von_neumann(in);
        const double b = std::abs(out.ones_fraction() - 0.5);
        if (b <= 3.0 * 0.5 / std::sqrt(static_cast<double>(out.size()))) ++inside;
    }
    CHECK(inside >= 95);
}

TEST_CASE("xor debias recurrence") {
    const auto out = xor_debias(BitStream::from01("101100"), {3, 4});
    CHECK(out.to01() == "001");

    DebiasConfig cfg{2, 5};
    std::string ones(12, '1');
    const auto alt = xor_debias(BitStream::from01(ones), cfg);
    CHECK(alt.to01() == "0011001100");  // z_n = 1 xor z_{n-2}

    CHECK_THROWS_AS(xor_debias(BitStream::from01("10"), DebiasConfig{3, 4}),
                    std::invalid_argument);
    CHECK_THROWS_AS(xor_debias(BitStream::from01("111111"), DebiasConfig{4, 4}),
                    std::invalid_argument);  // gcd != 1
    CHECK_THROWS_AS(xor_debias(BitStream::from01("111111"), DebiasConfig{1, 4}),
                    std::invalid_argument);  // l < 2
}

TEST_CASE("xor debias is invertible through the same register tap") {
    // z_n = d_n xor z_{n-l} rearranges to d_n = z_n xor z_{n-l}: the same
    // l-tap XOR, applied feedforward to the full z sequence, reconstructs the
    // input from index l on (no entropy is lost)
    RandomSource rng(5150);
    BitStream in;
    for (int i = 0; i < 5000; ++i) in.push_back(rng.uniform01() < 0.5 ? 1 : 0);
    const DebiasConfig cfg{7, 4};
    const std::size_t l = static_cast<std::size_t>(cfg.l);
    const auto z = xor_debias(in, cfg);
    std::vector<int> full;  // complete z sequence; the first l outputs echo d
    for (std::size_t i = 0; i < l; ++i) full.push_back(in[i]);
    for (std::size_t i = 0; i < z.size(); ++i) full.push_back(z[i]);
    for (std::size_t n = l; n < full.size(); ++n)
        CHECK((full[n] ^ full[n - l]) == in[n]);
}

TEST_CASE("xor debias removes markov bias") {
    // two-state chain with p = q = 0.53 (lambda1 = 0.06); with l = 7 the
    // residual correlation bound 10*lambda1^l is negligible next to the
    // statistical band
    const auto in = analysis::simulate_markov_bits(0.53, 0.53, 1000000, 313);
    const auto out = xor_debias(in, {7, 4});
    const double bias = std::abs(out.ones_fraction() - 0.5);
    const double bound = 10.0 * std::pow(0.06, 7) +
                         3.0 * 0.5 / std::sqrt(static_cast<double>(out.size()));
    CHECK(bias < bound);

    // chain-level oracle: exact two-bit XOR bias at distance l from T^l
    double t[2][2] = {{0.53, 0.47}, {0.47, 0.53}};
    double tl[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
    for (int k = 0; k < 7; ++k) {
        double nx[2][2] = {{0, 0}, {0, 0}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int m = 0; m < 2; ++m) nx[i][j] += tl[i][m] * t[m][j];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) tl[i][j] = nx[i][j];
    }
    // stationary distribution is (1/2, 1/2) for p = q; P(xor = 1) = sum_i
    // pi_i * P(j != i | i, l steps)
    const double p_xor1 = 0.5 * tl[0][1] + 0.5 * tl[1][0];
    CHECK(std::abs(p_xor1 - 0.5) == doctest::Approx(0.5 * std::pow(0.06, 7)).epsilon(1e-6));
}

TEST_CASE("xor debias does not increase iid bias") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        RandomSource rng(seed);
        BitStream in;
        for (int i = 0; i < 200000; ++i) in.push_back(rng.uniform01() < 0.55 ? 1 : 0);
        const auto out = xor_debias(in, {5, 4});
        const double bin = std::abs(in.ones_fraction() - 0.5);
        const double bout = std::abs(out.ones_fraction() - 0.5);
        CHECK(bout <= bin);
    }
}

TEST_CASE("choose_l scans for the coprime register length") {
    CHECK(choose_l(analysis::make_markov(0.515, 0.515), 1e-6, 4) == 5);   // lambda1 = 0.03
    CHECK(choose_l(analysis::make_markov(0.5, 0.5), 1e-6, 4) == 3);      // lambda1 = 0
    CHECK(choose_l(analysis::make_markov(0.75, 0.75), 1e-3, 4) == 11);   // lambda1 = 0.5
    CHECK_THROWS_AS(choose_l(analysis::make_markov(0.9999999, 0.9999999), 0.0, 4),
                    std::invalid_argument);

    CHECK(next_coprime_length(4, 5) == 7);
    CHECK(next_coprime_length(4, 3) == 5);
    CHECK(next_coprime_length(5, 4) == 6);
}

TEST_CASE("debias config invariants") {
    CHECK_THROWS_AS(DebiasConfig({6, 4}).validate(), std::invalid_argument);
    CHECK_NOTHROW(DebiasConfig({7, 4}).validate());
}
