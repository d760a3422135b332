#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "zigzag/dynamics.hpp"

using namespace zigzag;
using namespace zigzag::dynamics;

TEST_CASE("deterministic orbits match hand-iterated values") {
    const auto tent = maps::make_tent();
    const auto orbit = iterate_orbit(tent, 0.3, 3, 0.0, 0);
    REQUIRE(orbit.size() == 3);
    CHECK(orbit[0] == 0.3);
    CHECK(orbit[1] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(orbit[2] == doctest::Approx(0.8).epsilon(1e-15));

    const auto zz = maps::make_zigzag();
    const auto zo = iterate_orbit(zz, 0.3, 3, 0.0, 0);
    CHECK(zo[1] == doctest::Approx(-0.6).epsilon(1e-15));
    CHECK(zo[2] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("noise amplification escapes the zero neighborhood but not the domain") {
    const auto zz = maps::make_zigzag();
    const auto orbit = iterate_orbit(zz, 0.0, 100000, 1e-6, 42);
    std::size_t leaves = 0;
    bool left = false;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
        if (!left && std::abs(orbit[k]) > 1e-3) {
            leaves = k;
            left = true;
        }
        CHECK(std::abs(orbit[k]) < 1.1);  // inside guard band throughout
    }
    CHECK(left);
    CHECK(leaves < 60);  // gain-2 amplification from the noise floor
}

TEST_CASE("orbit escape carries the escape index") {
    const auto tent = maps::make_tent();
    // 1.02 is inside the guard band; the extrapolated falling branch then
    // doubles the negative state out of it
    try {
        iterate_orbit(tent, 1.0, 50, 0.0, 0);  // stays inside: 1 -> 0 -> 0 ...
        const auto orbit = iterate_orbit(tent, 0.9999999, 200, 1e-3, 7);
        // noisy tent close to the boundary may or may not escape; nothing to
        // assert here beyond no crash
        (void)orbit;
    } catch (const OrbitEscapeError& e) {
        CHECK(e.step > 0);
    }
    bool threw = false;
    try {
        auto bad = maps::make_tent();
        double x = 1.05;  // guard band, extrapolates to -0.1, then out
        for (int i = 0; i < 100; ++i) x = bad.eval(x);
    } catch (const OutOfDomainError&) {
        threw = true;
    }
    CHECK(threw);
}

TEST_CASE("single-stage pipeline reproduces the deterministic tent bits") {
    SimConfig cfg;
    cfg.noise_std = 0.0;
    cfg.stages = 1;
    cfg.n_bits = 3;
    cfg.discard = 0;
    cfg.x0 = 0.3;
    const maps::PiecewiseAffineMap stages[] = {maps::make_tent()};
    const auto bits = run_pipeline(stages, cfg);
    REQUIRE(bits.size() == 3);
    CHECK(bits[0] == 0);
    CHECK(bits[1] == 1);
    CHECK(bits[2] == 1);
}

TEST_CASE("four identical stages emit the same bits as one") {
    SimConfig one;
    one.noise_std = 0.0;
    one.stages = 1;
    one.n_bits = 64;
    one.x0 = 0.3;
    const maps::PiecewiseAffineMap m1[] = {maps::make_zigzag()};
    const auto b1 = run_pipeline(m1, one);

    SimConfig four = one;
    four.stages = 4;
    const maps::PiecewiseAffineMap m4[] = {maps::make_zigzag(), maps::make_zigzag(),
                                           maps::make_zigzag(), maps::make_zigzag()};
    const auto b4 = run_pipeline(m4, four);
    REQUIRE(b4.size() == b1.size());
    for (std::size_t i = 0; i < b1.size(); ++i) CHECK(b1[i] == b4[i]);
}

TEST_CASE("zero-noise zigzag pipeline bits equal the tent pipeline bits") {
    SimConfig cfg;
    cfg.noise_std = 0.0;
    cfg.stages = 1;
    cfg.n_bits = 1000;
    cfg.x0 = 0.3;
    const maps::PiecewiseAffineMap zz[] = {maps::make_zigzag()};
    const maps::PiecewiseAffineMap tt[] = {maps::make_tent()};
    const auto bz = run_pipeline(zz, cfg);
    const auto bt = run_pipeline(tt, cfg);
    for (std::size_t i = 0; i < bz.size(); ++i) CHECK(bz[i] == bt[i]);
}

TEST_CASE("determinism and seed sensitivity") {
    SimConfig cfg;
    cfg.noise_std = 1e-6;
    cfg.stages = 4;
    cfg.n_bits = 10000;
    cfg.discard = 100;
    cfg.seed = 123;
    const maps::PiecewiseAffineMap m4[] = {maps::make_zigzag(), maps::make_zigzag(),
                                           maps::make_zigzag(), maps::make_zigzag()};
    const auto a = run_pipeline(m4, cfg);
    const auto b = run_pipeline(m4, cfg);
    REQUIRE(a.size() == b.size());
    CHECK(a.bytes() == b.bytes());

    cfg.seed = 124;
    const auto c = run_pipeline(m4, cfg);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) agree += a[i] == c[i];
    CHECK(static_cast<double>(agree) / static_cast<double>(a.size()) < 0.6);
}

TEST_CASE("discard only removes a prefix") {
    SimConfig cfg;
    cfg.noise_std = 1e-6;
    cfg.stages = 2;
    cfg.n_bits = 5000;
    cfg.discard = 0;
    cfg.seed = 9;
    const maps::PiecewiseAffineMap m2[] = {maps::make_zigzag(), maps::make_zigzag()};
    const auto full = run_pipeline(m2, cfg);
    cfg.discard = 500;
    cfg.n_bits = 4500;
    const auto tail = run_pipeline(m2, cfg);
    for (std::size_t i = 0; i < tail.size(); ++i) CHECK(tail[i] == full[i + 500]);
}

TEST_CASE("warmup discard counts") {
    CHECK(warmup_discard(2.0, std::pow(2.0, 20)) == 20);
    CHECK(warmup_discard(16.0, std::pow(16.0, 20)) == 20);
    CHECK(warmup_discard(16.0, 1e6) == 5);
    CHECK_THROWS_AS(warmup_discard(1.0, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(warmup_discard(0.5, 100.0), std::invalid_argument);
}

TEST_CASE("bitstream packing, files and text round trip") {
    BitStream s;
    for (int b : {1, 0, 1, 1, 0, 0, 1, 0, 1}) s.push_back(b);
    CHECK(s.size() == 9);
    CHECK(s.to01() == "101100101");
    CHECK(s.bytes().size() == 2);
    CHECK(s.bytes()[0] == 0xB2);  // MSB-first packing
    CHECK(s.bytes()[1] == 0x80);  // zero padding

    const auto back = BitStream::from01(s.to01());
    CHECK(back.bytes() == s.bytes());

    s.meta = {{"origin", "unit-test"}};
    const auto dir = std::filesystem::temp_directory_path();
    const auto bin = dir / "zigzag_test_stream.bin";
    s.save(bin);
    const auto loaded = BitStream::load(bin);
    CHECK(loaded.size() == s.size());
    CHECK(loaded.bytes() == s.bytes());
    CHECK(loaded.meta.at("origin") == "unit-test");

    const auto txt = dir / "zigzag_test_stream.txt";
    s.save(txt);
    const auto loaded_txt = BitStream::load(txt);
    CHECK(loaded_txt.to01() == s.to01());
}
