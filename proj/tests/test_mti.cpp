#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rfds/fft.hpp"
#include "rfds/mti.hpp"

using namespace rfds;

TEST_CASE("design rejects invalid cutoffs") {
    CHECK_THROWS_AS(MtiFilter::design(64, 0.0), Error);
    CHECK_THROWS_AS(MtiFilter::design(64, 0.5), Error);
    CHECK_THROWS_AS(MtiFilter::design(1, 0.01), Error);
}

TEST_CASE("coefficients sum to zero (exact DC null)") {
    for (std::size_t taps : {8u, 33u, 64u, 65u}) {
        const MtiFilter f = MtiFilter::design(taps, 0.01);
        double sum = 0.0;
        for (double b : f.coefficients()) sum += b;
        CHECK(std::abs(sum) < 1e-10);
        CHECK(f.taps() == taps);
        CHECK(std::abs(f.frequency_response(0.0)) < 1e-10);
    }
}

TEST_CASE("64-tap design passes mid-band within 1 dB and kills DC by 60 dB") {
    const MtiFilter f = MtiFilter::design(64, 0.01);
    const double mid = std::abs(f.frequency_response(2.0 * kPi * 0.25));
    CHECK(std::abs(20.0 * std::log10(mid)) < 1.0);
    const double dc = std::abs(f.frequency_response(0.0));
    CHECK(20.0 * std::log10((dc + 1e-300) / mid) < -60.0);
}

TEST_CASE("single-tap response evaluator is exact") {
    const std::vector<double> one{1.0};
    for (double w : {0.0, 0.3, -1.2, kPi}) {
        CHECK(std::abs(fir_frequency_response(one, w) - cplx(1.0, 0.0)) < 1e-15);
    }
}

TEST_CASE("response at +/- omega are conjugates for real coefficients") {
    const MtiFilter f = MtiFilter::design(64, 0.01);
    for (int i = 0; i < 1024; ++i) {
        const double w = kPi * (static_cast<double>(i) + 0.5) / 1024.0;
        const cplx pos = f.frequency_response(w);
        const cplx neg = f.frequency_response(-w);
        CHECK(std::abs(pos - std::conj(neg)) < 1e-12);
    }
}

TEST_CASE("response evaluator agrees with the zero-padded transform") {
    const MtiFilter f = MtiFilter::design(64, 0.01);
    const std::size_t padded = 4096;
    std::vector<cplx> coeffs(padded, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < f.taps(); ++k) coeffs[k] = f.coefficients()[k];
    const auto spectrum = fft::forward(coeffs);
    for (std::size_t bin : {0u, 7u, 128u, 1024u, 2048u, 4000u}) {
        const double w = 2.0 * kPi * static_cast<double>(bin) / static_cast<double>(padded);
        CHECK(std::abs(spectrum[bin] - f.frequency_response(w)) < 1e-10);
    }
}

TEST_CASE("constant input vanishes after warm-up") {
    const MtiFilter f = MtiFilter::design(64, 0.01);
    std::vector<cplx> dc(200, cplx(3.0, -1.5));
    const auto out = f.apply(dc);
    for (std::size_t m = f.warmup_samples(); m < out.size(); ++m) {
        CHECK(std::abs(out[m]) < std::abs(dc[m]) * 1e-9);
    }
}

TEST_CASE("tone gain matches the frequency response after warm-up") {
    const MtiFilter f = MtiFilter::design(64, 0.01);
    for (double cycles : {0.25, 0.0013, 0.05}) {
        const double w = 2.0 * kPi * cycles;
        std::vector<cplx> tone(400);
        for (std::size_t m = 0; m < tone.size(); ++m) {
            tone[m] = cplx(std::cos(w * static_cast<double>(m)),
                           std::sin(w * static_cast<double>(m)));
        }
        const auto out = f.apply(tone);
        const double expected = std::abs(f.frequency_response(w));
        for (std::size_t m = f.warmup_samples(); m < out.size(); ++m) {
            CHECK(std::abs(out[m]) == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("streaming form equals batch convolution") {
    const MtiFilter f = MtiFilter::design(16, 0.05);
    Rng rng(5);
    const auto x = test::random_complex(100, rng);
    const auto batch = f.apply(x);
    MtiStream stream(f);
    for (std::size_t m = 0; m < x.size(); ++m) {
        const cplx y = stream.push(x[m]);
        CHECK(std::abs(y - batch[m]) < 1e-12);
    }
}
