#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rfds/fft.hpp"
#include "rfds/rfds.hpp"
#include "rfds/synth.hpp"

using namespace rfds;

namespace {

SensingConfig gate_cfg(std::size_t n = 64) {
    SensingConfig cfg = detection_preset();
    cfg.num_subcarriers = n;
    cfg.subcarrier_spacing_hz = 160e6 / static_cast<double>(n);
    return cfg;
}

std::vector<CsiFrame> random_frames(std::size_t count, std::size_t n, Rng& rng) {
    std::vector<CsiFrame> frames(count);
    for (std::size_t m = 0; m < count; ++m) {
        frames[m].timestamp_s = 0.01 * static_cast<double>(m);
        frames[m].samples = test::random_complex(n, rng);
    }
    return frames;
}

}  // namespace

TEST_CASE("static target exactly on a gate sums coherently to N") {
    const SensingConfig cfg = gate_cfg();
    const double pitch = range_resolution(cfg);
    for (int k : {0, 1, 5}) {
        const double range = pitch * k;
        SceneSpec scene;
        TargetTrack t;
        t.waypoints = {{0.0, range}, {1.0, range}};
        scene.targets.push_back(t);
        const CsiCapture cap = generate_capture(scene, cfg, 0.5, 2);
        const GateSeries series = extract_gate(cap.frames, range, cfg);
        for (const cplx& s : series.samples) {
            CHECK(std::abs(s) ==
                  doctest::Approx(static_cast<double>(cfg.num_subcarriers)).epsilon(1e-9));
        }
    }
}

TEST_CASE("grid-aligned gates equal N times the inverse-transform bin") {
    const SensingConfig cfg = gate_cfg(128);
    const double pitch = range_resolution(cfg);
    Rng rng(31);
    const auto frames = random_frames(8, cfg.num_subcarriers, rng);
    for (std::size_t k : {0u, 3u, 9u, 60u}) {
        const GateSeries series = extract_gate(frames, pitch * static_cast<double>(k), cfg);
        for (std::size_t m = 0; m < frames.size(); ++m) {
            const auto profile = fft::inverse_scaled(frames[m].samples);
            const cplx expected = profile[k] * static_cast<double>(cfg.num_subcarriers);
            CHECK(std::abs(series.samples[m] - expected) /
                      std::abs(expected) < 1e-9);
        }
    }
}

TEST_CASE("half-pitch offset attenuates to the Dirichlet kernel value") {
    const SensingConfig cfg = gate_cfg();
    const std::size_t n = cfg.num_subcarriers;
    const double pitch = range_resolution(cfg);
    const double gate = pitch * 3.0;
    SceneSpec scene;
    TargetTrack t;
    t.waypoints = {{0.0, gate + pitch / 2.0}, {1.0, gate + pitch / 2.0}};
    scene.targets.push_back(t);
    const CsiCapture cap = generate_capture(scene, cfg, 0.5, 2);
    const GateSeries series = extract_gate(cap.frames, gate, cfg);

    const double exact = 1.0 / std::sin(kPi / (2.0 * static_cast<double>(n)));
    const double approx = 2.0 * static_cast<double>(n) / kPi;
    CHECK(std::abs(series.samples[0]) == doctest::Approx(exact).epsilon(1e-9));
    CHECK(std::abs(series.samples[0]) == doctest::Approx(approx).epsilon(2e-3));
}

TEST_CASE("gate extraction is linear") {
    const SensingConfig cfg = gate_cfg();
    Rng rng(4);
    const auto fa = random_frames(4, cfg.num_subcarriers, rng);
    const auto fb = random_frames(4, cfg.num_subcarriers, rng);
    const double alpha = 1.7, beta = -0.4;
    std::vector<CsiFrame> mixed = fa;
    for (std::size_t m = 0; m < mixed.size(); ++m)
        for (std::size_t i = 0; i < cfg.num_subcarriers; ++i)
            mixed[m].samples[i] = alpha * fa[m].samples[i] + beta * fb[m].samples[i];

    const double gate = 2.3;  // off-grid on purpose
    const auto sa = extract_gate(fa, gate, cfg);
    const auto sb = extract_gate(fb, gate, cfg);
    const auto sm = extract_gate(mixed, gate, cfg);
    for (std::size_t m = 0; m < sm.samples.size(); ++m) {
        const cplx expected = alpha * sa.samples[m] + beta * sb.samples[m];
        CHECK(std::abs(sm.samples[m] - expected) < 1e-12 * std::abs(expected) + 1e-12);
    }
}

TEST_CASE("series-level MTI flags warm-up and counts multiplies") {
    const SensingConfig cfg = gate_cfg();
    const MtiFilter filter = MtiFilter::design(16, 0.02);
    Rng rng(6);
    GateSeries series;
    series.samples = test::random_complex(50, rng);
    OpCounter ops;
    const GateSeries filtered = apply_mti(series, filter, &ops);
    CHECK(filtered.warmup_samples == 15);
    CHECK(ops.mti_multiplies == 50 * 16);
    const auto expected = filter.apply(series.samples);
    for (std::size_t m = 0; m < expected.size(); ++m)
        CHECK(std::abs(filtered.samples[m] - expected[m]) < 1e-12);
}

TEST_CASE("dc_removal zeroes constants and passes zero-mean sequences") {
    const std::size_t n = 8, m = 16;
    std::vector<CsiFrame> constant(m);
    std::vector<CsiFrame> alternating(m);
    for (std::size_t j = 0; j < m; ++j) {
        constant[j].samples.assign(n, cplx(2.0, -1.0));
        alternating[j].samples.assign(n, (j % 2 == 0) ? cplx(1.0, 1.0) : cplx(-1.0, -1.0));
    }
    for (const auto& f : dc_removal(constant, m))
        for (const auto& s : f.samples) CHECK(std::abs(s) < 1e-12);
    const auto alt = dc_removal(alternating, m);
    for (std::size_t j = 0; j < m; ++j)
        for (const auto& s : alt[j].samples)
            CHECK(std::abs(s - alternating[j].samples[0]) < 1e-12);

    CHECK_THROWS_AS(dc_removal(constant, m + 1), Error);
}

TEST_CASE("dc_removal keeps a full-period tone intact") {
    // The block mean of a tone completing one full cycle per block is zero,
    // so mean subtraction leaves it untouched.
    const std::size_t n = 4, m = 32;
    std::vector<CsiFrame> frames(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double ang = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
        frames[j].samples.assign(n, cplx(std::cos(ang), std::sin(ang)));
    }
    const auto out = dc_removal(frames, m);
    for (std::size_t j = 0; j < m; ++j)
        for (const auto& s : out[j].samples)
            CHECK(std::abs(s - frames[j].samples[0]) < 1e-12);
}

TEST_CASE("doppler spectrum basics") {
    const std::size_t m = 32;
    std::vector<cplx> constant(m, cplx(2.0, 0.0));
    const auto spec = doppler_spectrum(constant, m);
    REQUIRE(spec.size() == m);
    // All power in the zero-Doppler (middle) bin.
    const std::size_t mid = m / 2;
    for (std::size_t b = 0; b < m; ++b) {
        if (b == mid) continue;
        CHECK(spec[b] < spec[mid] - 200.0);
    }

    // Complex tone at integer bin k peaks exactly there (after centering).
    for (std::size_t k : {1u, 5u, 31u}) {
        std::vector<cplx> tone(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double ang =
                2.0 * kPi * static_cast<double>(k) * static_cast<double>(j) /
                static_cast<double>(m);
            tone[j] = cplx(std::cos(ang), std::sin(ang));
        }
        const auto s = doppler_spectrum(tone, m);
        const std::size_t expected = (k + mid) % m;
        std::size_t best = 0;
        for (std::size_t b = 1; b < m; ++b)
            if (s[b] > s[best]) best = b;
        CHECK(best == expected);
    }

    std::vector<cplx> short_series(m - 1);
    CHECK_THROWS_AS(doppler_spectrum(short_series, m), Error);
}

TEST_CASE("doppler spectrum satisfies Parseval with the rectangular window") {
    const std::size_t m = 32;
    Rng rng(8);
    const auto series = test::random_complex(m, rng);
    const auto spec = doppler_spectrum(series, m);
    double linear_total = 0.0;
    for (double db : spec) linear_total += db_to_power(db);
    double energy = 0.0;
    for (const auto& s : series) energy += std::norm(s);
    CHECK(linear_total == doctest::Approx(energy).epsilon(1e-9));
}

TEST_CASE("time-Doppler map ring semantics") {
    TimeDopplerMap map;
    map.capacity = 5;
    map.update(0.0, {1.0});
    CHECK(map.spectra_db.size() == 1);
    for (int i = 1; i <= 9; ++i)
        map.update(static_cast<double>(i), {static_cast<double>(i)});
    CHECK(map.spectra_db.size() == 5);
    // Rows are the last five updates, oldest first.
    for (std::size_t r = 0; r < 5; ++r) {
        CHECK(map.window_times_s[r] == doctest::Approx(5.0 + static_cast<double>(r)));
        CHECK(map.spectra_db[r][0] == doctest::Approx(5.0 + static_cast<double>(r)));
    }
}

TEST_CASE("pipeline op counting matches the cost contract") {
    SensingConfig cfg = gate_cfg();
    cfg.doppler_frames = 16;
    cfg.doppler_hop_frames = 4;
    cfg.fir_taps = 8;
    cfg.gate_ranges_m = {0.0, 1.875, 3.75};
    PipelineOptions opts;
    opts.sync = false;
    RfdsPipeline pipeline(cfg, opts);

    SceneSpec scene;
    scene.noise_power = 0.1;
    const CsiCapture cap = generate_capture(scene, cfg, 0.8, 3);
    const std::size_t frames = cap.frames.size();
    std::size_t windows = 0;
    for (const auto& f : cap.frames) windows += pipeline.push_frame(f).size();

    const OpCounter& ops = pipeline.ops();
    CHECK(ops.extract_multiplies == frames * 3 * cfg.num_subcarriers);
    CHECK(ops.mti_multiplies == frames * 3 * cfg.fir_taps);  // F * R_g * taps, exactly
    CHECK(ops.doppler_fft_multiplies == windows * 3 * fft::complex_multiplies(16));
    CHECK(windows > 0);
}

TEST_CASE("pipeline block-mean removal equals frame-level dc_removal by linearity") {
    SensingConfig cfg = gate_cfg();
    cfg.doppler_frames = 16;
    cfg.doppler_hop_frames = 8;  // windows straddle block boundaries
    cfg.gate_ranges_m = {0.9375, 2.8125};

    Rng rng(77);
    const auto frames = random_frames(48, cfg.num_subcarriers, rng);

    PipelineOptions opts;
    opts.sync = false;
    opts.clutter = ClutterFilter::DcRemoval;
    RfdsPipeline pipeline(cfg, opts);
    std::vector<WindowOutput> outs;
    for (const auto& f : frames)
        for (auto& w : pipeline.push_frame(f)) outs.push_back(std::move(w));
    // Corrected samples appear in 16-frame blocks: windows end at every hop
    // boundary of the corrected stream (16, 24, 32, 40, 48).
    REQUIRE(outs.size() == 5);

    // Oracle: per-subcarrier mean removal over each block, then extraction
    // and sliding-window spectra on the corrected stream.
    const auto cleaned = dc_removal(frames, 16);
    for (std::size_t w = 0; w < outs.size(); ++w) {
        const std::size_t end = 16 + 8 * w;
        for (std::size_t g = 0; g < cfg.gate_ranges_m.size(); ++g) {
            std::vector<CsiFrame> sub(cleaned.begin() + (end - 16), cleaned.begin() + end);
            const GateSeries series = extract_gate(sub, cfg.gate_ranges_m[g], cfg);
            const auto expected = doppler_spectrum(series.samples, 16);
            // Compare linear powers relative to the spectrum peak: bins that
            // cancel to rounding noise differ wildly in dB but not in power.
            double peak = 0.0;
            for (double db : expected) peak = std::max(peak, db_to_power(db));
            for (std::size_t b = 0; b < 16; ++b) {
                const double got = db_to_power(outs[w].spectra_db[g][b]);
                const double want = db_to_power(expected[b]);
                CHECK(std::abs(got - want) <= 1e-9 * peak);
            }
        }
    }
}

TEST_CASE("MTI warm-up samples never enter spectra") {
    SensingConfig cfg = gate_cfg();
    cfg.doppler_frames = 8;
    cfg.doppler_hop_frames = 2;
    cfg.fir_taps = 4;
    cfg.gate_ranges_m = {0.0};
    PipelineOptions opts;
    opts.sync = false;
    RfdsPipeline pipeline(cfg, opts);
    CHECK(pipeline.warmup_frames() == 3 + 8);

    Rng rng(9);
    const auto frames = random_frames(20, cfg.num_subcarriers, rng);
    std::size_t first_window_at = 0;
    for (std::size_t m = 0; m < frames.size(); ++m) {
        if (!pipeline.push_frame(frames[m]).empty()) {
            first_window_at = m;
            break;
        }
    }
    CHECK(first_window_at == 10);  // 3 warm-up + 8 window -> index 10
}
