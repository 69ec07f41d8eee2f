#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rfds/fft.hpp"
#include "rfds/sync.hpp"
#include "rfds/synth.hpp"

using namespace rfds;

namespace {

SensingConfig sync_cfg() {
    SensingConfig cfg = detection_preset();
    cfg.num_subcarriers = 128;
    cfg.subcarrier_spacing_hz = 160e6 / 128.0;
    return cfg;
}

// SI-dominant scene: the strongest path sits at zero delay, which is what
// the delay calibration aligns to.
CsiCapture si_capture(const SensingConfig& cfg, double duration, std::uint64_t seed,
                      double delay = 0.0, double walk_std = 0.0) {
    SceneSpec scene;
    scene.si_amplitude = 10.0;
    TargetTrack t;
    t.waypoints = {{0.0, 3.0}, {duration, 3.0}};
    t.amplitude = 0.5;
    scene.targets.push_back(t);
    scene.noise_power = 1e-6;
    scene.impairments.delay_offset_samples = delay;
    scene.impairments.phase_walk_std_rad = walk_std;
    return generate_capture(scene, cfg, duration, seed);
}

}  // namespace

TEST_CASE("coarse delay recovers injected integer offsets") {
    const SensingConfig cfg = sync_cfg();
    Synchronizer sync(cfg);
    for (long d : {0L, 1L, 4L, 17L, 32L}) {
        const CsiCapture cap = si_capture(cfg, 0.5, 11 + static_cast<std::uint64_t>(d),
                                          static_cast<double>(d));
        CHECK(sync.coarse_delay(cap.frames[0]) == d);
        CHECK(sync.coarse_delay(cap.frames[5]) == d);
    }
}

TEST_CASE("coarse delay on an all-zero frame is an error") {
    const SensingConfig cfg = sync_cfg();
    Synchronizer sync(cfg);
    CsiFrame zero;
    zero.samples.assign(cfg.num_subcarriers, cplx(0.0, 0.0));
    CHECK_THROWS_AS(sync.coarse_delay(zero), Error);
}

TEST_CASE("coarse delay tie-break prefers the smaller magnitude then positive") {
    const SensingConfig cfg = sync_cfg();
    Synchronizer sync(cfg);
    const std::size_t n = cfg.num_subcarriers;

    // A single nonzero subcarrier at index 0 correlates identically (exactly
    // 1.0) at every lag; the tie rule must settle on lag 0.
    CsiFrame flat;
    flat.samples.assign(n, cplx(0.0, 0.0));
    flat.samples[0] = cplx(1.0, 0.0);
    CHECK(sync.coarse_delay(flat) == 0);

    // Two equal-strength paths at +3 and -3 samples. Up to rounding the
    // peaks tie; the rule keeps the result at magnitude 3 and prefers the
    // positive lag on an exact tie.
    CsiFrame frame;
    frame.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * kPi * 3.0 * static_cast<double>(i) / static_cast<double>(n);
        frame.samples[i] = cplx(std::cos(-a), std::sin(-a)) + cplx(std::cos(a), std::sin(a));
    }
    CHECK(std::abs(sync.coarse_delay(frame)) == 3);
}

TEST_CASE("fine delay resolves fractional offsets to the grid resolution") {
    const SensingConfig cfg = sync_cfg();
    Synchronizer sync(cfg);
    for (double d : {0.25, 1.3, -0.4375, 5.0625}) {
        const CsiCapture cap = si_capture(cfg, 0.5, 3, d);
        const long coarse = sync.coarse_delay(cap.frames[0]);
        const double fine = sync.fine_delay(cap.frames[0], coarse);
        const double recovered = static_cast<double>(coarse) + fine;
        CHECK(std::abs(recovered - d) <= 1.0 / 16.0 + 1e-9);
    }
}

TEST_CASE("integer-only delay gives zero fractional part") {
    const SensingConfig cfg = sync_cfg();
    Synchronizer sync(cfg);
    const CsiCapture cap = si_capture(cfg, 0.5, 5, 7.0);
    const long coarse = sync.coarse_delay(cap.frames[0]);
    CHECK(coarse == 7);
    CHECK(sync.fine_delay(cap.frames[0], coarse) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("upsample factor one disables refinement") {
    SensingConfig cfg = sync_cfg();
    cfg.upsample_factor = 1;
    Synchronizer sync(cfg);
    const CsiCapture cap = si_capture(cfg, 0.5, 5, 2.4);
    CHECK(sync.fine_delay(cap.frames[0], 2) == 0.0);
}

TEST_CASE("fine correlation equals the zero-padded transform oracle") {
    const SensingConfig cfg = sync_cfg();
    const std::size_t n = cfg.num_subcarriers;
    const std::size_t u = cfg.upsample_factor;
    Rng rng(2024);
    CsiFrame frame;
    frame.samples = test::random_complex(n, rng);

    // Oracle: one-sided zero-padding to N*U, unnormalized inverse transform
    // samples the same trigonometric polynomial at lag grid l/U.
    std::vector<cplx> padded(n * u, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) padded[i] = frame.samples[i];
    const auto corr = fft::inverse(padded);

    Synchronizer sync(cfg);
    const long coarse = sync.coarse_delay(frame);
    const double fine = sync.fine_delay(frame, coarse);
    // Oracle argmax over the same candidate grid with the same preference
    // order (0, +1, -1, ...) and strict comparisons.
    std::vector<long> order{0};
    for (long k = 1; k <= static_cast<long>(u) / 2; ++k) {
        if (k < static_cast<long>(u) / 2) order.push_back(k);
        order.push_back(-k);
    }
    double best = -1.0;
    double best_frac = 0.0;
    for (long k : order) {
        const long idx = coarse * static_cast<long>(u) + k;
        const long span = static_cast<long>(n * u);
        const std::size_t wrapped = static_cast<std::size_t>(((idx % span) + span) % span);
        const double mag = std::norm(corr[wrapped]);
        if (mag > best) {
            best = mag;
            best_frac = static_cast<double>(k) / static_cast<double>(u);
        }
    }
    CHECK(fine == doctest::Approx(best_frac).epsilon(1e-12));
}

TEST_CASE("frame mean phase") {
    CsiFrame ones;
    ones.samples.assign(16, cplx(1.0, 0.0));
    CHECK(Synchronizer::frame_mean_phase(ones) == 0.0);

    CsiFrame imag;
    imag.samples.assign(16, cplx(0.0, 1.0));
    CHECK(Synchronizer::frame_mean_phase(imag) == doctest::Approx(kPi / 2).epsilon(1e-12));

    // A set with known real-positive mean, rotated by pi/4.
    CsiFrame rotated;
    rotated.samples = {cplx(2.0, 1.0), cplx(2.0, -1.0), cplx(0.5, 0.25), cplx(0.5, -0.25),
                       cplx(1.0, 0.0), cplx(0.0, 0.5),  cplx(0.0, -0.5), cplx(1.0, 0.0)};
    const cplx rot = std::polar(1.0, kPi / 4.0);
    for (auto& s : rotated.samples) s *= rot;
    CHECK(Synchronizer::frame_mean_phase(rotated) ==
          doctest::Approx(kPi / 4.0).epsilon(1e-12));

    CsiFrame zero_mean;
    zero_mean.samples = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    CHECK_THROWS_AS(Synchronizer::frame_mean_phase(zero_mean), Error);
}

TEST_CASE("phase fix quantization") {
    SensingConfig cfg = sync_cfg();
    Synchronizer sync(cfg);
    const double quantum = cfg.phase_quantum_rad;

    CsiFrame f0;
    f0.samples.assign(cfg.num_subcarriers, cplx(1.0, 0.0));
    sync.phase_fix(f0);  // seeds the reference at phase 0
    CHECK(sync.last_phase_fix() == 0.0);

    // Offset below half a quantum rounds to no correction.
    CsiFrame f1 = f0;
    const cplx small = std::polar(1.0, -0.4 * quantum);
    for (auto& s : f1.samples) s *= small;
    sync.phase_fix(f1);
    CHECK(sync.last_phase_fix() == 0.0);

    // A 3.2-quantum offset rounds to 3 steps.
    CsiFrame f2 = f0;
    const cplx big = std::polar(1.0, -3.2 * quantum);
    for (auto& s : f2.samples) s *= big;
    sync.phase_fix(f2);
    CHECK(sync.last_phase_fix() == doctest::Approx(3.0 * quantum).epsilon(1e-12));
}

TEST_CASE("phase fix preserves magnitudes exactly at every sample") {
    const SensingConfig cfg = sync_cfg();
    const CsiCapture cap = si_capture(cfg, 0.5, 31, 0.0, 0.2);
    Synchronizer sync(cfg);
    for (const auto& frame : cap.frames) {
        const CsiFrame fixed = sync.phase_fix(frame);
        for (std::size_t n = 0; n < frame.samples.size(); ++n) {
            CHECK(std::abs(fixed.samples[n]) ==
                  doctest::Approx(std::abs(frame.samples[n])).epsilon(1e-12));
        }
    }
}

TEST_CASE("random phase walk is reduced below half a quantum") {
    const SensingConfig cfg = sync_cfg();
    const CsiCapture cap = si_capture(cfg, 2.0, 17, 0.0, 0.1);
    Synchronizer sync(cfg);
    std::size_t ok = 0;
    std::size_t total = 0;
    for (const auto& frame : cap.frames) {
        sync.phase_fix(frame);
        ++total;
        if (total == 1) continue;  // seed frame has no correction
        if (sync.last_phase_residual() <= cfg.phase_quantum_rad / 2.0 + 1e-12) ++ok;
    }
    CHECK(static_cast<double>(ok) / static_cast<double>(total - 1) >= 0.99);
}

TEST_CASE("delay correction inverts the synth ramp") {
    const SensingConfig cfg = sync_cfg();
    const CsiCapture clean = si_capture(cfg, 0.5, 23);
    const CsiCapture shifted = apply_impairments(clean, 9.0, 0.0, 1);
    Synchronizer sync(cfg);
    const CsiFrame corrected = sync.process(shifted.frames[0]);
    double scale = 0.0;
    for (const auto& s : clean.frames[0].samples) scale = std::max(scale, std::abs(s));
    for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) {
        CHECK(std::abs(corrected.samples[n] - clean.frames[0].samples[n]) / scale < 1e-9);
    }
}

TEST_CASE("sync is idempotent") {
    const SensingConfig cfg = sync_cfg();
    const CsiCapture cap = si_capture(cfg, 0.6, 41, 3.25, 0.05);
    const CsiCapture once = synchronize_capture(cap);
    const CsiCapture twice = synchronize_capture(once);
    double scale = 0.0;
    for (const auto& s : once.frames[5].samples) scale = std::max(scale, std::abs(s));
    for (std::size_t m = 0; m < once.frames.size(); ++m) {
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n) {
            CHECK(std::abs(twice.frames[m].samples[n] - once.frames[m].samples[n]) / scale <
                  1e-9);
        }
    }
}
