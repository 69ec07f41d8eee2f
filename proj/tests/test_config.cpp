#include <doctest.h>

#include "rfds/config.hpp"
#include "rfds/config_io.hpp"

using namespace rfds;

TEST_CASE("range resolution at 160 MHz bandwidth") {
    const SensingConfig cfg = detection_preset();
    CHECK(cfg.bandwidth_hz() == doctest::Approx(160e6).epsilon(1e-12));
    CHECK(range_resolution(cfg) == doctest::Approx(0.9375).epsilon(1e-14));
}

TEST_CASE("range resolution scales inversely with bandwidth") {
    SensingConfig cfg = detection_preset();
    cfg.subcarrier_spacing_hz /= 2.0;  // 80 MHz total
    CHECK(range_resolution(cfg) == doctest::Approx(1.875).epsilon(1e-14));

    SensingConfig doubled = detection_preset();
    doubled.subcarrier_spacing_hz *= 2.0;
    CHECK(range_resolution(doubled) ==
          doctest::Approx(range_resolution(detection_preset()) / 2.0).epsilon(1e-14));
}

TEST_CASE("velocity resolution from the frame count and rate") {
    const SensingConfig det = detection_preset();
    CHECK(velocity_resolution(det) == doctest::Approx(0.0808).epsilon(2e-3));
    CHECK(velocity_resolution(det) ==
          doctest::Approx(kSpeedOfLight / (2.0 * 32.0 * 5.8e9 * 0.01)).epsilon(1e-14));

    SensingConfig half_rate = det;
    half_rate.frame_interval_s *= 2.0;
    CHECK(velocity_resolution(half_rate) ==
          doctest::Approx(velocity_resolution(det) / 2.0).epsilon(1e-14));

    const SensingConfig idle = idle_preset();
    CHECK(velocity_resolution(idle) == doctest::Approx(0.00808).epsilon(2e-3));
}

TEST_CASE("maximum unambiguous velocity") {
    const SensingConfig det = detection_preset();
    CHECK(max_unambiguous_velocity(det) == doctest::Approx(1.293).epsilon(1e-3));
    CHECK(max_unambiguous_velocity(idle_preset()) == doctest::Approx(0.1293).epsilon(1e-3));

    SensingConfig doubled = det;
    doubled.frame_interval_s *= 2.0;
    CHECK(max_unambiguous_velocity(doubled) ==
          doctest::Approx(max_unambiguous_velocity(det) / 2.0).epsilon(1e-14));

    // Structural identity with the velocity resolution.
    CHECK(max_unambiguous_velocity(det) ==
          doctest::Approx(velocity_resolution(det) * 32.0 / 2.0).epsilon(1e-13));
}

TEST_CASE("doppler shift of velocity and inverse") {
    const SensingConfig cfg = detection_preset();
    CHECK(doppler_shift_of_velocity(0.0, cfg) == 0.0);
    CHECK(doppler_shift_of_velocity(1.0, cfg) == doctest::Approx(38.67).epsilon(1e-3));
    for (double v : {-1.1, -0.25, 0.0, 0.4, 1.2}) {
        CHECK(velocity_of_doppler_shift(doppler_shift_of_velocity(v, cfg), cfg) ==
              doctest::Approx(v).epsilon(1e-13));
    }
}

TEST_CASE("derived quantities are strictly positive") {
    for (const auto& cfg : {detection_preset(), idle_preset()}) {
        CHECK(range_resolution(cfg) > 0.0);
        CHECK(velocity_resolution(cfg) > 0.0);
        CHECK(max_unambiguous_velocity(cfg) > 0.0);
    }
}

TEST_CASE("presets validate and differ only in frame rate") {
    SensingConfig det = detection_preset();
    SensingConfig idle = idle_preset();
    det.validate();
    idle.validate();
    CHECK(det.frame_interval_s == doctest::Approx(0.01));
    CHECK(idle.frame_interval_s == doctest::Approx(0.1));
    CHECK(det.num_range_gates() == 9);
    CHECK(det.gate_ranges_m.back() == doctest::Approx(7.5).epsilon(1e-12));
    CHECK(det.snr_window == 20);
    CHECK(det.detection_window == 3);
    CHECK(det.snr_threshold_db == 12.0);
    CHECK(det.majority_window == 3);
    CHECK(det.fir_taps == 64);
}

TEST_CASE("config invariant violations are rejected") {
    SensingConfig cfg = detection_preset();
    cfg.gate_ranges_m[3] = cfg.gate_ranges_m[2];  // not strictly increasing
    CHECK_THROWS_AS(cfg.validate(), Error);

    cfg = detection_preset();
    cfg.majority_window = 4;  // must be odd
    CHECK_THROWS_AS(cfg.validate(), Error);

    cfg = detection_preset();
    cfg.zone_near_max_m = cfg.zone_approach_max_m;
    CHECK_THROWS_AS(cfg.validate(), Error);

    cfg = detection_preset();
    cfg.snr_window = cfg.detection_window - 1;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("config serialization round-trips bit-exactly") {
    SensingConfig cfg = detection_preset();
    cfg.subcarrier_spacing_hz = 78125.000000001;
    cfg.snr_threshold_db = 10.0 + 1e-13;
    cfg.fir_cutoff = 0.013333333333333334;
    const std::string text = serialize_config(cfg);
    const SensingConfig back = apply_config_text(detection_preset(), text, "<round-trip>");
    CHECK(back.subcarrier_spacing_hz == cfg.subcarrier_spacing_hz);
    CHECK(back.snr_threshold_db == cfg.snr_threshold_db);
    CHECK(back.fir_cutoff == cfg.fir_cutoff);
    CHECK(serialize_config(back) == text);
}

TEST_CASE("unknown config keys are errors") {
    CHECK_THROWS_WITH_AS(
        apply_config_text(detection_preset(), "frame_rate_hz = 100\n", "<test>"),
        doctest::Contains("unknown config key"), Error);
}

TEST_CASE("config overrides") {
    const SensingConfig cfg = apply_override(detection_preset(), "snr_threshold_db=10");
    CHECK(cfg.snr_threshold_db == 10.0);
    CHECK_THROWS_AS(apply_override(detection_preset(), "nonsense"), Error);
}
