#include "rfds/config.hpp"

#include <algorithm>
#include <cmath>

namespace rfds {

double wrap_phase(double rad) {
    double r = std::fmod(rad, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    if (r > kPi) r -= 2.0 * kPi;
    return r;
}

std::string to_string(PresenceState s) {
    switch (s) {
        case PresenceState::Absent: return "absent";
        case PresenceState::Approaching: return "approaching";
        case PresenceState::Leaving: return "leaving";
        case PresenceState::Present: return "present";
    }
    return "absent";
}

std::string to_string(SensingMode m) {
    return m == SensingMode::Idle ? "idle" : "detection";
}

PresenceState presence_state_from_string(const std::string& s) {
    if (s == "absent") return PresenceState::Absent;
    if (s == "approaching") return PresenceState::Approaching;
    if (s == "leaving") return PresenceState::Leaving;
    if (s == "present") return PresenceState::Present;
    throw Error::data("unknown presence state: '" + s + "'");
}

std::string to_string(SubcarrierWindow w) {
    return w == SubcarrierWindow::Rectangular ? "rect" : "hann";
}

SubcarrierWindow subcarrier_window_from_string(const std::string& s) {
    if (s == "rect" || s == "rectangular") return SubcarrierWindow::Rectangular;
    if (s == "hann") return SubcarrierWindow::Hann;
    throw Error::data("unknown subcarrier window: '" + s + "' (expected rect or hann)");
}

void SensingConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error::data("config: " + msg); };

    if (num_subcarriers < 2) fail("num_subcarriers must be >= 2");
    if (doppler_frames < 2) fail("doppler_frames must be >= 2");
    if (!(subcarrier_spacing_hz > 0.0)) fail("subcarrier_spacing_hz must be > 0");
    if (!(carrier_frequency_hz > 0.0)) fail("carrier_frequency_hz must be > 0");
    if (!(frame_interval_s > 0.0)) fail("frame_interval_s must be > 0");
    if (gate_ranges_m.empty()) fail("gate_ranges_m must list at least one gate");
    for (std::size_t i = 0; i < gate_ranges_m.size(); ++i) {
        if (gate_ranges_m[i] < 0.0) fail("gate_ranges_m must be non-negative");
        if (i > 0 && !(gate_ranges_m[i] > gate_ranges_m[i - 1]))
            fail("gate_ranges_m must be strictly increasing");
    }
    if (doppler_hop_frames < 1) fail("doppler_hop_frames must be >= 1");
    if (fir_taps < 2) fail("fir_taps must be >= 2");
    if (!(fir_cutoff > 0.0) || !(fir_cutoff < 0.5)) fail("fir_cutoff must be in (0, 0.5)");
    if (detection_window < 1) fail("detection_window must be >= 1");
    if (snr_window < detection_window) fail("snr_window must be >= detection_window");
    if (majority_window % 2 == 0) fail("majority_window must be odd");
    if (majority_window < 1) fail("majority_window must be >= 1");
    if (phase_history < 1) fail("phase_history must be >= 1");
    if (!(phase_quantum_rad > 0.0)) fail("phase_quantum_rad must be > 0");
    if (upsample_factor < 1) fail("upsample_factor must be >= 1");
    if (!(zone_near_max_m < zone_approach_max_m))
        fail("zone_near_max_m must be < zone_approach_max_m");
    if (idle_to_detection_hits < 1) fail("idle_to_detection_hits must be >= 1");
    if (detection_to_idle_misses < 1) fail("detection_to_idle_misses must be >= 1");
}

SensingConfig detection_preset() {
    SensingConfig cfg;
    cfg.num_subcarriers = 2048;
    cfg.subcarrier_spacing_hz = 78125.0;  // 2048 * 78.125 kHz = 160 MHz
    cfg.carrier_frequency_hz = 5.8e9;
    cfg.frame_interval_s = 0.01;
    cfg.doppler_frames = 32;
    cfg.doppler_hop_frames = 8;
    // 9 gates at the native range pitch, covering 0 - 7.5 m.
    const double pitch = range_resolution(cfg);
    cfg.gate_ranges_m.clear();
    for (int i = 0; i < 9; ++i) cfg.gate_ranges_m.push_back(pitch * i);
    return cfg;
}

SensingConfig idle_preset() {
    SensingConfig cfg = detection_preset();
    cfg.frame_interval_s = 0.1;
    return cfg;
}

SensingConfig preset_by_name(const std::string& name) {
    if (name == "idle") return idle_preset();
    if (name == "detection") return detection_preset();
    throw Error::usage("unknown preset: '" + name + "' (expected idle or detection)");
}

SensingConfig to_idle_rate(const SensingConfig& cfg, double rate_ratio) {
    SensingConfig idle = cfg;
    idle.frame_interval_s = cfg.frame_interval_s * rate_ratio;
    // Keep idle decisions at a usable wall-clock cadence: low-rate frames
    // stretch the Doppler window tenfold, so the hop shrinks instead, and
    // the wake statistic reads single spectra rather than averaging several
    // seconds of them.
    idle.doppler_hop_frames = std::max<std::size_t>(1, cfg.doppler_hop_frames / 8);
    idle.detection_window = 1;
    return idle;
}

double range_resolution(const SensingConfig& cfg) {
    return kSpeedOfLight / (2.0 * cfg.bandwidth_hz());
}

double velocity_resolution(const SensingConfig& cfg) {
    return kSpeedOfLight /
           (2.0 * static_cast<double>(cfg.doppler_frames) * cfg.carrier_frequency_hz *
            cfg.frame_interval_s);
}

double max_unambiguous_velocity(const SensingConfig& cfg) {
    return kSpeedOfLight / (4.0 * cfg.carrier_frequency_hz * cfg.frame_interval_s);
}

double doppler_shift_of_velocity(double velocity_mps, const SensingConfig& cfg) {
    return 2.0 * velocity_mps * cfg.carrier_frequency_hz / kSpeedOfLight;
}

double velocity_of_doppler_shift(double doppler_hz, const SensingConfig& cfg) {
    return doppler_hz * kSpeedOfLight / (2.0 * cfg.carrier_frequency_hz);
}

std::vector<double> velocity_axis(const SensingConfig& cfg) {
    const std::size_t m = cfg.doppler_frames;
    const double dv = velocity_resolution(cfg);
    std::vector<double> axis(m);
    for (std::size_t b = 0; b < m; ++b) {
        axis[b] = (static_cast<double>(b) - static_cast<double>(m) / 2.0) * dv;
    }
    return axis;
}

void CsiCapture::validate() const {
    config.validate();
    const double t = config.frame_interval_s;
    for (std::size_t m = 0; m < frames.size(); ++m) {
        if (frames[m].samples.size() != config.num_subcarriers)
            throw Error::data("capture: frame " + std::to_string(m) +
                              " has wrong sample count");
        if (frames[m].timestamp_s < 0.0)
            throw Error::data("capture: frame " + std::to_string(m) +
                              " has negative timestamp");
        if (m > 0) {
            const double dt = frames[m].timestamp_s - frames[m - 1].timestamp_s;
            if (std::abs(dt - t) > 0.01 * t)
                throw Error::data("capture: frame spacing at index " + std::to_string(m) +
                                  " deviates more than 1% from the frame interval");
        }
    }
}

}  // namespace rfds
