#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rfds/types.hpp"

namespace rfds {

enum class SubcarrierWindow : std::uint8_t { Rectangular = 0, Hann = 1 };

std::string to_string(SubcarrierWindow w);
SubcarrierWindow subcarrier_window_from_string(const std::string& s);

/// Full parameter set of the sensing engine. Immutable value object once
/// validated; every module reads from it and none mutates it.
///
/// Units are part of the field names. All fields can be overridden through
/// config files (`key = value` lines) or CLI `--override`; see config_io.
struct SensingConfig {
    // Signal geometry
    std::size_t num_subcarriers = 2048;       ///< subcarriers per frame (N)
    double subcarrier_spacing_hz = 78125.0;   ///< spacing between subcarriers
    double carrier_frequency_hz = 5.8e9;      ///< RF carrier
    double frame_interval_s = 0.01;           ///< time between frames (1/frame rate)

    // Doppler processing
    std::size_t doppler_frames = 32;          ///< slow-time FFT length (frames per spectrum)
    std::size_t doppler_hop_frames = 8;       ///< new frames between successive spectra
    SubcarrierWindow subcarrier_window = SubcarrierWindow::Rectangular;

    // Range gates
    std::vector<double> gate_ranges_m;        ///< gate centers, strictly increasing

    // Clutter filter
    std::size_t fir_taps = 64;                ///< MTI filter length
    double fir_cutoff = 0.01;                 ///< normalized cutoff, cycles/frame

    // Detection
    std::size_t snr_window = 20;              ///< per-gate peak-power history length (windows)
    std::size_t detection_window = 3;         ///< spectra averaged before peak pick
    double snr_threshold_db = 12.0;
    std::size_t majority_window = 3;          ///< decisions in the majority vote (odd)
    double clip_margin_db = 3.0;              ///< clip bound above raw mean in the noise floor

    // Synchronization
    std::size_t phase_history = 8;            ///< frames in the rolling phase reference
    double phase_quantum_rad = kPi / 64.0;    ///< phase-correction quantization step
    std::size_t upsample_factor = 16;         ///< delay refinement resolution (1/U sample)
    bool sync_delay_freeze = false;           ///< estimate delay once instead of per frame

    // Zones and mode switching
    double zone_near_max_m = 2.0;
    double zone_approach_max_m = 5.0;
    std::size_t idle_to_detection_hits = 1;
    std::size_t detection_to_idle_misses = 10;

    /// Report the combined transitional class instead of the approach/leave split.
    bool collapse_transitional = false;

    std::size_t num_range_gates() const { return gate_ranges_m.size(); }
    double bandwidth_hz() const { return static_cast<double>(num_subcarriers) * subcarrier_spacing_hz; }

    /// Throws Error::data with the offending field on any invariant violation.
    void validate() const;
};

/// Preset populated with the dual-mode system parameters: 100 Hz frames,
/// 32-frame Doppler window, 160 MHz bandwidth at 5.8 GHz, 9 gates at the
/// native range-resolution pitch, 12 dB threshold.
SensingConfig detection_preset();

/// Same as detection_preset() but at the 10 Hz idle frame rate.
SensingConfig idle_preset();

SensingConfig preset_by_name(const std::string& name);

/// Derive the idle-side companion of a detection-rate config (10x frame interval).
SensingConfig to_idle_rate(const SensingConfig& cfg, double rate_ratio = 10.0);

// Derived radar quantities. All strictly positive for a valid config.

/// Range bin width: c / (2 N df).
double range_resolution(const SensingConfig& cfg);

/// Doppler velocity bin width: c / (2 M fc T).
double velocity_resolution(const SensingConfig& cfg);

/// Half the unambiguous velocity span: c / (4 fc T).
double max_unambiguous_velocity(const SensingConfig& cfg);

/// Doppler shift of a radial velocity (monostatic round trip): 2 v fc / c.
/// Positive velocity means increasing range.
double doppler_shift_of_velocity(double velocity_mps, const SensingConfig& cfg);

/// Inverse of doppler_shift_of_velocity.
double velocity_of_doppler_shift(double doppler_hz, const SensingConfig& cfg);

/// Centered velocity axis for an M-bin Doppler spectrum: bin b maps to
/// (b - M/2) * velocity_resolution.
std::vector<double> velocity_axis(const SensingConfig& cfg);

/// Time-ordered capture: config + frames + optional ground truth.
struct CsiCapture {
    SensingConfig config;
    std::vector<CsiFrame> frames;
    std::vector<Label> labels;

    /// Checks frame sample counts and timestamp spacing (1% jitter tolerance).
    void validate() const;
};

}  // namespace rfds
