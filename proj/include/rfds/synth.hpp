#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rfds/config.hpp"

namespace rfds {

/// Sinusoidal range modulation riding on a target track (respiration model):
/// dR(t) = amplitude * sin(2 pi rate t).
struct MicroMotion {
    double breath_amplitude_m = 0.005;
    double breath_rate_hz = 0.25;
};

/// One moving point reflector described by range waypoints. Range is
/// piecewise-linear between waypoints; radial velocity is the segment slope
/// plus the micro-motion derivative.
struct TargetTrack {
    std::vector<std::pair<double, double>> waypoints;  ///< (time_s, range_m)
    double amplitude = 1.0;                            ///< linear channel gain
    std::optional<MicroMotion> micro_motion;

    double base_range_at(double t) const;
    double base_velocity_at(double t) const;
    double range_at(double t) const;     ///< includes micro-motion
    double velocity_at(double t) const;  ///< includes micro-motion

    void validate(double duration_s) const;
};

struct Impairments {
    double delay_offset_samples = 0.0;   ///< applied as a subcarrier phase ramp
    double phase_walk_std_rad = 0.0;     ///< per-frame random-walk step std-dev
};

/// Declarative scene: targets + static self-interference + noise + hardware
/// impairments. An empty scene (noise and SI only) is valid.
struct SceneSpec {
    std::vector<TargetTrack> targets;
    double si_amplitude = 0.0;   ///< zero-delay, zero-Doppler static path gain
    double noise_power = 0.0;    ///< E|noise|^2 per complex sample
    Impairments impairments;

    void validate(double duration_s) const;
};

/// Parse a scene file: top-level keys si_amplitude, noise_power,
/// delay_offset_samples, phase_walk_std_rad, plus repeated `target { ... }`
/// blocks with amplitude, `waypoint = <time_s> <range_m>` lines and optional
/// breath_amplitude_m / breath_rate_hz.
SceneSpec parse_scene(const std::string& text, const std::string& source_name);
SceneSpec load_scene_file(const std::string& path);
std::string serialize_scene(const SceneSpec& scene);

/// Render a scene into a capture. Deterministic for a fixed seed. Frame m at
/// time mT carries, per subcarrier n,
///   sum_k a_k exp(j phi_k(m)) exp(-j 2 pi n df 2 R_k(mT) / c) + SI + noise
/// where phi_k accumulates the Doppler phase 2 pi (2 fc / c) (R_k(mT) - R_k(0)),
/// which reduces to the constant-Doppler form 2 pi T m f_D for straight-line
/// segments. Ground-truth labels (nearest target) are attached per frame.
CsiCapture generate_capture(const SceneSpec& scene, const SensingConfig& config,
                            double duration_s, std::uint64_t seed);

/// Apply hardware asynchronization to an existing capture: a linear phase
/// ramp exp(-j 2 pi n d / N) across subcarriers plus a cumulative per-frame
/// phase walk applied uniformly to all subcarriers of each frame.
CsiCapture apply_impairments(const CsiCapture& capture, double delay_offset_samples,
                             double phase_walk_std_rad, std::uint64_t phase_walk_seed);

/// Ground-truth presence state for a (range, velocity) sample under the
/// configured zones. `previous` supplies the hold state when the velocity is
/// too small to sign a transitional label.
PresenceState true_state(double range_m, double velocity_mps, const SensingConfig& cfg,
                         PresenceState previous);

}  // namespace rfds
