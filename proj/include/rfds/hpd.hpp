#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "rfds/config.hpp"
#include "rfds/rfds.hpp"

namespace rfds {

/// Winning-gate readout for one processing window.
struct GateDetection {
    double time_s = 0.0;
    std::size_t gate_index = 0;
    double snr_db = 0.0;
    double range_m = 0.0;         ///< quadratically interpolated
    double velocity_mps = 0.0;    ///< signed velocity of the peak Doppler bin
    double peak_power_db = 0.0;
    bool bootstrap = false;       ///< noise-floor history not yet full
};

/// Clipped noise floor over a per-gate peak-power history (dB domain):
/// each value is clipped to min(P, mean + clip_margin) before re-averaging.
/// History must be non-empty; callers pass the full-length window.
double noise_floor(const std::vector<double>& history_db, double clip_margin_db);

/// Index of the maximum SNR; ties go to the smaller index (nearer gate).
std::size_t select_gate(const std::vector<double>& snr_db);

/// Three-point parabolic vertex offset (in gate-pitch units), clamped to
/// [-0.5, 0.5]. Zero curvature returns 0.
double parabolic_offset(double mag_minus, double mag_center, double mag_plus);

/// Zone + threshold classification. Presence requires SNR strictly above the
/// threshold. The near zone is closed at its upper bound, the approach zone
/// closed at the far bound. Inside the approach zone a velocity smaller in
/// magnitude than the velocity resolution holds `previous_transitional`
/// (Approaching when there is none); otherwise negative velocity (range
/// decreasing) means Approaching and positive means Leaving.
PresenceState classify(double snr_db, double range_m, double velocity_mps,
                       const SensingConfig& cfg, PresenceState previous_transitional);

/// Modal smoothing over the last `window` decisions, Absent-padded at cold
/// start. Approaching/Leaving pool as one transitional class for the vote;
/// a transitional win resolves to the newest transitional vote. Class ties
/// go to the class of the most recent vote among the tied classes.
class MajorityVoter {
  public:
    explicit MajorityVoter(std::size_t window);
    PresenceState push(PresenceState decision);
    const std::deque<PresenceState>& buffer() const { return buf_; }

  private:
    std::deque<PresenceState> buf_;
};

/// Idle <-> Detection switching: in Detection, `detection_to_idle_misses`
/// consecutive Absent decisions drop to Idle (any other decision resets the
/// run); in Idle, `idle_to_detection_hits` detections wake to Detection.
/// Starts in Detection.
///
/// A "detection" while idle is a threshold crossing: the stream layer passes
/// snr > threshold as the detection event, so any motion in the gated span
/// wakes the high-rate mode even before the position estimate settles into a
/// zone. The plain step(decision) form treats any non-Absent decision as the
/// detection event.
class ModeController {
  public:
    explicit ModeController(const SensingConfig& cfg);
    SensingMode step(PresenceState decision);
    SensingMode step(PresenceState decision, bool detection_event);
    SensingMode mode() const { return mode_; }

  private:
    std::size_t miss_limit_;
    std::size_t hit_limit_;
    SensingMode mode_ = SensingMode::Detection;
    std::size_t misses_ = 0;
    std::size_t hits_ = 0;
};

/// Per-chain detection state: gate peak-power histories, detection-window
/// averaging, gate selection and range interpolation. Sequential per stream.
class Detector {
  public:
    explicit Detector(const SensingConfig& cfg);

    /// Consume one processing window. Updates histories and returns the
    /// winning-gate readout. During bootstrap (history shorter than the SNR
    /// window) all gates report SNR 0.
    GateDetection observe(const WindowOutput& window);

    const std::vector<double>& gate_snr_db() const { return last_snr_db_; }

  private:
    SensingConfig cfg_;
    std::vector<double> velocity_axis_;
    std::vector<std::deque<double>> peak_history_db_;
    std::vector<std::deque<std::vector<double>>> recent_linear_;
    std::vector<double> last_snr_db_;
};

struct TimelineRow {
    double time_s = 0.0;
    SensingMode mode = SensingMode::Detection;
    PresenceState state = PresenceState::Absent;
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double snr_db = 0.0;
};

using PresenceTimeline = std::vector<TimelineRow>;

struct StreamResult {
    PresenceTimeline timeline;
    OpCounter ops;                 ///< both chains combined
    std::size_t mode_switches = 0;
    std::size_t frames_processed = 0;
    SensingMode final_mode = SensingMode::Detection;
    std::vector<TimeDopplerMap> detection_maps;  ///< final per-gate maps (CSV export)
};

/// Full end-to-end run: sync -> gate pipeline -> detection, with the
/// adaptive dual-rate regime. The capture is taken at the detection-mode
/// rate; the idle chain consumes every (idle T / detection T)-th frame and
/// stays warm throughout, so decisions during Idle come from the idle-rate
/// chain at its own cadence. Deterministic.
StreamResult process_stream(const CsiCapture& capture, const SensingConfig& detection_cfg,
                            const SensingConfig& idle_cfg, PipelineOptions options = {});

/// CSV rows `time_s,mode,state,range_m,velocity_mps,snr_db`.
std::string timeline_csv(const PresenceTimeline& timeline, bool collapse_transitional);

}  // namespace rfds
