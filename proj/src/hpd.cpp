#include "rfds/hpd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rfds {

double noise_floor(const std::vector<double>& history_db, double clip_margin_db) {
    if (history_db.empty()) throw Error::data("noise_floor: empty history");
    double raw_mean = 0.0;
    for (double p : history_db) raw_mean += p;
    raw_mean /= static_cast<double>(history_db.size());
    const double bound = raw_mean + clip_margin_db;
    double clipped_mean = 0.0;
    for (double p : history_db) clipped_mean += std::min(p, bound);
    return clipped_mean / static_cast<double>(history_db.size());
}

std::size_t select_gate(const std::vector<double>& snr_db) {
    if (snr_db.empty()) throw Error::data("select_gate: no gates");
    std::size_t best = 0;
    for (std::size_t i = 1; i < snr_db.size(); ++i)
        if (snr_db[i] > snr_db[best]) best = i;
    return best;
}

double parabolic_offset(double mag_minus, double mag_center, double mag_plus) {
    // The vertex formula needs the center to be the local maximum; when a
    // neighbor dominates, the true peak lies beyond it and the offset
    // saturates toward that side.
    if (mag_plus > mag_center || mag_minus > mag_center) {
        if (mag_plus == mag_minus) return 0.0;
        return mag_plus > mag_minus ? 0.5 : -0.5;
    }
    const double denom = 2.0 * (mag_minus - 2.0 * mag_center + mag_plus);
    if (denom == 0.0) return 0.0;
    const double p = (mag_minus - mag_plus) / denom;
    return std::clamp(p, -0.5, 0.5);
}

PresenceState classify(double snr_db, double range_m, double velocity_mps,
                       const SensingConfig& cfg, PresenceState previous_transitional) {
    if (!(snr_db > cfg.snr_threshold_db)) return PresenceState::Absent;
    if (range_m > cfg.zone_approach_max_m) return PresenceState::Absent;
    if (range_m <= cfg.zone_near_max_m) return PresenceState::Present;
    if (std::abs(velocity_mps) < velocity_resolution(cfg)) {
        return is_transitional(previous_transitional) ? previous_transitional
                                                      : PresenceState::Approaching;
    }
    return velocity_mps < 0.0 ? PresenceState::Approaching : PresenceState::Leaving;
}

MajorityVoter::MajorityVoter(std::size_t window)
    : buf_(window, PresenceState::Absent) {
    if (window == 0) throw Error::data("majority vote window must be >= 1");
}

PresenceState MajorityVoter::push(PresenceState decision) {
    buf_.pop_front();
    buf_.push_back(decision);

    std::size_t absent = 0, present = 0, transitional = 0;
    for (PresenceState s : buf_) {
        if (s == PresenceState::Absent) ++absent;
        else if (s == PresenceState::Present) ++present;
        else ++transitional;
    }
    const std::size_t top = std::max({absent, present, transitional});
    // Resolve class ties by the most recent vote belonging to a tied class.
    for (auto it = buf_.rbegin(); it != buf_.rend(); ++it) {
        const PresenceState s = *it;
        const std::size_t c = (s == PresenceState::Absent)    ? absent
                              : (s == PresenceState::Present) ? present
                                                              : transitional;
        if (c != top) continue;
        if (s == PresenceState::Absent || s == PresenceState::Present) return s;
        // Transitional class wins: newest transitional vote carries the sign.
        for (auto jt = buf_.rbegin(); jt != buf_.rend(); ++jt)
            if (is_transitional(*jt)) return *jt;
    }
    return PresenceState::Absent;
}

ModeController::ModeController(const SensingConfig& cfg)
    : miss_limit_(cfg.detection_to_idle_misses), hit_limit_(cfg.idle_to_detection_hits) {}

SensingMode ModeController::step(PresenceState decision) {
    return step(decision, decision != PresenceState::Absent);
}

SensingMode ModeController::step(PresenceState decision, bool detection_event) {
    if (mode_ == SensingMode::Detection) {
        if (decision == PresenceState::Absent) {
            if (++misses_ >= miss_limit_) {
                mode_ = SensingMode::Idle;
                misses_ = 0;
                hits_ = 0;
            }
        } else {
            misses_ = 0;
        }
    } else {
        if (detection_event) {
            if (++hits_ >= hit_limit_) {
                mode_ = SensingMode::Detection;
                misses_ = 0;
                hits_ = 0;
            }
        } else {
            hits_ = 0;
        }
    }
    return mode_;
}

Detector::Detector(const SensingConfig& cfg)
    : cfg_(cfg), velocity_axis_(velocity_axis(cfg)) {
    const std::size_t gates = cfg_.num_range_gates();
    peak_history_db_.resize(gates);
    recent_linear_.resize(gates);
    last_snr_db_.assign(gates, 0.0);
}

GateDetection Detector::observe(const WindowOutput& window) {
    const std::size_t gates = cfg_.num_range_gates();
    if (window.spectra_db.size() != gates)
        throw Error::data("detector: window gate count mismatch");
    const std::size_t bins = cfg_.doppler_frames;

    // Detection statistic: mean linear Doppler power over the last
    // detection_window windows, then the peak of that averaged spectrum.
    std::vector<double> det_peak_db(gates);
    std::vector<std::size_t> det_peak_bin(gates);
    std::vector<std::vector<double>> avg_linear(gates);
    for (std::size_t g = 0; g < gates; ++g) {
        std::vector<double> lin(bins);
        for (std::size_t b = 0; b < bins; ++b) lin[b] = db_to_power(window.spectra_db[g][b]);
        auto& recent = recent_linear_[g];
        recent.push_back(std::move(lin));
        while (recent.size() > cfg_.detection_window) recent.pop_front();

        std::vector<double>& avg = avg_linear[g];
        avg.assign(bins, 0.0);
        for (const auto& spec : recent)
            for (std::size_t b = 0; b < bins; ++b) avg[b] += spec[b];
        const double inv = 1.0 / static_cast<double>(recent.size());
        std::size_t best = 0;
        for (std::size_t b = 0; b < bins; ++b) {
            avg[b] *= inv;
            if (avg[b] > avg[best]) best = b;
        }
        det_peak_bin[g] = best;
        det_peak_db[g] = power_db(avg[best]);
    }

    // Noise floors come from the history before this window.
    const bool bootstrap = peak_history_db_.front().size() < cfg_.snr_window;
    for (std::size_t g = 0; g < gates; ++g) {
        if (bootstrap) {
            last_snr_db_[g] = 0.0;
        } else {
            const std::vector<double> history(peak_history_db_[g].begin(),
                                              peak_history_db_[g].end());
            last_snr_db_[g] = det_peak_db[g] - noise_floor(history, cfg_.clip_margin_db);
        }
    }

    // History entries are raw per-window peaks, taken before the
    // detection-window averaging.
    for (std::size_t g = 0; g < gates; ++g) {
        double peak = window.spectra_db[g][0];
        for (std::size_t b = 1; b < bins; ++b) peak = std::max(peak, window.spectra_db[g][b]);
        auto& hist = peak_history_db_[g];
        hist.push_back(peak);
        while (hist.size() > cfg_.snr_window) hist.pop_front();
    }

    const std::size_t winner = select_gate(last_snr_db_);
    GateDetection det;
    det.time_s = window.time_s;
    det.gate_index = winner;
    det.snr_db = last_snr_db_[winner];
    det.peak_power_db = det_peak_db[winner];
    det.bootstrap = bootstrap;
    det.velocity_mps = velocity_axis_[det_peak_bin[winner]];

    // Range readout: quadratic interpolation over gate magnitudes at the
    // winner's Doppler bin. Signal amplitudes come from the current window
    // (the detection averaging would smear a moving target's estimate), and
    // the parabola is centered on the local magnitude peak within the
    // winner's neighborhood: the SNR argmax can sit one gate ahead of the
    // energy when its noise floor is fresher.
    const std::size_t b = det_peak_bin[winner];
    auto amplitude = [&](std::size_t gate) {
        return std::sqrt(db_to_power(window.spectra_db[gate][b]));
    };
    std::size_t center = winner;
    if (winner > 0 && amplitude(winner - 1) > amplitude(center)) center = winner - 1;
    if (winner + 1 < gates && amplitude(winner + 1) > amplitude(center)) center = winner + 1;
    double range = cfg_.gate_ranges_m[center];
    if (center > 0 && center + 1 < gates) {
        const double pitch =
            (cfg_.gate_ranges_m[center + 1] - cfg_.gate_ranges_m[center - 1]) / 2.0;
        range += parabolic_offset(amplitude(center - 1), amplitude(center),
                                  amplitude(center + 1)) *
                 pitch;
    }
    det.range_m = std::max(0.0, range);
    return det;
}

namespace {

struct DecisionMachinery {
    MajorityVoter voter;
    ModeController mode;
    PresenceState prev_transitional = PresenceState::Approaching;
    std::size_t mode_switches = 0;

    explicit DecisionMachinery(const SensingConfig& cfg)
        : voter(cfg.majority_window), mode(cfg) {}

    TimelineRow decide(const GateDetection& det, const SensingConfig& cfg) {
        const SensingMode mode_at = mode.mode();
        PresenceState raw = classify(det.snr_db, det.range_m, det.velocity_mps, cfg,
                                     prev_transitional);
        if (is_transitional(raw)) prev_transitional = raw;
        const PresenceState voted = voter.push(raw);
        const SensingMode after =
            mode.step(voted, voted != PresenceState::Absent ||
                                 det.snr_db > cfg.snr_threshold_db);
        if (after != mode_at) ++mode_switches;
        TimelineRow row;
        row.time_s = det.time_s;
        row.mode = mode_at;
        row.state = voted;
        row.range_m = det.range_m;
        row.velocity_mps = det.velocity_mps;
        row.snr_db = det.snr_db;
        return row;
    }
};

}  // namespace

StreamResult process_stream(const CsiCapture& capture, const SensingConfig& detection_cfg,
                            const SensingConfig& idle_cfg, PipelineOptions options) {
    detection_cfg.validate();
    idle_cfg.validate();
    const double ratio = idle_cfg.frame_interval_s / detection_cfg.frame_interval_s;
    const std::size_t decimation =
        static_cast<std::size_t>(std::max(1.0, std::round(ratio)));

    PipelineOptions chain_opts = options;
    chain_opts.sync = false;  // sync runs once on the full-rate stream
    std::optional<Synchronizer> sync;
    if (options.sync) sync.emplace(detection_cfg);

    RfdsPipeline detection_chain(detection_cfg, chain_opts);
    RfdsPipeline idle_chain(idle_cfg, chain_opts);
    Detector detection_detector(detection_cfg);
    Detector idle_detector(idle_cfg);
    DecisionMachinery machinery(detection_cfg);

    if (capture.frames.size() < detection_chain.warmup_frames())
        throw Error::data("process_stream: capture shorter than the pipeline warm-up (" +
                          std::to_string(detection_chain.warmup_frames()) + " frames)");

    StreamResult result;
    for (std::size_t m = 0; m < capture.frames.size(); ++m) {
        CsiFrame frame = capture.frames[m];
        if (sync) frame = sync->process(frame);

        // Both chains stay warm; only the active mode's epochs become
        // timeline decisions, and only once the chain's detector has left
        // its noise-floor bootstrap.
        for (const auto& w : detection_chain.push_frame(frame)) {
            const GateDetection det = detection_detector.observe(w);
            if (det.bootstrap) continue;
            if (machinery.mode.mode() == SensingMode::Detection)
                result.timeline.push_back(machinery.decide(det, detection_cfg));
        }
        if (m % decimation == 0) {
            for (const auto& w : idle_chain.push_frame(frame)) {
                const GateDetection det = idle_detector.observe(w);
                if (det.bootstrap) continue;
                if (machinery.mode.mode() == SensingMode::Idle)
                    result.timeline.push_back(machinery.decide(det, idle_cfg));
            }
        }
    }
    result.ops = detection_chain.ops();
    result.ops += idle_chain.ops();
    result.mode_switches = machinery.mode_switches;
    result.frames_processed = capture.frames.size();
    result.final_mode = machinery.mode.mode();
    result.detection_maps = detection_chain.maps();
    return result;
}

std::string timeline_csv(const PresenceTimeline& timeline, bool collapse_transitional) {
    std::ostringstream out;
    out << "time_s,mode,state,range_m,velocity_mps,snr_db\n";
    char buf[192];
    for (const TimelineRow& row : timeline) {
        const std::string state = collapse_transitional && is_transitional(row.state)
                                      ? "transitional"
                                      : to_string(row.state);
        std::snprintf(buf, sizeof(buf), "%.6f,%s,%s,%.6f,%.6f,%.6f\n", row.time_s,
                      to_string(row.mode).c_str(), state.c_str(), row.range_m,
                      row.velocity_mps, row.snr_db);
        out << buf;
    }
    return out.str();
}

}  // namespace rfds
