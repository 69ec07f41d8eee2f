#include "rfds/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rfds/kv.hpp"
#include "rfds/rng.hpp"

namespace rfds {

double Rng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 1e-300) u1 = next_double();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * kPi * u2);
}

double TargetTrack::base_range_at(double t) const {
    const auto& wp = waypoints;
    if (t <= wp.front().first) return wp.front().second;
    if (t >= wp.back().first) return wp.back().second;
    std::size_t hi = 1;
    while (wp[hi].first < t) ++hi;
    const auto& a = wp[hi - 1];
    const auto& b = wp[hi];
    const double f = (t - a.first) / (b.first - a.first);
    return a.second + f * (b.second - a.second);
}

double TargetTrack::base_velocity_at(double t) const {
    const auto& wp = waypoints;
    if (t <= wp.front().first || t >= wp.back().first) return 0.0;
    std::size_t hi = 1;
    while (wp[hi].first < t) ++hi;
    const auto& a = wp[hi - 1];
    const auto& b = wp[hi];
    return (b.second - a.second) / (b.first - a.first);
}

double TargetTrack::range_at(double t) const {
    double r = base_range_at(t);
    if (micro_motion) {
        r += micro_motion->breath_amplitude_m *
             std::sin(2.0 * kPi * micro_motion->breath_rate_hz * t);
    }
    return r;
}

double TargetTrack::velocity_at(double t) const {
    double v = base_velocity_at(t);
    if (micro_motion) {
        v += micro_motion->breath_amplitude_m * 2.0 * kPi * micro_motion->breath_rate_hz *
             std::cos(2.0 * kPi * micro_motion->breath_rate_hz * t);
    }
    return v;
}

void TargetTrack::validate(double duration_s) const {
    if (waypoints.size() < 2) throw Error::data("target: needs at least two waypoints");
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        if (waypoints[i].second < 0.0) throw Error::data("target: waypoint range must be >= 0");
        if (i > 0 && !(waypoints[i].first > waypoints[i - 1].first))
            throw Error::data("target: waypoint times must be strictly increasing");
    }
    if (waypoints.front().first > 0.0 || waypoints.back().first < duration_s)
        throw Error::data("target: waypoints must cover the capture duration");
    if (micro_motion && micro_motion->breath_amplitude_m < 0.0)
        throw Error::data("target: breath_amplitude_m must be >= 0");
}

void SceneSpec::validate(double duration_s) const {
    if (si_amplitude < 0.0) throw Error::data("scene: si_amplitude must be >= 0");
    if (noise_power < 0.0) throw Error::data("scene: noise_power must be >= 0");
    if (impairments.phase_walk_std_rad < 0.0)
        throw Error::data("scene: phase_walk_std_rad must be >= 0");
    for (const auto& t : targets) t.validate(duration_s);
}

SceneSpec parse_scene(const std::string& text, const std::string& source_name) {
    kv::Doc doc = kv::parse(text, source_name);
    SceneSpec scene;
    for (const auto& e : doc.entries) {
        if (e.key == "si_amplitude") {
            scene.si_amplitude = kv::to_double(e, source_name);
        } else if (e.key == "noise_power") {
            scene.noise_power = kv::to_double(e, source_name);
        } else if (e.key == "delay_offset_samples") {
            scene.impairments.delay_offset_samples = kv::to_double(e, source_name);
        } else if (e.key == "phase_walk_std_rad") {
            scene.impairments.phase_walk_std_rad = kv::to_double(e, source_name);
        } else {
            throw Error::data(source_name + ":" + std::to_string(e.line) +
                              ": unknown scene key '" + e.key + "'");
        }
    }
    for (const auto& b : doc.blocks) {
        if (b.name != "target")
            throw Error::data(source_name + ":" + std::to_string(b.line) +
                              ": unknown block '" + b.name + "' (expected target)");
        TargetTrack target;
        MicroMotion micro;
        bool has_micro = false;
        for (const auto& e : b.entries) {
            if (e.key == "amplitude") {
                target.amplitude = kv::to_double(e, source_name);
            } else if (e.key == "waypoint") {
                std::istringstream ws(e.value);
                double t = 0.0, r = 0.0;
                if (!(ws >> t >> r) || !(ws >> std::ws).eof())
                    throw Error::data(source_name + ":" + std::to_string(e.line) +
                                      ": waypoint expects '<time_s> <range_m>'");
                target.waypoints.emplace_back(t, r);
            } else if (e.key == "breath_amplitude_m") {
                micro.breath_amplitude_m = kv::to_double(e, source_name);
                has_micro = true;
            } else if (e.key == "breath_rate_hz") {
                micro.breath_rate_hz = kv::to_double(e, source_name);
                has_micro = true;
            } else {
                throw Error::data(source_name + ":" + std::to_string(e.line) +
                                  ": unknown target key '" + e.key + "'");
            }
        }
        if (has_micro) target.micro_motion = micro;
        scene.targets.push_back(std::move(target));
    }
    return scene;
}

SceneSpec load_scene_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error::data("cannot open scene file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str(), path);
}

std::string serialize_scene(const SceneSpec& scene) {
    std::ostringstream out;
    out << kv::format_entry("si_amplitude", kv::format_double(scene.si_amplitude));
    out << kv::format_entry("noise_power", kv::format_double(scene.noise_power));
    out << kv::format_entry("delay_offset_samples",
                            kv::format_double(scene.impairments.delay_offset_samples));
    out << kv::format_entry("phase_walk_std_rad",
                            kv::format_double(scene.impairments.phase_walk_std_rad));
    for (const auto& t : scene.targets) {
        out << "target {\n";
        out << "  " << kv::format_entry("amplitude", kv::format_double(t.amplitude));
        for (const auto& [time, range] : t.waypoints) {
            out << "  "
                << kv::format_entry("waypoint",
                                    kv::format_double(time) + " " + kv::format_double(range));
        }
        if (t.micro_motion) {
            out << "  "
                << kv::format_entry("breath_amplitude_m",
                                    kv::format_double(t.micro_motion->breath_amplitude_m));
            out << "  "
                << kv::format_entry("breath_rate_hz",
                                    kv::format_double(t.micro_motion->breath_rate_hz));
        }
        out << "}\n";
    }
    return out.str();
}

PresenceState true_state(double range_m, double velocity_mps, const SensingConfig& cfg,
                         PresenceState previous) {
    if (range_m > cfg.zone_approach_max_m) return PresenceState::Absent;
    if (range_m <= cfg.zone_near_max_m) return PresenceState::Present;
    const double eps = velocity_resolution(cfg);
    if (std::abs(velocity_mps) < eps) {
        return is_transitional(previous) ? previous : PresenceState::Approaching;
    }
    return velocity_mps < 0.0 ? PresenceState::Approaching : PresenceState::Leaving;
}

CsiCapture generate_capture(const SceneSpec& scene, const SensingConfig& config,
                            double duration_s, std::uint64_t seed) {
    config.validate();
    const double t_frame = config.frame_interval_s;
    const std::size_t m_frames = config.doppler_frames;
    if (duration_s < static_cast<double>(m_frames) * t_frame)
        throw Error::data("generate_capture: duration shorter than one Doppler window");
    scene.validate(duration_s);

    const std::size_t n = config.num_subcarriers;
    const std::size_t frame_count =
        static_cast<std::size_t>(std::floor(duration_s / t_frame + 1e-9));

    CsiCapture cap;
    cap.config = config;
    cap.frames.resize(frame_count);

    const double doppler_scale = 4.0 * kPi * config.carrier_frequency_hz / kSpeedOfLight;
    const double tau_scale = 4.0 * kPi * config.subcarrier_spacing_hz / kSpeedOfLight;

    Rng noise_rng(seed);
    const double sigma = std::sqrt(scene.noise_power / 2.0);

    for (std::size_t m = 0; m < frame_count; ++m) {
        const double t = static_cast<double>(m) * t_frame;
        CsiFrame& frame = cap.frames[m];
        frame.timestamp_s = t;
        frame.samples.assign(n, cplx(scene.si_amplitude, 0.0));

        for (const auto& target : scene.targets) {
            const double r = target.range_at(t);
            const double r0 = target.range_at(0.0);
            // Slow-time phase accumulated from the range history; its rate is
            // the instantaneous Doppler shift.
            const double slow_phase = doppler_scale * (r - r0);
            const cplx slow = target.amplitude * cplx(std::cos(slow_phase), std::sin(slow_phase));
            // Per-subcarrier delay phase: step between adjacent subcarriers.
            const double step = -tau_scale * r;
            const cplx rot(std::cos(step), std::sin(step));
            cplx fast(1.0, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                frame.samples[i] += slow * fast;
                fast *= rot;
            }
        }

        if (scene.noise_power > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                frame.samples[i] += cplx(sigma * noise_rng.next_gaussian(),
                                         sigma * noise_rng.next_gaussian());
            }
        }
    }

    if (scene.impairments.delay_offset_samples != 0.0 ||
        scene.impairments.phase_walk_std_rad > 0.0) {
        cap = apply_impairments(cap, scene.impairments.delay_offset_samples,
                                scene.impairments.phase_walk_std_rad, seed ^ 0xA5A5A5A5ull);
    }

    if (!scene.targets.empty()) {
        cap.labels.resize(frame_count);
        PresenceState prev = PresenceState::Absent;
        for (std::size_t m = 0; m < frame_count; ++m) {
            const double t = static_cast<double>(m) * t_frame;
            double best_r = 0.0, best_v = 0.0;
            bool first = true;
            for (const auto& target : scene.targets) {
                const double r = target.range_at(t);
                if (first || r < best_r) {
                    best_r = r;
                    best_v = target.velocity_at(t);
                    first = false;
                }
            }
            Label& l = cap.labels[m];
            l.time_s = t;
            l.range_m = best_r;
            l.velocity_mps = best_v;
            l.state = true_state(best_r, best_v, config, prev);
            prev = l.state;
        }
    }
    return cap;
}

CsiCapture apply_impairments(const CsiCapture& capture, double delay_offset_samples,
                             double phase_walk_std_rad, std::uint64_t phase_walk_seed) {
    CsiCapture out = capture;
    const std::size_t n = capture.config.num_subcarriers;

    Rng walk_rng(phase_walk_seed);
    double walk = 0.0;
    for (std::size_t m = 0; m < out.frames.size(); ++m) {
        if (phase_walk_std_rad > 0.0)
            walk += phase_walk_std_rad * walk_rng.next_gaussian();
        const cplx frame_rot(std::cos(walk), std::sin(walk));

        auto& samples = out.frames[m].samples;
        if (delay_offset_samples != 0.0) {
            const double step = -2.0 * kPi * delay_offset_samples / static_cast<double>(n);
            const cplx rot(std::cos(step), std::sin(step));
            cplx ramp(1.0, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                samples[i] *= ramp * frame_rot;
                ramp *= rot;
            }
        } else if (phase_walk_std_rad > 0.0) {
            for (auto& s : samples) s *= frame_rot;
        }
    }
    return out;
}

}  // namespace rfds
