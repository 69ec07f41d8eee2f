#include "rfds/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rfds/kv.hpp"

namespace rfds {

namespace {

const Label& label_at(const std::vector<Label>& labels, double t) {
    // Labels are time-ordered; pick the nearest one.
    auto it = std::lower_bound(labels.begin(), labels.end(), t,
                               [](const Label& l, double v) { return l.time_s < v; });
    if (it == labels.begin()) return *it;
    if (it == labels.end()) return labels.back();
    const Label& hi = *it;
    const Label& lo = *(it - 1);
    return (hi.time_s - t < t - lo.time_s) ? hi : lo;
}

}  // namespace

EvalResult evaluate_timeline(const PresenceTimeline& timeline,
                             const std::vector<Label>& labels) {
    EvalResult r;
    if (timeline.empty() || labels.empty()) return r;

    std::uint64_t correct = 0;
    std::array<std::uint64_t, 4> state_correct{};
    for (const TimelineRow& row : timeline) {
        const Label& truth = label_at(labels, row.time_s);
        const auto li = static_cast<std::size_t>(truth.state);
        const auto pi = static_cast<std::size_t>(row.state);
        ++r.confusion[li][pi];
        ++r.label_counts[li];
        if (li == pi) {
            ++correct;
            ++state_correct[li];
        }
    }
    r.rows = timeline.size();
    r.overall_accuracy_pct = 100.0 * static_cast<double>(correct) /
                             static_cast<double>(timeline.size());
    for (std::size_t s = 0; s < 4; ++s) {
        r.per_state_accuracy_pct[s] =
            r.label_counts[s] == 0 ? 0.0
                                   : 100.0 * static_cast<double>(state_correct[s]) /
                                         static_cast<double>(r.label_counts[s]);
    }

    // State-change events with their horizons.
    struct Event {
        double time = 0.0;
        double horizon = 0.0;
        PresenceState state = PresenceState::Absent;
    };
    std::vector<Event> events;
    for (std::size_t i = 1; i < labels.size(); ++i) {
        if (labels[i].state != labels[i - 1].state)
            events.push_back({labels[i].time_s, labels.back().time_s, labels[i].state});
    }
    for (std::size_t i = 0; i + 1 < events.size(); ++i) events[i].horizon = events[i + 1].time;

    double latency_sum = 0.0;
    for (const Event& ev : events) {
        double latency = ev.horizon - ev.time;  // penalty when never matched
        for (const TimelineRow& row : timeline) {
            if (row.time_s < ev.time) continue;
            if (row.time_s > ev.horizon) break;
            if (row.state == ev.state) {
                latency = row.time_s - ev.time;
                break;
            }
        }
        latency_sum += latency;
        r.max_latency_s = std::max(r.max_latency_s, latency);
        ++r.latency_events;
    }
    if (r.latency_events > 0)
        r.mean_latency_s = latency_sum / static_cast<double>(r.latency_events);
    return r;
}

std::string report_kv(const RunReport& report) {
    std::ostringstream out;
    auto num = [&](const std::string& k, double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        out << kv::format_entry(k, buf);
    };
    auto integer = [&](const std::string& k, std::uint64_t v) {
        out << kv::format_entry(k, std::to_string(v));
    };

    integer("frames", report.frames);
    integer("timeline_rows", report.timeline_rows);
    integer("mode_switches", report.mode_switches);
    num("runtime_s", report.runtime_s);
    out << kv::format_entry("has_labels", report.has_labels ? "true" : "false");
    if (report.has_labels) {
        num("overall_accuracy_pct", report.eval.overall_accuracy_pct);
        const char* names[4] = {"absent", "approaching", "leaving", "present"};
        for (std::size_t s = 0; s < 4; ++s) {
            num(std::string("accuracy_") + names[s] + "_pct",
                report.eval.per_state_accuracy_pct[s]);
            integer(std::string("label_count_") + names[s], report.eval.label_counts[s]);
        }
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t p = 0; p < 4; ++p)
                integer(std::string("confusion_") + names[a] + "_" + names[p],
                        report.eval.confusion[a][p]);
        integer("latency_events", report.eval.latency_events);
        num("mean_latency_s", report.eval.mean_latency_s);
        num("max_latency_s", report.eval.max_latency_s);
    }
    integer("rfds_extract_multiplies", report.rfds_ops.extract_multiplies);
    integer("rfds_mti_multiplies", report.rfds_ops.mti_multiplies);
    integer("rfds_doppler_multiplies", report.rfds_ops.doppler_fft_multiplies);
    integer("rfds_total_multiplies", report.rfds_ops.total());
    integer("rdm_ops_per_block", report.rdm_ops_per_block);
    integer("rdm_ops_continuous", report.rdm_ops_continuous);
    if (report.rfds_ops.total() > 0 && report.rdm_ops_continuous > 0) {
        num("rdm_to_rfds_ratio", static_cast<double>(report.rdm_ops_continuous) /
                                     static_cast<double>(report.rfds_ops.total()));
    }
    return out.str();
}

}  // namespace rfds
