#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rfds/hpd.hpp"

namespace rfds {

/// Timeline-vs-ground-truth evaluation. Accuracy is per decision epoch; the
/// label at each epoch is the nearest ground-truth annotation in time.
/// Latency is measured per labeled state change: time from the change to the
/// first epoch carrying the new state, capped at the next change (a segment
/// never matched scores its full duration).
struct EvalResult {
    std::size_t rows = 0;
    double overall_accuracy_pct = 0.0;
    std::array<double, 4> per_state_accuracy_pct{};  // indexed by PresenceState
    std::array<std::uint64_t, 4> label_counts{};
    std::array<std::array<std::uint64_t, 4>, 4> confusion{};  // [label][predicted]
    std::size_t latency_events = 0;
    double mean_latency_s = 0.0;
    double max_latency_s = 0.0;
};

EvalResult evaluate_timeline(const PresenceTimeline& timeline,
                             const std::vector<Label>& labels);

/// Machine-readable run summary (flat key-value dialect).
struct RunReport {
    EvalResult eval;
    bool has_labels = false;
    OpCounter rfds_ops;
    std::uint64_t rdm_ops_per_block = 0;
    std::uint64_t rdm_ops_continuous = 0;  ///< one block per frame, the always-on model
    std::size_t frames = 0;
    std::size_t timeline_rows = 0;
    std::size_t mode_switches = 0;
    double runtime_s = 0.0;
};

std::string report_kv(const RunReport& report);

}  // namespace rfds
