#include "rfds/baseline.hpp"

#include <cmath>
#include <sstream>

#include "rfds/fft.hpp"

namespace rfds {

RangeDopplerMap compute_rdm(const std::vector<CsiFrame>& frames, const SensingConfig& cfg,
                            bool remove_dc) {
    const std::size_t m = cfg.doppler_frames;
    const std::size_t n = cfg.num_subcarriers;
    if (frames.size() != m)
        throw Error::data("compute_rdm: expected exactly " + std::to_string(m) + " frames, got " +
                          std::to_string(frames.size()));
    for (const auto& f : frames)
        if (f.samples.size() != n) throw Error::data("compute_rdm: frame sample count mismatch");

    // Range profiles: scaled inverse transform over subcarriers per frame.
    // profile[k][j] = (1/N) sum_n D(j,n) exp(+j 2 pi n k / N), k -> range k*dr.
    std::vector<std::vector<cplx>> profiles(m);
    for (std::size_t j = 0; j < m; ++j) {
        profiles[j] = fft::inverse_scaled(frames[j].samples);
    }
    if (remove_dc) {
        // Mean over the block per range bin; equivalent to per-subcarrier
        // mean removal by linearity of the transform.
        for (std::size_t k = 0; k < n; ++k) {
            cplx mean(0.0, 0.0);
            for (std::size_t j = 0; j < m; ++j) mean += profiles[j][k];
            mean /= static_cast<double>(m);
            for (std::size_t j = 0; j < m; ++j) profiles[j][k] -= mean;
        }
    }

    RangeDopplerMap map;
    const double dr = range_resolution(cfg);
    map.range_axis_m.resize(n);
    for (std::size_t k = 0; k < n; ++k) map.range_axis_m[k] = dr * static_cast<double>(k);
    map.velocity_axis_mps = velocity_axis(cfg);
    map.power_db.assign(n, std::vector<double>(m, 0.0));

    const double scale = 1.0 / static_cast<double>(m);  // 1/sqrt(M) squared
    const std::size_t half = m / 2;
    std::vector<cplx> slow(m);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < m; ++j) slow[j] = profiles[j][k];
        fft::transform(slow, false);
        for (std::size_t b = 0; b < m; ++b) {
            const std::size_t src = (b + half) % m;
            map.power_db[k][b] = power_db(std::norm(slow[src]) * scale);
        }
    }
    return map;
}

RdmPeak rdm_peak(const RangeDopplerMap& map, bool exclude_zero_doppler) {
    const std::size_t n = map.range_axis_m.size();
    const std::size_t m = map.velocity_axis_mps.size();
    const std::size_t zero_bin = m / 2;

    RdmPeak best;
    bool found = false;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t b = 0; b < m; ++b) {
            if (exclude_zero_doppler && b == zero_bin) continue;
            const double p = map.power_db[k][b];
            bool better = false;
            if (!found) {
                better = true;
            } else if (p > best.power_db) {
                better = true;
            } else if (p == best.power_db) {
                const double abs_v = std::abs(map.velocity_axis_mps[b]);
                const double best_abs_v = std::abs(best.velocity_mps);
                if (map.range_axis_m[k] < best.range_m) better = true;
                else if (map.range_axis_m[k] == best.range_m && abs_v < best_abs_v) better = true;
            }
            if (better) {
                best.range_m = map.range_axis_m[k];
                best.velocity_mps = map.velocity_axis_mps[b];
                best.power_db = p;
                best.range_bin = k;
                best.doppler_bin = b;
                found = true;
            }
        }
    }
    return best;
}

std::uint64_t count_ops_rdm(const SensingConfig& cfg) {
    const double n = static_cast<double>(cfg.num_subcarriers);
    const double m = static_cast<double>(cfg.doppler_frames);
    const double ops = n * (m / 2.0) * std::log2(m) + m * (n / 2.0) * std::log2(n);
    return static_cast<std::uint64_t>(std::llround(ops));
}

std::string rdm_csv(const RangeDopplerMap& map) {
    std::ostringstream out;
    out << "range_m,velocity_mps,power_db\n";
    char buf[128];
    for (std::size_t k = 0; k < map.range_axis_m.size(); ++k) {
        for (std::size_t b = 0; b < map.velocity_axis_mps.size(); ++b) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", map.range_axis_m[k],
                          map.velocity_axis_mps[b], map.power_db[k][b]);
            out << buf;
        }
    }
    return out.str();
}

RdmTracker::RdmTracker(const SensingConfig& cfg, ClutterFilter clutter, bool sync)
    : cfg_(cfg),
      clutter_(clutter),
      filter_(MtiFilter::design(cfg.fir_taps, cfg.fir_cutoff)) {
    if (sync) sync_ = std::make_unique<Synchronizer>(cfg_);
    if (clutter_ == ClutterFilter::Mti) {
        for (std::size_t i = 0; i < cfg_.num_subcarriers; ++i)
            subcarrier_streams_.emplace_back(filter_);
    }
}

std::optional<RdmTracker::TrackPoint> RdmTracker::push_frame(const CsiFrame& frame) {
    CsiFrame working = frame;
    if (sync_) working = sync_->process(frame);

    bool valid = true;
    if (clutter_ == ClutterFilter::Mti) {
        const bool warm = subcarrier_streams_.front().produced() < filter_.warmup_samples();
        for (std::size_t i = 0; i < working.samples.size(); ++i)
            working.samples[i] = subcarrier_streams_[i].push(working.samples[i]);
        valid = !warm;
    }
    if (!valid) return std::nullopt;

    window_.push_back(std::move(working));
    while (window_.size() > cfg_.doppler_frames) window_.pop_front();
    ++valid_samples_;
    if (valid_samples_ < cfg_.doppler_frames) return std::nullopt;
    if ((valid_samples_ - cfg_.doppler_frames) % cfg_.doppler_hop_frames != 0)
        return std::nullopt;

    std::vector<CsiFrame> block(window_.begin(), window_.end());
    const RangeDopplerMap map =
        compute_rdm(block, cfg_, clutter_ == ClutterFilter::DcRemoval);
    ++blocks_;
    const RdmPeak peak = rdm_peak(map, /*exclude_zero_doppler=*/true);
    TrackPoint point;
    // Stamped at the block center, like the gate pipeline's windows.
    point.time_s = block.back().timestamp_s -
                   0.5 * static_cast<double>(cfg_.doppler_frames - 1) * cfg_.frame_interval_s;
    point.range_m = peak.range_m;
    point.velocity_mps = peak.velocity_mps;
    point.power_db = peak.power_db;
    return point;
}

}  // namespace rfds
