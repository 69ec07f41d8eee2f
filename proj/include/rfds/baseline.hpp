#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfds/config.hpp"
#include "rfds/rfds.hpp"

namespace rfds {

/// Conventional 2D power map over range and velocity. Range axis pitch is
/// the native range resolution; velocity axis is centered.
struct RangeDopplerMap {
    std::vector<double> range_axis_m;        // N bins
    std::vector<double> velocity_axis_mps;   // M bins, centered
    std::vector<std::vector<double>> power_db;  // [range][doppler]
};

/// Full 2D transform of exactly M frames: inverse transform over subcarriers
/// (scaled 1/N, so bin k of a frame is the coherent gate value at k * dr
/// divided by N), forward transform over frames (scaled 1/sqrt(M)). Total
/// linear grid power equals input energy / N. Optional per-subcarrier mean
/// removal over the block before the transforms.
RangeDopplerMap compute_rdm(const std::vector<CsiFrame>& frames, const SensingConfig& cfg,
                            bool remove_dc = false);

struct RdmPeak {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double power_db = 0.0;
    std::size_t range_bin = 0;
    std::size_t doppler_bin = 0;
};

/// Grid argmax; optionally masks the zero-Doppler column. Ties break toward
/// smaller range, then smaller |velocity|, then the lower Doppler bin.
RdmPeak rdm_peak(const RangeDopplerMap& map, bool exclude_zero_doppler);

/// Complex-multiply model of one full 2D-FFT block:
/// N (M/2) log2 M + M (N/2) log2 N.
std::uint64_t count_ops_rdm(const SensingConfig& cfg);

/// CSV rows `range_m,velocity_mps,power_db`.
std::string rdm_csv(const RangeDopplerMap& map);

/// Streaming conventional tracker used for the side-by-side comparison:
/// optional per-subcarrier slow-time clutter filtering, then one RDM + peak
/// readout per hop (the same hop as the gate pipeline, for comparable
/// output cadence).
class RdmTracker {
  public:
    struct TrackPoint {
        double time_s = 0.0;
        double range_m = 0.0;
        double velocity_mps = 0.0;
        double power_db = 0.0;
    };

    RdmTracker(const SensingConfig& cfg, ClutterFilter clutter, bool sync);

    std::optional<TrackPoint> push_frame(const CsiFrame& frame);

    /// 2D-FFT blocks computed so far (for the cost model).
    std::uint64_t blocks_computed() const { return blocks_; }

  private:
    SensingConfig cfg_;
    ClutterFilter clutter_;
    std::unique_ptr<Synchronizer> sync_;
    MtiFilter filter_;
    std::vector<MtiStream> subcarrier_streams_;
    std::deque<CsiFrame> window_;
    std::size_t valid_samples_ = 0;
    std::uint64_t blocks_ = 0;
};

}  // namespace rfds
