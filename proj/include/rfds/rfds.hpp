#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rfds/config.hpp"
#include "rfds/mti.hpp"
#include "rfds/sync.hpp"

namespace rfds {

/// Complex-multiply tally for the cost comparison against full-map
/// processing. Plain additive struct so per-worker counters aggregate.
struct OpCounter {
    std::uint64_t extract_multiplies = 0;
    std::uint64_t mti_multiplies = 0;
    std::uint64_t doppler_fft_multiplies = 0;

    std::uint64_t total() const {
        return extract_multiplies + mti_multiplies + doppler_fft_multiplies;
    }
    OpCounter& operator+=(const OpCounter& o) {
        extract_multiplies += o.extract_multiplies;
        mti_multiplies += o.mti_multiplies;
        doppler_fft_multiplies += o.doppler_fft_multiplies;
        return *this;
    }
};

/// Slow-time complex series of one range gate.
struct GateSeries {
    std::size_t gate_index = 0;
    double gate_range_m = 0.0;
    std::vector<cplx> samples;
    std::size_t warmup_samples = 0;  ///< leading samples inside filter warm-up
};

enum class SlowTimeWindow : std::uint8_t { Rectangular = 0, Hann = 1 };

/// Matched-filter gate extraction: phase-compensated summation across
/// subcarriers so reflections from the gate range add coherently. The
/// steering phase for subcarrier n at range R is +2 pi n df (2R/c), the
/// conjugate of the delay phase a reflector at R imprints on the channel.
class GateExtractor {
  public:
    GateExtractor(const SensingConfig& config);

    std::size_t num_gates() const { return gates_.size(); }
    double gate_range(std::size_t i) const { return gates_[i]; }

    /// One slow-time sample for gate i. Counts N complex multiplies.
    cplx extract(const std::vector<cplx>& frame_samples, std::size_t gate,
                 OpCounter& ops) const;

  private:
    std::vector<double> gates_;
    std::vector<std::vector<cplx>> steering_;  // [gate][subcarrier], window folded in
};

/// Batch extraction of a whole gate series from frames (test/oracle path).
GateSeries extract_gate(const std::vector<CsiFrame>& frames, double gate_range_m,
                        const SensingConfig& config, OpCounter* ops = nullptr);

/// Clutter filtering of one gate series: direct-form convolution, first
/// taps-1 outputs flagged as warm-up. Counts taps multiplies per sample.
GateSeries apply_mti(const GateSeries& series, const MtiFilter& filter,
                     OpCounter* ops = nullptr);

/// Remove the per-subcarrier slow-time mean over each block of
/// `block_frames` frames. A trailing partial block uses its own mean.
/// Comparison baseline for the clutter-filter experiment.
std::vector<CsiFrame> dc_removal(const std::vector<CsiFrame>& frames,
                                 std::size_t block_frames);

/// Centered Doppler power spectrum of the latest `fft_len` samples of a
/// series, in dB. The transform is scaled by 1/sqrt(fft_len) so total linear
/// spectrum power equals the windowed slow-time energy (rectangular window).
/// Zero Doppler sits at bin fft_len/2. Throws if the series is shorter than
/// fft_len.
std::vector<double> doppler_spectrum(const std::vector<cplx>& series, std::size_t fft_len,
                                     SlowTimeWindow window = SlowTimeWindow::Rectangular,
                                     OpCounter* ops = nullptr);

/// Sliding window of Doppler spectra for one gate (the time-Doppler map).
struct TimeDopplerMap {
    std::size_t gate_index = 0;
    double gate_range_m = 0.0;
    std::size_t capacity = 0;                  ///< sliding-window depth
    std::deque<double> window_times_s;         ///< oldest -> newest
    std::deque<std::vector<double>> spectra_db;
    std::vector<double> velocity_axis_mps;

    /// Append a spectrum row, evicting the oldest beyond capacity.
    void update(double time_s, std::vector<double> spectrum_db);
};

/// CSV rows `time_s,velocity_mps,power_db` for plotting.
std::string time_doppler_csv(const TimeDopplerMap& map);

enum class ClutterFilter : std::uint8_t { Mti = 0, DcRemoval = 1, None = 2 };

ClutterFilter clutter_filter_from_string(const std::string& s);
std::string to_string(ClutterFilter f);

struct PipelineOptions {
    ClutterFilter clutter = ClutterFilter::Mti;
    bool sync = true;
};

/// One emitted processing window: per-gate centered Doppler spectra.
struct WindowOutput {
    std::size_t window_index = 0;
    double time_s = 0.0;  ///< temporal center of the analysis window
    std::vector<std::vector<double>> spectra_db;  // [gate][doppler bin]
};

/// Streaming engine: sync -> per-gate matched filtering -> per-gate clutter
/// filter -> periodic Doppler spectra. Emits one window per hop once every
/// gate holds a full Doppler window of valid samples. MTI warm-up outputs
/// are excluded; the block-mean clutter mode corrects whole M-frame blocks
/// at a time, so a single pushed frame can release several windows at once.
/// Gate chains are independent and sequential per gate.
class RfdsPipeline {
  public:
    RfdsPipeline(const SensingConfig& config, PipelineOptions options = {});

    std::vector<WindowOutput> push_frame(const CsiFrame& frame);

    const OpCounter& ops() const { return ops_; }
    const SensingConfig& config() const { return cfg_; }
    const std::vector<TimeDopplerMap>& maps() const { return maps_; }
    std::size_t frames_consumed() const { return frames_consumed_; }

    /// Frames required before the first window can be emitted.
    std::size_t warmup_frames() const;

  private:
    void append_valid(std::size_t gate, cplx sample);

    SensingConfig cfg_;
    PipelineOptions opts_;
    GateExtractor extractor_;
    MtiFilter filter_;
    std::unique_ptr<Synchronizer> sync_;
    std::vector<MtiStream> mti_streams_;
    std::vector<std::deque<cplx>> gate_recent_;   // valid samples, capacity 2M
    std::vector<std::vector<cplx>> block_buf_;    // block-mean mode accumulation
    std::deque<double> valid_times_;              // capacity 2M, shared by gates
    std::vector<TimeDopplerMap> maps_;
    OpCounter ops_;
    std::size_t frames_consumed_ = 0;
    std::size_t valid_samples_ = 0;
    std::size_t windows_emitted_ = 0;
};

}  // namespace rfds
