#include "rfds/rfds.hpp"

#include <cmath>
#include <sstream>

#include "rfds/fft.hpp"
#include "rfds/kv.hpp"

namespace rfds {

namespace {

std::vector<double> subcarrier_window(const SensingConfig& cfg) {
    std::vector<double> w(cfg.num_subcarriers, 1.0);
    if (cfg.subcarrier_window == SubcarrierWindow::Hann) {
        const double denom = static_cast<double>(cfg.num_subcarriers) - 1.0;
        for (std::size_t n = 0; n < cfg.num_subcarriers; ++n)
            w[n] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(n) / denom);
    }
    return w;
}

}  // namespace

GateExtractor::GateExtractor(const SensingConfig& config) : gates_(config.gate_ranges_m) {
    const std::size_t n = config.num_subcarriers;
    const std::vector<double> w = subcarrier_window(config);
    steering_.resize(gates_.size());
    for (std::size_t g = 0; g < gates_.size(); ++g) {
        steering_[g].resize(n);
        // Conjugate of the round-trip delay phase at this gate range.
        const double k = 4.0 * kPi * config.subcarrier_spacing_hz * gates_[g] / kSpeedOfLight;
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = k * static_cast<double>(i);
            steering_[g][i] = w[i] * cplx(std::cos(ang), std::sin(ang));
        }
    }
}

cplx GateExtractor::extract(const std::vector<cplx>& frame_samples, std::size_t gate,
                            OpCounter& ops) const {
    const auto& steer = steering_[gate];
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < steer.size(); ++i) acc += frame_samples[i] * steer[i];
    ops.extract_multiplies += steer.size();
    return acc;
}

GateSeries extract_gate(const std::vector<CsiFrame>& frames, double gate_range_m,
                        const SensingConfig& config, OpCounter* ops) {
    SensingConfig cfg = config;
    cfg.gate_ranges_m = {gate_range_m};
    GateExtractor ex(cfg);
    OpCounter local;
    GateSeries series;
    series.gate_index = 0;
    series.gate_range_m = gate_range_m;
    series.samples.reserve(frames.size());
    for (const auto& f : frames) series.samples.push_back(ex.extract(f.samples, 0, local));
    if (ops) *ops += local;
    return series;
}

GateSeries apply_mti(const GateSeries& series, const MtiFilter& filter, OpCounter* ops) {
    GateSeries out = series;
    MtiStream stream(filter);
    for (std::size_t m = 0; m < series.samples.size(); ++m)
        out.samples[m] = stream.push(series.samples[m]);
    out.warmup_samples = std::min(series.samples.size(), filter.warmup_samples());
    if (ops) ops->mti_multiplies += filter.taps() * series.samples.size();
    return out;
}

std::vector<CsiFrame> dc_removal(const std::vector<CsiFrame>& frames,
                                 std::size_t block_frames) {
    if (frames.size() < block_frames)
        throw Error::data("dc_removal: fewer frames than one block");
    std::vector<CsiFrame> out = frames;
    const std::size_t n = frames.front().samples.size();
    for (std::size_t start = 0; start < frames.size(); start += block_frames) {
        const std::size_t end = std::min(start + block_frames, frames.size());
        const double count = static_cast<double>(end - start);
        for (std::size_t i = 0; i < n; ++i) {
            cplx mean(0.0, 0.0);
            for (std::size_t m = start; m < end; ++m) mean += frames[m].samples[i];
            mean /= count;
            for (std::size_t m = start; m < end; ++m) out[m].samples[i] -= mean;
        }
    }
    return out;
}

std::vector<double> doppler_spectrum(const std::vector<cplx>& series, std::size_t fft_len,
                                     SlowTimeWindow window, OpCounter* ops) {
    if (series.size() < fft_len)
        throw Error::data("doppler_spectrum: series shorter than the Doppler window");
    std::vector<cplx> block(series.end() - static_cast<std::ptrdiff_t>(fft_len),
                            series.end());
    if (window == SlowTimeWindow::Hann) {
        const double denom = static_cast<double>(fft_len) - 1.0;
        for (std::size_t m = 0; m < fft_len; ++m)
            block[m] *= 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(m) / denom);
    }
    fft::transform(block, false);
    if (ops) ops->doppler_fft_multiplies += fft::complex_multiplies(fft_len);

    const double scale = 1.0 / static_cast<double>(fft_len);  // 1/sqrt(M) squared
    std::vector<double> power(fft_len);
    // fftshift: zero Doppler lands on bin fft_len/2.
    const std::size_t half = fft_len / 2;
    for (std::size_t b = 0; b < fft_len; ++b) {
        const std::size_t src = (b + half) % fft_len;
        power[b] = power_db(std::norm(block[src]) * scale);
    }
    return power;
}

void TimeDopplerMap::update(double time_s, std::vector<double> spectrum_db) {
    window_times_s.push_back(time_s);
    spectra_db.push_back(std::move(spectrum_db));
    while (spectra_db.size() > capacity) {
        spectra_db.pop_front();
        window_times_s.pop_front();
    }
}

std::string time_doppler_csv(const TimeDopplerMap& map) {
    std::ostringstream out;
    out << "time_s,velocity_mps,power_db\n";
    char buf[128];
    for (std::size_t r = 0; r < map.spectra_db.size(); ++r) {
        for (std::size_t b = 0; b < map.spectra_db[r].size(); ++b) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", map.window_times_s[r],
                          map.velocity_axis_mps[b], map.spectra_db[r][b]);
            out << buf;
        }
    }
    return out.str();
}

ClutterFilter clutter_filter_from_string(const std::string& s) {
    if (s == "mti") return ClutterFilter::Mti;
    if (s == "dc") return ClutterFilter::DcRemoval;
    if (s == "none") return ClutterFilter::None;
    throw Error::usage("unknown clutter filter '" + s + "' (expected mti, dc or none)");
}

std::string to_string(ClutterFilter f) {
    switch (f) {
        case ClutterFilter::Mti: return "mti";
        case ClutterFilter::DcRemoval: return "dc";
        case ClutterFilter::None: return "none";
    }
    return "mti";
}

RfdsPipeline::RfdsPipeline(const SensingConfig& config, PipelineOptions options)
    : cfg_(config),
      opts_(options),
      extractor_(config),
      filter_(MtiFilter::design(config.fir_taps, config.fir_cutoff)) {
    cfg_.validate();
    if (opts_.sync) sync_ = std::make_unique<Synchronizer>(cfg_);
    const std::size_t gates = cfg_.num_range_gates();
    for (std::size_t g = 0; g < gates; ++g) mti_streams_.emplace_back(filter_);
    gate_recent_.resize(gates);
    block_buf_.resize(gates);
    maps_.resize(gates);
    const std::vector<double> axis = velocity_axis(cfg_);
    for (std::size_t g = 0; g < gates; ++g) {
        maps_[g].gate_index = g;
        maps_[g].gate_range_m = cfg_.gate_ranges_m[g];
        maps_[g].capacity = cfg_.snr_window;
        maps_[g].velocity_axis_mps = axis;
    }
}

std::size_t RfdsPipeline::warmup_frames() const {
    const std::size_t warmup =
        (opts_.clutter == ClutterFilter::Mti) ? cfg_.fir_taps - 1 : 0;
    return warmup + cfg_.doppler_frames;
}

void RfdsPipeline::append_valid(std::size_t gate, cplx sample) {
    auto& recent = gate_recent_[gate];
    recent.push_back(sample);
    while (recent.size() > 2 * cfg_.doppler_frames) recent.pop_front();
}

std::vector<WindowOutput> RfdsPipeline::push_frame(const CsiFrame& frame) {
    if (frame.samples.size() != cfg_.num_subcarriers)
        throw Error::data("pipeline: frame sample count does not match config");
    CsiFrame synced;
    const CsiFrame* input = &frame;
    if (sync_) {
        synced = sync_->process(frame);
        input = &synced;
    }

    const std::size_t gates = cfg_.num_range_gates();
    const std::size_t m = cfg_.doppler_frames;
    // All gate chains warm up in lockstep; warm-up outputs stay out of the
    // Doppler windows instead of being zero-filled.
    const bool warmup = opts_.clutter == ClutterFilter::Mti &&
                        mti_streams_.front().produced() < filter_.warmup_samples();
    std::size_t appended = 0;
    for (std::size_t g = 0; g < gates; ++g) {
        cplx s = extractor_.extract(input->samples, g, ops_);
        switch (opts_.clutter) {
            case ClutterFilter::Mti:
                s = mti_streams_[g].push(s);
                ops_.mti_multiplies += filter_.taps();
                if (!warmup) {
                    append_valid(g, s);
                    appended = 1;
                }
                break;
            case ClutterFilter::DcRemoval: {
                // Mean removal over consecutive non-overlapping M-frame
                // blocks; a finished block releases M corrected samples.
                auto& buf = block_buf_[g];
                buf.push_back(s);
                if (buf.size() == m) {
                    cplx mean(0.0, 0.0);
                    for (const cplx& v : buf) mean += v;
                    mean /= static_cast<double>(m);
                    for (const cplx& v : buf) append_valid(g, v - mean);
                    buf.clear();
                    appended = m;
                }
                break;
            }
            case ClutterFilter::None:
                append_valid(g, s);
                appended = 1;
                break;
        }
    }
    ++frames_consumed_;

    for (std::size_t i = 0; i < appended; ++i) {
        // Timestamp of the frame that produced each released sample.
        const std::size_t lag = appended - 1 - i;
        valid_times_.push_back(input->timestamp_s -
                               static_cast<double>(lag) * cfg_.frame_interval_s);
    }
    while (valid_times_.size() > 2 * m) valid_times_.pop_front();
    valid_samples_ += appended;

    std::vector<WindowOutput> outputs;
    while (true) {
        const std::size_t next_end = m + windows_emitted_ * cfg_.doppler_hop_frames;
        if (valid_samples_ < next_end) break;

        WindowOutput out;
        out.window_index = windows_emitted_;
        const std::size_t kept = valid_times_.size();
        const std::size_t base = valid_samples_ - kept;  // absolute index of deque front
        // Windows are stamped at their temporal center: that is the time the
        // spectral estimate refers to.
        out.time_s = valid_times_[next_end - 1 - base] -
                     0.5 * static_cast<double>(m - 1) * cfg_.frame_interval_s;
        out.spectra_db.resize(gates);
        for (std::size_t g = 0; g < gates; ++g) {
            const auto& recent = gate_recent_[g];
            const std::size_t start = next_end - m - base;
            std::vector<cplx> window_block(recent.begin() + static_cast<std::ptrdiff_t>(start),
                                           recent.begin() + static_cast<std::ptrdiff_t>(start + m));
            out.spectra_db[g] =
                doppler_spectrum(window_block, m, SlowTimeWindow::Rectangular, &ops_);
            maps_[g].update(out.time_s, out.spectra_db[g]);
        }
        ++windows_emitted_;
        outputs.push_back(std::move(out));
    }
    return outputs;
}

}  // namespace rfds
