#include "rfds/sync.hpp"

#include <cmath>

#include "rfds/fft.hpp"

namespace rfds {

namespace {

// Candidate lags in tie-break preference order: 0, +1, -1, +2, -2, ...
// Smaller |lag| first, positive before negative.
std::vector<long> lags_by_preference(std::size_t n) {
    std::vector<long> lags;
    lags.reserve(n);
    lags.push_back(0);
    const long half = static_cast<long>(n) / 2;
    for (long k = 1; k <= half; ++k) {
        if (k < half || n % 2 == 1) lags.push_back(k);
        lags.push_back(-k);
    }
    while (lags.size() > n) lags.pop_back();
    return lags;
}

double round_half_away(double x) { return std::round(x); }

}  // namespace

Synchronizer::Synchronizer(const SensingConfig& config, std::vector<cplx> reference_symbol)
    : cfg_(config), reference_(std::move(reference_symbol)) {
    if (reference_.empty()) {
        reference_.assign(cfg_.num_subcarriers, cplx(1.0, 0.0));
    }
    if (reference_.size() != cfg_.num_subcarriers)
        throw Error::data("sync: reference symbol length must equal num_subcarriers");
}

long Synchronizer::coarse_delay(const CsiFrame& frame) const {
    const std::size_t n = cfg_.num_subcarriers;
    std::vector<cplx> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = frame.samples[i] * std::conj(reference_[i]);
    // Unnormalized inverse transform = cross-correlation of the impulse
    // responses at integer lags.
    std::vector<cplx> corr = fft::inverse(std::move(prod));

    double best = 0.0;
    long best_lag = 0;
    bool found = false;
    for (long lag : lags_by_preference(n)) {
        const std::size_t idx = static_cast<std::size_t>((lag + static_cast<long>(n)) %
                                                         static_cast<long>(n));
        const double mag = std::norm(corr[idx]);
        if (!found || mag > best) {
            best = mag;
            best_lag = lag;
            found = true;
        }
    }
    if (best <= 0.0) throw Error::data("sync: no correlation peak (all-zero frame)");
    return best_lag;
}

double Synchronizer::fine_delay(const CsiFrame& frame, long coarse) const {
    const std::size_t u = cfg_.upsample_factor;
    if (u <= 1) return 0.0;
    const std::size_t n = cfg_.num_subcarriers;
    std::vector<cplx> prod(n);
    for (std::size_t i = 0; i < n; ++i) prod[i] = frame.samples[i] * std::conj(reference_[i]);

    // Evaluate the correlation on the fractional grid around the coarse lag.
    // Identical to sampling the U-times zero-padded inverse transform.
    double best = -1.0;
    double best_frac = 0.0;
    auto eval = [&](double frac) {
        const double lambda = static_cast<double>(coarse) + frac;
        cplx acc(0.0, 0.0);
        const double step = 2.0 * kPi * lambda / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = step * static_cast<double>(i);
            acc += prod[i] * cplx(std::cos(ang), std::sin(ang));
        }
        return std::norm(acc);
    };
    // Preference order: 0, +1/U, -1/U, ... keeps ties at the smaller |offset|.
    const long half = static_cast<long>(u) / 2;
    std::vector<long> order;
    order.push_back(0);
    for (long k = 1; k <= half; ++k) {
        if (k < half) order.push_back(k);
        order.push_back(-k);
    }
    for (long k : order) {
        const double frac = static_cast<double>(k) / static_cast<double>(u);
        const double mag = eval(frac);
        if (mag > best) {
            best = mag;
            best_frac = frac;
        }
    }
    if (best <= 0.0) throw Error::data("sync: no correlation peak (all-zero frame)");
    return best_frac;
}

double Synchronizer::frame_mean_phase(const CsiFrame& frame) {
    cplx mean(0.0, 0.0);
    for (const cplx& s : frame.samples) mean += s;
    mean /= static_cast<double>(frame.samples.size());
    if (std::norm(mean) == 0.0)
        throw Error::data("sync: zero mean vector, frame phase undefined");
    return wrap_phase(std::atan2(mean.imag(), mean.real()));
}

double Synchronizer::reference_phase() const {
    double sum_cos = 0.0, sum_sin = 0.0;
    for (double p : phase_history_) {
        sum_cos += std::cos(p);
        sum_sin += std::sin(p);
    }
    if (sum_cos == 0.0 && sum_sin == 0.0) return phase_history_.back();
    return std::atan2(sum_sin, sum_cos);
}

CsiFrame Synchronizer::phase_fix(const CsiFrame& frame) {
    const double theta = frame_mean_phase(frame);
    if (phase_history_.empty()) {
        // First frame seeds the reference and passes through unchanged.
        phase_history_.push_back(theta);
        last_fix_ = 0.0;
        last_residual_ = 0.0;
        return frame;
    }
    const double ref = reference_phase();
    const double delta = wrap_phase(ref - theta);
    const double quantum = cfg_.phase_quantum_rad;
    const double fix = round_half_away(delta / quantum) * quantum;
    last_fix_ = fix;

    CsiFrame out = frame;
    if (fix != 0.0) {
        const cplx rot(std::cos(fix), std::sin(fix));
        for (auto& s : out.samples) s *= rot;
    }
    const double corrected = wrap_phase(theta + fix);
    last_residual_ = std::abs(wrap_phase(corrected - ref));
    phase_history_.push_back(corrected);
    while (phase_history_.size() > cfg_.phase_history) phase_history_.pop_front();
    return out;
}

CsiFrame Synchronizer::process(const CsiFrame& frame) {
    double delay = 0.0;
    if (cfg_.sync_delay_freeze && frozen_delay_.has_value()) {
        delay = *frozen_delay_;
    } else {
        const long coarse = coarse_delay(frame);
        const double fine = fine_delay(frame, coarse);
        delay = static_cast<double>(coarse) + fine;
        if (cfg_.sync_delay_freeze) frozen_delay_ = delay;
    }

    CsiFrame out = frame;
    if (delay != 0.0) {
        const std::size_t n = cfg_.num_subcarriers;
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = 2.0 * kPi * static_cast<double>(i) * delay /
                               static_cast<double>(n);
            out.samples[i] *= cplx(std::cos(ang), std::sin(ang));
        }
    }
    return phase_fix(out);
}

CsiCapture synchronize_capture(const CsiCapture& capture) {
    CsiCapture out = capture;
    Synchronizer sync(capture.config);
    for (auto& frame : out.frames) frame = sync.process(frame);
    return out;
}

}  // namespace rfds
