#pragma once

#include <cstddef>
#include <vector>

#include "rfds/types.hpp"

namespace rfds {

/// Frequency response of a real FIR: sum_k b_k exp(-j w k); w in rad/frame.
cplx fir_frequency_response(const std::vector<double>& coeffs, double omega_per_frame);

/// High-pass FIR clutter filter for slow-time (per range gate) processing.
/// Designed by spectral inversion of a Hann-windowed-sinc low-pass, with the
/// residual coefficient mean removed so the DC null is exact: sum(b) == 0 to
/// machine precision. Even lengths are linear-phase Type II designs and carry
/// a structural null at the slow-time Nyquist rate as well.
class MtiFilter {
  public:
    /// taps >= 2, cutoff in (0, 0.5) cycles/frame.
    static MtiFilter design(std::size_t taps, double cutoff_cycles_per_frame);

    const std::vector<double>& coefficients() const { return coeffs_; }
    std::size_t taps() const { return coeffs_.size(); }
    double cutoff() const { return cutoff_; }

    /// Exact evaluation of sum_k b_k exp(-j w k); w in rad/frame.
    cplx frequency_response(double omega_per_frame) const;

    /// Direct-form convolution over a slow-time series, zero initial state.
    /// Output length equals input length; the first taps-1 samples are
    /// filter warm-up.
    std::vector<cplx> apply(const std::vector<cplx>& series) const;

    std::size_t warmup_samples() const { return coeffs_.size() - 1; }

  private:
    std::vector<double> coeffs_;
    double cutoff_ = 0.0;
};

/// Streaming form of MtiFilter::apply for one gate: push one input sample,
/// get one output sample. Performs exactly taps real-coefficient complex
/// multiplies per sample. Outputs with index < taps-1 are warm-up.
class MtiStream {
  public:
    explicit MtiStream(const MtiFilter& filter)
        : coeffs_(filter.coefficients()), delay_(coeffs_.size(), cplx(0.0, 0.0)) {}

    cplx push(cplx x) {
        delay_[pos_] = x;
        cplx acc(0.0, 0.0);
        std::size_t idx = pos_;
        for (double b : coeffs_) {
            acc += b * delay_[idx];
            idx = (idx == 0) ? delay_.size() - 1 : idx - 1;
        }
        pos_ = (pos_ + 1) % delay_.size();
        ++produced_;
        return acc;
    }

    /// Index of the next output sample (0-based); outputs below taps-1 are
    /// still inside the warm-up span.
    std::size_t produced() const { return produced_; }

  private:
    std::vector<double> coeffs_;
    std::vector<cplx> delay_;
    std::size_t pos_ = 0;
    std::size_t produced_ = 0;
};

}  // namespace rfds
