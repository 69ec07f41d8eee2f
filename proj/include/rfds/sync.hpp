#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "rfds/config.hpp"

namespace rfds {

/// Delay and phase alignment of raw captures. Frames of one stream must be
/// processed in order; distinct streams use independent Synchronizer
/// instances.
///
/// Delay estimation cross-correlates the frame's impulse response against a
/// known reference (default: the all-ones frequency response, an ideal
/// training symbol) and aligns the strongest path to zero delay. The
/// refinement step evaluates the same correlation on a 1/U fractional-lag
/// grid around the coarse peak, which equals band-limited interpolation by
/// frequency-domain zero-padding.
class Synchronizer {
  public:
    explicit Synchronizer(const SensingConfig& config,
                          std::vector<cplx> reference_symbol = {});

    /// Signed integer lag of the correlation peak. Ties break toward the
    /// smaller |lag|, then toward the positive lag. Throws on all-zero frames.
    long coarse_delay(const CsiFrame& frame) const;

    /// Fractional lag in [-0.5, 0.5) at resolution 1/U around `coarse`.
    /// U == 1 returns 0 (no refinement possible).
    double fine_delay(const CsiFrame& frame, long coarse) const;

    /// Angle of the complex mean across subcarriers, in (-pi, pi].
    /// Throws when the mean vector is zero.
    static double frame_mean_phase(const CsiFrame& frame);

    /// Full per-frame correction: delay (unless frozen after the first
    /// estimate) followed by the quantized phase fix. Magnitudes are
    /// preserved exactly by the phase stage.
    CsiFrame process(const CsiFrame& frame);

    /// Phase fix alone (public for the closed-loop tests).
    CsiFrame phase_fix(const CsiFrame& frame);

    double last_phase_fix() const { return last_fix_; }
    std::optional<double> frozen_delay() const { return frozen_delay_; }

    /// Residual |corrected phase - rolling reference| of the most recent
    /// frame, for closed-loop verification.
    double last_phase_residual() const { return last_residual_; }

  private:
    double reference_phase() const;

    SensingConfig cfg_;
    std::vector<cplx> reference_;
    std::deque<double> phase_history_;
    std::optional<double> frozen_delay_;
    double last_fix_ = 0.0;
    double last_residual_ = 0.0;
};

/// Convenience: run delay+phase sync over a whole capture with a fresh state.
CsiCapture synchronize_capture(const CsiCapture& capture);

}  // namespace rfds
