#include "rfds/mti.hpp"

#include <cmath>

namespace rfds {

namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

MtiFilter MtiFilter::design(std::size_t taps, double cutoff_cycles_per_frame) {
    if (taps < 2) throw Error::data("mti: taps must be >= 2");
    if (!(cutoff_cycles_per_frame > 0.0) || !(cutoff_cycles_per_frame < 0.5))
        throw Error::data("mti: cutoff must be in (0, 0.5) cycles/frame");

    MtiFilter f;
    f.cutoff_ = cutoff_cycles_per_frame;
    f.coeffs_.resize(taps);
    const double center = (static_cast<double>(taps) - 1.0) / 2.0;
    const double two_fc = 2.0 * cutoff_cycles_per_frame;
    for (std::size_t n = 0; n < taps; ++n) {
        const double x = static_cast<double>(n) - center;
        const double hann =
            0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(n) /
                                 (static_cast<double>(taps) - 1.0));
        // Windowed ideal high-pass: all-pass minus low-pass at the cutoff.
        f.coeffs_[n] = hann * (sinc(x) - two_fc * sinc(two_fc * x));
    }
    // Remove the residual mean so the DC null is exact.
    double mean = 0.0;
    for (double b : f.coeffs_) mean += b;
    mean /= static_cast<double>(taps);
    for (double& b : f.coeffs_) b -= mean;
    return f;
}

cplx fir_frequency_response(const std::vector<double>& coeffs, double omega_per_frame) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double ang = -omega_per_frame * static_cast<double>(k);
        acc += coeffs[k] * cplx(std::cos(ang), std::sin(ang));
    }
    return acc;
}

cplx MtiFilter::frequency_response(double omega_per_frame) const {
    return fir_frequency_response(coeffs_, omega_per_frame);
}

std::vector<cplx> MtiFilter::apply(const std::vector<cplx>& series) const {
    std::vector<cplx> out(series.size(), cplx(0.0, 0.0));
    const std::size_t taps = coeffs_.size();
    for (std::size_t m = 0; m < series.size(); ++m) {
        cplx acc(0.0, 0.0);
        const std::size_t kmax = std::min(taps - 1, m);
        for (std::size_t k = 0; k <= kmax; ++k) acc += coeffs_[k] * series[m - k];
        out[m] = acc;
    }
    return out;
}

}  // namespace rfds
