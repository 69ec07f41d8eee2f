#pragma once

#include <vector>

#include "rfds/rng.hpp"
#include "rfds/types.hpp"

namespace rfds::test {

/// Brute-force DFT oracle, kept independent of the transform under test.
inline std::vector<cplx> dft_naive(const std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = sign * 2.0 * kPi * static_cast<double>(i) *
                               static_cast<double>(k) / static_cast<double>(n);
            acc += x[i] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

inline std::vector<cplx> random_complex(std::size_t n, Rng& rng) {
    std::vector<cplx> v(n);
    for (auto& s : v) s = cplx(rng.next_gaussian(), rng.next_gaussian());
    return v;
}

inline double max_rel_error(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double scale = 0.0;
    for (const auto& v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    return worst;
}

}  // namespace rfds::test
