#include "rfds/fft.hpp"

#include <cmath>
#include <cstdint>
#include <map>

namespace rfds::fft {

namespace {

// Twiddle tables per size, built once. Single-threaded access pattern.
const std::vector<cplx>& twiddles(std::size_t n) {
    static std::map<std::size_t, std::vector<cplx>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(n, std::move(w)).first->second;
}

void bit_reverse_permute(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    bit_reverse_permute(a);
    const auto& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx tw = w[k * step];
                if (inverse) tw = std::conj(tw);
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * tw;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

struct ChirpPlan {
    std::size_t conv_len = 0;
    std::vector<cplx> chirp;        // exp(-j pi n^2 / N)
    std::vector<cplx> kernel_fft;   // FFT of the wrapped conjugate chirp
};

const ChirpPlan& chirp_plan(std::size_t n) {
    static std::map<std::size_t, ChirpPlan> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    ChirpPlan plan;
    std::size_t l = 1;
    while (l < 2 * n - 1) l <<= 1;
    plan.conv_len = l;

    plan.chirp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // n^2 mod 2N keeps the trig argument small for large indices.
        const std::uint64_t sq = (static_cast<std::uint64_t>(i) * i) % (2 * n);
        const double ang = -kPi * static_cast<double>(sq) / static_cast<double>(n);
        plan.chirp[i] = cplx(std::cos(ang), std::sin(ang));
    }

    std::vector<cplx> kernel(l, cplx(0.0, 0.0));
    kernel[0] = std::conj(plan.chirp[0]);
    for (std::size_t i = 1; i < n; ++i) {
        kernel[i] = std::conj(plan.chirp[i]);
        kernel[l - i] = std::conj(plan.chirp[i]);
    }
    fft_pow2(kernel, false);
    plan.kernel_fft = std::move(kernel);
    return cache.emplace(n, std::move(plan)).first->second;
}

// Bluestein: X_k = chirp_k * sum_n (x_n chirp_n) conj(chirp)_{k-n}.
void fft_chirp(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (inverse) {
        for (auto& v : a) v = std::conj(v);
        fft_chirp(a, false);
        for (auto& v : a) v = std::conj(v);
        return;
    }
    const ChirpPlan& plan = chirp_plan(n);
    std::vector<cplx> work(plan.conv_len, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) work[i] = a[i] * plan.chirp[i];
    fft_pow2(work, false);
    for (std::size_t i = 0; i < plan.conv_len; ++i) work[i] *= plan.kernel_fft[i];
    fft_pow2(work, true);
    const double scale = 1.0 / static_cast<double>(plan.conv_len);
    for (std::size_t i = 0; i < n; ++i) a[i] = work[i] * scale * plan.chirp[i];
}

}  // namespace

void transform(std::vector<cplx>& data, bool inverse) {
    if (data.size() < 2) return;
    if (is_power_of_two(data.size())) {
        fft_pow2(data, inverse);
    } else {
        fft_chirp(data, inverse);
    }
}

std::vector<cplx> forward(std::vector<cplx> data) {
    transform(data, false);
    return data;
}

std::vector<cplx> inverse(std::vector<cplx> data) {
    transform(data, true);
    return data;
}

std::vector<cplx> inverse_scaled(std::vector<cplx> data) {
    transform(data, true);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
    return data;
}

std::uint64_t complex_multiplies(std::size_t n) {
    std::uint64_t log2n = 0;
    for (std::size_t v = n; v > 1; v >>= 1) ++log2n;
    return static_cast<std::uint64_t>(n) / 2 * log2n;
}

}  // namespace rfds::fft
