#pragma once

#include <cstddef>
#include <vector>

#include "rfds/types.hpp"

namespace rfds::fft {

/// In-place unnormalized DFT. Forward kernel exp(-j 2 pi n k / N); the
/// inverse kernel is its conjugate and is also unnormalized, so
/// inverse(forward(x)) == N * x. Power-of-two lengths run radix-2; all other
/// lengths go through the chirp (Bluestein) path built on the radix-2 core.
void transform(std::vector<cplx>& data, bool inverse);

std::vector<cplx> forward(std::vector<cplx> data);

/// Unnormalized inverse (no 1/N).
std::vector<cplx> inverse(std::vector<cplx> data);

/// Inverse including the 1/N factor, so inverse_scaled(forward(x)) == x.
std::vector<cplx> inverse_scaled(std::vector<cplx> data);

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Complex multiplies of a radix-2 N-point transform: (N/2) log2 N. Used by
/// the op-count models; powers of two only.
std::uint64_t complex_multiplies(std::size_t n);

}  // namespace rfds::fft
