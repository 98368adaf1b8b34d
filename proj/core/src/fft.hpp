#pragma once

// Minimal iterative radix-2 FFT, enough for short-time spectra.

#include <complex>
#include <cstddef>
#include <vector>

namespace esola::detail {

/// Round up to a power of two.
std::size_t next_pow2(std::size_t n);

/// In-place radix-2 FFT; data.size() must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data);

} // namespace esola::detail
