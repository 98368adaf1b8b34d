#include "fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace esola::detail {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

void fft_inplace(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("FFT size must be a power of two");
    }

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }

    for (std::size_t half = 1; half < n; half <<= 1) {
        const double angle = -std::numbers::pi / static_cast<double>(half);
        const std::complex<double> step(std::cos(angle), std::sin(angle));
        for (std::size_t block = 0; block < n; block += 2 * half) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t i = 0; i < half; ++i) {
                const std::complex<double> even = data[block + i];
                const std::complex<double> odd = data[block + i + half] * w;
                data[block + i] = even + odd;
                data[block + i + half] = even - odd;
                w *= step;
            }
        }
    }
}

} // namespace esola::detail
