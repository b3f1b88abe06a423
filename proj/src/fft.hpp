#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace radar_ood {

// In-place forward DFT, radix-2 Cooley-Tukey, no normalization factor.
// Length must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& x);

// Rotate so that bin 0 lands at index n/2 (zero-Doppler centering).
template <typename T>
[[nodiscard]]
std::vector<T> fftshift(const std::vector<T>& x) {
    const std::size_t n = x.size();
    std::vector<T> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[(k + n / 2) % n] = x[k];
    return out;
}

} // namespace radar_ood
