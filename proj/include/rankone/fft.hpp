#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rankone {

/// In-place iterative radix-2 FFT; size must be a power of two.
/// sign = -1 forward (e^{-i...}), +1 inverse (unnormalized).
inline void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: size must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/// Linear convolution of two complex sequences via zero-padded FFT.
inline std::vector<std::complex<double>> fft_convolve(
    const std::vector<std::complex<double>>& x,
    const std::vector<std::complex<double>>& y) {
    const size_t want = x.size() + y.size() - 1;
    size_t n = 1;
    while (n < want) n <<= 1;
    std::vector<std::complex<double>> fx(n), fy(n);
    std::copy(x.begin(), x.end(), fx.begin());
    std::copy(y.begin(), y.end(), fy.begin());
    fft_radix2(fx, -1);
    fft_radix2(fy, -1);
    for (size_t i = 0; i < n; ++i) fx[i] *= fy[i];
    fft_radix2(fx, +1);
    const double inv = 1.0 / static_cast<double>(n);
    std::vector<std::complex<double>> out(want);
    for (size_t i = 0; i < want; ++i) out[i] = fx[i] * inv;
    return out;
}

} // namespace rankone
