#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wavetrend {

// In-place iterative radix-2 FFT. Length must be a power of two.
inline void fft(std::vector<std::complex<double>>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.14159265358979323846;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                auto u = a[i + k];
                auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// Circular autocorrelation c_p = sum_i w[i] w[i+p] for p = 0..n-1, computed by FFT
// with zero padding (so the result is the plain, non-circular correlation).
inline std::vector<double> autocorrelation(const std::vector<double>& w) {
    const std::size_t n = w.size();
    std::size_t m = 1;
    while (m < 2 * n) m <<= 1;
    std::vector<std::complex<double>> a(m);
    for (std::size_t i = 0; i < n; ++i) a[i] = w[i];
    fft(a);
    for (auto& x : a) x = std::complex<double>(std::norm(x), 0.0);
    fft(a, true);
    std::vector<double> c(n);
    for (std::size_t p = 0; p < n; ++p) c[p] = a[p].real();
    return c;
}

}  // namespace wavetrend
