#pragma once
// In-place radix-2 FFT with a naive-DFT fallback for non-power-of-two sizes.
// Forward transform uses exp(-i 2 pi v y / M); normalization is the caller's
// business (the far-field code applies 1/sqrt(M) for a Parseval-preserving map).

#include <complex>
#include <vector>

namespace qwalk::detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * 3.141592653589793238462643383279502884 / double(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto t = a[i + k + len / 2] * w;
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
                w *= wl;
            }
        }
    }
}

inline void dft_naive(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t v = 0; v < n; ++v) {
        std::complex<double> s = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            const double ang =
                -2.0 * 3.141592653589793238462643383279502884 * double(v) * double(y) / double(n);
            s += a[y] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[v] = s;
    }
    a.swap(out);
}

// Unnormalized forward DFT of one row.
inline void forward_dft(std::vector<std::complex<double>>& a) {
    if (is_pow2(a.size()))
        fft_radix2(a);
    else
        dft_naive(a);
}

}  // namespace qwalk::detail
