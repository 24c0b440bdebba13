#ifndef AUTOMATTE_DETAIL_FFT_HPP
#define AUTOMATTE_DETAIL_FFT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "automatte/error.hpp"

// Complex FFT for arbitrary lengths: iterative radix-2 plus Bluestein's
// chirp-z fallback, so image dimensions need not be powers of two.

namespace automatte::detail {

namespace fftimpl {

constexpr double kPi = 3.141592653589793238462643383279502884;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2 * kPi / static_cast<double>(len) * (inverse ? 1 : -1);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Bluestein chirp-z transform; computes the same DFT for any length.
inline void fft_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the chirp angle in range without precision loss
        std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        double ang = kPi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = std::complex<double>(std::cos(ang), (inverse ? 1 : -1) * std::sin(ang));
    }
    std::vector<std::complex<double>> fa(m), fb(m);
    for (std::size_t k = 0; k < n; ++k) fa[k] = a[k] * chirp[k];
    fb[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) fb[k] = fb[m - k] = std::conj(chirp[k]);
    fft_pow2(fa, false);
    fft_pow2(fb, false);
    for (std::size_t k = 0; k < m; ++k) fa[k] *= fb[k];
    fft_pow2(fa, true);
    double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = fa[k] * scale * chirp[k];
}

} // namespace fftimpl

// In-place DFT; the inverse applies the 1/n factor.
inline void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (fftimpl::is_pow2(n))
        fftimpl::fft_pow2(a, inverse);
    else
        fftimpl::fft_bluestein(a, inverse);
    if (inverse) {
        double scale = 1.0 / static_cast<double>(n);
        for (auto& v : a) v *= scale;
    }
}

// Row-column 2-D transform on a row-major grid.
inline void fft_2d(std::vector<std::complex<double>>& grid, int width, int height, bool inverse) {
    if (static_cast<std::size_t>(width) * height != grid.size())
        throw InvalidArgument("fft_2d: size mismatch");
    std::vector<std::complex<double>> line(std::max(width, height));
    for (int y = 0; y < height; ++y) {
        line.assign(grid.begin() + static_cast<std::size_t>(y) * width,
                    grid.begin() + static_cast<std::size_t>(y + 1) * width);
        fft(line, inverse);
        std::copy(line.begin(), line.end(), grid.begin() + static_cast<std::size_t>(y) * width);
    }
    for (int x = 0; x < width; ++x) {
        line.resize(height);
        for (int y = 0; y < height; ++y) line[y] = grid[static_cast<std::size_t>(y) * width + x];
        fft(line, inverse);
        for (int y = 0; y < height; ++y) grid[static_cast<std::size_t>(y) * width + x] = line[y];
    }
}

} // namespace automatte::detail

#endif
