#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <vector>

namespace toa::detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Twiddle table w[k] = exp(-2*pi*i*k/n), k in [0, n/2). Each factor is
// evaluated directly from its angle so stage errors do not accumulate the
// way a w *= wlen recurrence would. Cached per size, one cache per thread.
inline const std::vector<std::complex<double>>& twiddles(std::size_t n) {
  thread_local std::map<std::size_t, std::vector<std::complex<double>>> cache;
  auto& table = cache[n];
  if (table.empty() && n > 1) {
    table.resize(n / 2);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k)
      table[k] = std::polar(1.0, step * static_cast<double>(k));
  }
  return table;
}

/// In-place radix-2 FFT. Forward uses exp(-2*pi*i*jk/n); the inverse
/// conjugates the twiddles and divides by n. Requires power-of-two size.
inline void fft(std::span<std::complex<double>> a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  const auto& w = twiddles(n);

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> tw =
            inverse ? std::conj(w[k * stride]) : w[k * stride];
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * tw;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }

  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv_n;
  }
}

}  // namespace toa::detail
