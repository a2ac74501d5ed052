#include "fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace panopose::detail {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_1d(std::complex<double>* data, int n, bool inverse) {
  if (!is_pow2(n)) throw std::invalid_argument("fft size must be a power of two");
  // Bit-reversal permutation.
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? 2.0 : -2.0) * std::numbers::pi / len;
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        const std::complex<double> even = data[i + k];
        const std::complex<double> odd = data[i + k + len / 2] * w;
        data[i + k] = even + odd;
        data[i + k + len / 2] = even - odd;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / n;
    for (int i = 0; i < n; ++i) data[i] *= inv;
  }
}

void fft_2d(std::vector<std::complex<double>>& data, int rows, int cols, bool inverse) {
  if (static_cast<int>(data.size()) != rows * cols)
    throw std::invalid_argument("fft buffer size mismatch");
  for (int r = 0; r < rows; ++r) fft_1d(data.data() + static_cast<std::size_t>(r) * cols, cols, inverse);
  std::vector<std::complex<double>> column(rows);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) column[r] = data[static_cast<std::size_t>(r) * cols + c];
    fft_1d(column.data(), rows, inverse);
    for (int r = 0; r < rows; ++r) data[static_cast<std::size_t>(r) * cols + c] = column[r];
  }
}

}  // namespace panopose::detail
