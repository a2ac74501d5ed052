#pragma once

// Internal power-of-two FFT used by the spectral registration engine. Pure
// functions, no shared plan state, safe for concurrent use.

#include <complex>
#include <vector>

namespace panopose::detail {

bool is_pow2(int n);
int next_pow2(int n);

/// In-place iterative radix-2 transform; n must be a power of two.
/// The inverse transform includes the 1/n normalization.
void fft_1d(std::complex<double>* data, int n, bool inverse);

/// Row-column 2D transform of a rows x cols row-major buffer; both dimensions
/// must be powers of two.
void fft_2d(std::vector<std::complex<double>>& data, int rows, int cols, bool inverse);

}  // namespace panopose::detail
