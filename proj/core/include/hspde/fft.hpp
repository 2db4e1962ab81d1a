#pragma once

#include <complex>

namespace hspde {

// Unscaled complex transforms on n points (n a power of two).
// fft_forward uses the e^{-i x xi} kernel, fft_inverse the e^{+i x xi} kernel.
// Plans are cached per size; execution is thread-safe, planning is serialized.
// `in` and `out` must be distinct buffers.
void fft_forward(const std::complex<double>* in, std::complex<double>* out, int n);
void fft_inverse(const std::complex<double>* in, std::complex<double>* out, int n);

}  // namespace hspde
