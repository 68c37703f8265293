#pragma once

// Thin FFTW wrapper. Plans are cached per (dim, N) and executed through the
// new-array interface, which FFTW guarantees to be thread safe.

#include <complex>
#include <span>

namespace freqlab::detail {

// out[m] = sum_j in[j] exp(-2 pi i m.j / N), unnormalized.
void fft_forward(int dim, int n, std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out);
// out[j] = sum_m in[m] exp(+2 pi i m.j / N), unnormalized.
void fft_inverse(int dim, int n, std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out);

}  // namespace freqlab::detail
