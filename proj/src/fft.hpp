#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mbcp::detail {

// Real-valued inverse transform of a Hermitian spectrum given by its first
// size/2+1 bins: out[k] = sum_j X_j exp(+2 pi i j k / size), unnormalized.
std::vector<double> hermitian_to_real(std::span<const std::complex<double>> half_spectrum,
                                      std::size_t size);

// Linear convolution of two real sequences via zero-padded transforms.
std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b);

}  // namespace mbcp::detail
