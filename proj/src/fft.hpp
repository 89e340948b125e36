#pragma once

// Thin RAII wrapper over FFTW's complex 1-D transforms.

#include <complex>
#include <vector>

namespace kneser::detail {

// Unnormalized forward DFT: X_n = sum_k x_k exp(-2 pi i n k / N).
std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& x);

// Unnormalized inverse DFT: x_k = sum_n X_n exp(+2 pi i n k / N).
std::vector<std::complex<double>> fft_backward(const std::vector<std::complex<double>>& x);

}  // namespace kneser::detail
