#pragma once

#include <complex>
#include <vector>

namespace ts4::fft {

/// Unnormalised forward DFT of any length.
std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& x);

/// Inverse DFT scaled by 1/N.
std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& x);

/// One-sided magnitude spectrum (size/2 + 1 bins) of `frame` zero-padded to `size`.
std::vector<double> magnitude_spectrum(const std::vector<double>& frame, std::size_t size);

} // namespace ts4::fft
