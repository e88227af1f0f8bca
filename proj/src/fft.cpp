#include "ts4/fft.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace ts4::fft {

std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& x)
{
    Eigen::FFT<double> engine;
    std::vector<std::complex<double>> out;
    engine.fwd(out, x);
    return out;
}

std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& x)
{
    Eigen::FFT<double> engine;
    std::vector<std::complex<double>> out;
    engine.inv(out, x);
    return out;
}

std::vector<double> magnitude_spectrum(const std::vector<double>& frame, std::size_t size)
{
    std::vector<std::complex<double>> padded(size);
    for (std::size_t i = 0; i < frame.size() && i < size; ++i) padded[i] = frame[i];
    const auto spectrum = forward(padded);
    std::vector<double> mags(size / 2 + 1);
    for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::abs(spectrum[k]);
    return mags;
}

} // namespace ts4::fft
