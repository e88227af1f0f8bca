#pragma once

#include "ts4/core.hpp"

#include <vector>

namespace ts4::distort {

enum class WarpScale { Expand2x, Contract0_5x, Random };

struct DistortConfig {
    double window_fraction = 0.10;
    WarpScale warp_scale = WarpScale::Random;
};

/// A concrete window drawn for one output: `length` samples from `start`,
/// and the time-scale factor applied by warping.
struct Window {
    std::size_t start = 0;
    std::size_t length = 0;
    double scale = 1.0;
};

void validate(const DistortConfig& cfg);

/// Linear interpolation of `values` (taken as equally spaced over the same
/// duration) onto `target_len` equally spaced points.
std::vector<double> resample_linear(const std::vector<double>& values, std::size_t target_len);

/// Draws the window for a series of length n: length round(fraction*n)
/// (at least 1) and a start uniform over [0, n - length].
Window draw_window(std::size_t n, const DistortConfig& cfg, RngSeed seed);

Series slice_window(const Series& s, const Window& w);
Series warp_window(const Series& s, const Window& w);

/// Throws SeriesTooShort for N < 10.
Series window_slice(const Series& s, const DistortConfig& cfg, RngSeed seed);
Series window_warp(const Series& s, const DistortConfig& cfg, RngSeed seed);

} // namespace ts4::distort
