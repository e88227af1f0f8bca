#include "ts4/distort.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace ts4::distort {

namespace {

constexpr std::size_t kMinLength = 10;

void check_length(const Series& s)
{
    require_valid(s);
    if (s.size() < kMinLength)
        throw Error(ErrorCode::SeriesTooShort,
                    "window distortion needs at least " + std::to_string(kMinLength) + " samples, got " +
                        std::to_string(s.size()));
}

void check_window(std::size_t n, const Window& w)
{
    if (w.length == 0 || w.start + w.length > n)
        throw Error(ErrorCode::IndexOutOfRange, "distortion window outside series");
}

} // namespace

void validate(const DistortConfig& cfg)
{
    if (!(cfg.window_fraction > 0.0 && cfg.window_fraction <= 0.5))
        throw Error(ErrorCode::InvalidArgument, "window fraction must be in (0, 0.5]");
}

std::vector<double> resample_linear(const std::vector<double>& values, std::size_t target_len)
{
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "cannot resample an empty sequence");
    std::vector<double> out(target_len, values.front());
    const std::size_t k = values.size();
    if (k == 1 || target_len < 2) return out;
    const double step = static_cast<double>(k - 1) / static_cast<double>(target_len - 1);
    for (std::size_t i = 0; i < target_len; ++i) {
        const double pos = static_cast<double>(i) * step;
        auto lo = static_cast<std::size_t>(std::floor(pos));
        if (lo >= k - 1) {
            out[i] = values[k - 1];
            continue;
        }
        const double frac = pos - static_cast<double>(lo);
        const double a = values[lo];
        const double b = values[lo + 1];
        // Clamp so rounding never leaves the bracketing pair.
        out[i] = frac == 0.0 ? a : std::clamp(a + (b - a) * frac, std::min(a, b), std::max(a, b));
    }
    out.back() = values.back();
    return out;
}

Window draw_window(std::size_t n, const DistortConfig& cfg, RngSeed seed)
{
    validate(cfg);
    const auto length = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.window_fraction * static_cast<double>(n))));
    if (length > n) throw Error(ErrorCode::SeriesTooShort, "window longer than series");

    std::mt19937_64 rng(seed.value);
    std::uniform_int_distribution<std::size_t> start(0, n - length);
    std::bernoulli_distribution expand(0.5);
    Window w;
    w.start = start(rng);
    w.length = length;
    const bool coin = expand(rng);
    switch (cfg.warp_scale) {
    case WarpScale::Expand2x: w.scale = 2.0; break;
    case WarpScale::Contract0_5x: w.scale = 0.5; break;
    case WarpScale::Random: w.scale = coin ? 2.0 : 0.5; break;
    }
    return w;
}

Series slice_window(const Series& s, const Window& w)
{
    check_window(s.size(), w);
    std::vector<double> kept;
    kept.reserve(s.size() - w.length);
    kept.insert(kept.end(), s.samples.begin(), s.samples.begin() + static_cast<std::ptrdiff_t>(w.start));
    kept.insert(kept.end(), s.samples.begin() + static_cast<std::ptrdiff_t>(w.start + w.length), s.samples.end());
    if (kept.empty()) throw Error(ErrorCode::SeriesTooShort, "slice removed every sample");
    return with_samples(s, resample_linear(kept, s.size()));
}

Series warp_window(const Series& s, const Window& w)
{
    check_window(s.size(), w);
    if (!(w.scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "warp scale must be positive");
    const auto first = s.samples.begin() + static_cast<std::ptrdiff_t>(w.start);
    const auto last = first + static_cast<std::ptrdiff_t>(w.length);
    const auto warped_len = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(w.length) * w.scale)));
    const auto warped = resample_linear(std::vector<double>(first, last), warped_len);

    std::vector<double> spliced(s.samples.begin(), first);
    spliced.insert(spliced.end(), warped.begin(), warped.end());
    spliced.insert(spliced.end(), last, s.samples.end());
    return with_samples(s, resample_linear(spliced, s.size()));
}

Series window_slice(const Series& s, const DistortConfig& cfg, RngSeed seed)
{
    check_length(s);
    return slice_window(s, draw_window(s.size(), cfg, seed));
}

Series window_warp(const Series& s, const DistortConfig& cfg, RngSeed seed)
{
    check_length(s);
    return warp_window(s, draw_window(s.size(), cfg, seed));
}

} // namespace ts4::distort
