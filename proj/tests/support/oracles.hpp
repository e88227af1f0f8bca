#pragma once

// Reference implementations used only by the tests. Each one takes a
// different route from the library code it checks.

#include "ts4/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace ts4::testing {

inline Series make_series(std::vector<double> v, double rate = 30.0)
{
    return Series{std::move(v), rate, Channel::Mono};
}

inline std::vector<double> sinusoid(std::size_t n, double period, double amplitude = 1.0, double phase = 0.0)
{
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t)
        v[t] = amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period + phase);
    return v;
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sigma = 1.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, sigma);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

inline std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> v(n);
    double x = d(rng) / std::sqrt(1.0 - phi * phi);
    for (double& out : v) {
        out = x;
        x = phi * x + d(rng);
    }
    return v;
}

inline double rms(const std::vector<double>& v)
{
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc / static_cast<double>(v.size()));
}

inline double rms_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc / static_cast<double>(a.size()));
}

/// rms(a - b) / rms(b), falling back to the absolute value when b is zero.
inline double relative_rms(const std::vector<double>& a, const std::vector<double>& b)
{
    const double ref = rms(b);
    const double d = rms_diff(a, b);
    return ref > 0.0 ? d / ref : d;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b)
{
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

/// |X[k]| by the defining sum, k = 0..size/2.
inline std::vector<double> direct_dft_magnitudes(const std::vector<double>& frame, std::size_t size)
{
    std::vector<double> mags(size / 2 + 1);
    for (std::size_t k = 0; k < mags.size(); ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t n = 0; n < frame.size(); ++n)
            acc += frame[n] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * n) /
                                                  static_cast<double>(size));
        mags[k] = std::abs(acc);
    }
    return mags;
}

/// Minimum-cost monotone alignment found by enumerating every path.
inline double brute_force_dtw(const std::vector<double>& a, const std::vector<double>& b)
{
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double cost) {
        cost += std::abs(a[i] - b[j]);
        if (i + 1 == a.size() && j + 1 == b.size()) {
            best = std::min(best, cost);
            return;
        }
        if (i + 1 < a.size()) walk(i + 1, j, cost);
        if (j + 1 < b.size()) walk(i, j + 1, cost);
        if (i + 1 < a.size() && j + 1 < b.size()) walk(i + 1, j + 1, cost);
    };
    walk(0, 0, 0.0);
    return best;
}

/// Hankel projection onto the chosen eigenvectors followed by anti-diagonal
/// averaging with explicit cell counting.
inline std::vector<double> diagonal_average_oracle(const std::vector<double>& x, std::size_t m,
                                                   const Eigen::MatrixXd& eigvecs, const std::vector<std::size_t>& comps)
{
    const std::size_t n = x.size();
    const std::size_t rows = n - m + 1;
    Eigen::MatrixXd y(rows, m);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < m; ++c) y(r, c) = x[r + c];
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(rows, m);
    for (std::size_t k : comps) {
        const Eigen::VectorXd e = eigvecs.col(static_cast<Eigen::Index>(k));
        proj += (y * e) * e.transpose();
    }
    std::vector<double> sum(n, 0.0);
    std::vector<double> count(n, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < m; ++c) {
            sum[r + c] += proj(r, c);
            count[r + c] += 1.0;
        }
    for (std::size_t i = 0; i < n; ++i) sum[i] /= count[i];
    return sum;
}

/// np.interp-style evaluation: xp increasing, fp values.
inline double interp_at(double x, const std::vector<double>& xp, const std::vector<double>& fp)
{
    if (x <= xp.front()) return fp.front();
    if (x >= xp.back()) return fp.back();
    const auto it = std::upper_bound(xp.begin(), xp.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xp.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xp[lo]) / (xp[hi] - xp[lo]);
    return fp[lo] * (1.0 - w) + fp[hi] * w;
}

/// Stretch `values` onto `target` points spanning the same [0, 1] duration.
inline std::vector<double> stretch_oracle(const std::vector<double>& values, std::size_t target)
{
    std::vector<double> xp(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        xp[i] = values.size() == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(values.size() - 1);
    std::vector<double> out(target);
    for (std::size_t i = 0; i < target; ++i)
        out[i] = interp_at(static_cast<double>(i) / static_cast<double>(target - 1), xp, values);
    return out;
}

/// Eigenvalues of a symmetric 2x2 matrix in closed form, descending.
inline std::pair<double, double> eig2x2(double a, double b, double d)
{
    const double mean = 0.5 * (a + d);
    const double r = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    return {mean + r, mean - r};
}

/// Biased ACF by the defining sum, for cross-checking.
inline std::vector<double> acf_oracle(const std::vector<double>& x, std::size_t max_lag)
{
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    std::vector<double> r(max_lag + 1);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (std::size_t t = 0; t + lag < x.size(); ++t) acc += (x[t] - mean) * (x[t + lag] - mean);
        r[lag] = acc / denom;
    }
    return r;
}

/// Sine of amplitude 30 (period 40, zero phase) plus an added +120
/// rectangular pulse over 1-based samples 60..65 (0-based 59..64), with
/// seeded noise. The sine is near its zero crossing under the pulse.
struct PulseSignal {
    std::vector<double> samples;
    std::size_t pulse_start = 59; // 0-based, inclusive
    std::size_t pulse_end = 64;
};

inline PulseSignal pulse_signal(std::uint64_t seed, std::size_t n = 200, double noise_sigma = 0.5,
                                double pulse_height = 120.0, double phase = 0.0)
{
    PulseSignal p;
    p.samples = sinusoid(n, 40.0, 30.0, phase);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (double& v : p.samples) v += noise(rng);
    for (std::size_t i = p.pulse_start; i <= p.pulse_end; ++i) p.samples[i] += pulse_height;
    return p;
}

/// True when a + b reproduces x up to one rounding at the operands' magnitude.
inline bool sums_to_within_ulp(double a, double b, double x)
{
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(x)});
    const double ulp = std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale;
    return std::abs((a + b) - x) <= ulp;
}

} // namespace ts4::testing
