#include "ts4/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ts4::metrics {

namespace {

constexpr double kRelativeZero = 1e-12;

double max_abs(const std::vector<double>& x)
{
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

// Neumaier summation over an already sorted sequence.
double compensated_sum(const std::vector<double>& sorted)
{
    double sum = 0.0;
    double carry = 0.0;
    for (double v : sorted) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

bool is_zero_relative(double value, const std::vector<double>& reference)
{
    return std::abs(value) <= kRelativeZero * max_abs(reference);
}

PercentDelta percent_delta(double orig, double synth, bool zero_denominator)
{
    if (zero_denominator) return {synth - orig, true};
    return {100.0 * (synth - orig) / orig, false};
}

} // namespace

double stable_mean(const std::vector<double>& x)
{
    if (x.empty()) throw Error(ErrorCode::InvalidArgument, "mean of empty series");
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    return compensated_sum(sorted) / static_cast<double>(x.size());
}

double stable_std(const std::vector<double>& x)
{
    if (x.empty()) throw Error(ErrorCode::InvalidArgument, "std of empty series");
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const double mean = compensated_sum(sorted) / static_cast<double>(x.size());
    std::vector<double> sq(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) sq[i] = (sorted[i] - mean) * (sorted[i] - mean);
    std::sort(sq.begin(), sq.end());
    return std::sqrt(compensated_sum(sq) / static_cast<double>(x.size()));
}

PercentDelta delta_mean_pct(const Series& orig, const Series& synth)
{
    const double mo = stable_mean(orig.samples);
    const double ms = stable_mean(synth.samples);
    return percent_delta(mo, ms, mo == 0.0 || is_zero_relative(mo, orig.samples));
}

PercentDelta delta_std_pct(const Series& orig, const Series& synth)
{
    const double so = stable_std(orig.samples);
    const double ss = stable_std(synth.samples);
    return percent_delta(so, ss, so == 0.0 || is_zero_relative(so, orig.samples));
}

std::vector<double> acf(const Series& s, std::size_t max_lag)
{
    const std::size_t n = s.size();
    if (max_lag >= n)
        throw Error(ErrorCode::InvalidArgument,
                    "max lag " + std::to_string(max_lag) + " must be below series length " + std::to_string(n));
    double mean = 0.0;
    for (double v : s.samples) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> centred(n);
    for (std::size_t i = 0; i < n; ++i) centred[i] = s.samples[i] - mean;
    double energy = 0.0;
    for (double v : centred) energy += v * v;
    const double floor = kRelativeZero * max_abs(s.samples);
    if (energy == 0.0 || energy <= floor * floor * static_cast<double>(n))
        throw Error(ErrorCode::ConstantSeries, "autocorrelation undefined for a constant series");

    std::vector<double> r(max_lag + 1);
    r[0] = 1.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) acc += centred[t] * centred[t + lag];
        r[lag] = acc / energy;
    }
    return r;
}

double acf_rmse(const Series& orig, const Series& synth, std::optional<std::size_t> max_lag)
{
    const std::size_t shortest = std::min(orig.size(), synth.size());
    if (shortest == 0) throw Error(ErrorCode::InvalidArgument, "empty series");
    const std::size_t lag = max_lag.value_or(shortest - 1);
    if (lag >= shortest) throw Error(ErrorCode::InvalidArgument, "max lag must be below both series lengths");
    const auto ra = acf(orig, lag);
    const auto rb = acf(synth, lag);
    double acc = 0.0;
    for (std::size_t i = 0; i <= lag; ++i) {
        const double d = std::abs(ra[i]) - std::abs(rb[i]);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(lag + 1));
}

double dtw_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "DTW of an empty sequence");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(b.size() + 1, inf);
    std::vector<double> cur(b.size() + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const double cost = std::abs(a[i - 1] - b[j - 1]);
            cur[j] = cost + std::min({prev[j], cur[j - 1], prev[j - 1]});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::vector<double> z_normalize(const std::vector<double>& x)
{
    if (x.size() < 2) throw Error(ErrorCode::SeriesTooShort, "z-normalisation needs at least 2 samples");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(x.size()));
    if (sd == 0.0 || sd <= kRelativeZero * max_abs(x))
        throw Error(ErrorCode::ConstantSeries, "cannot z-normalise a constant series");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) / sd;
    return out;
}

double dtw_pct(const Series& orig, const Series& synth)
{
    const auto a = z_normalize(orig.samples);
    const auto b = z_normalize(synth.samples);
    return 100.0 * dtw_distance(a, b) / static_cast<double>(orig.size());
}

FidelityReport fidelity(const Series& orig, const Series& synth, std::optional<std::size_t> max_lag,
                        std::string pair_id)
{
    FidelityReport r;
    r.delta_mean_pct = delta_mean_pct(orig, synth);
    r.delta_std_pct = delta_std_pct(orig, synth);
    r.acf_rmse = acf_rmse(orig, synth, max_lag);
    r.dtw_pct = dtw_pct(orig, synth);
    r.pair_id = std::move(pair_id);
    return r;
}

double median(std::vector<double> values)
{
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

} // namespace ts4::metrics
