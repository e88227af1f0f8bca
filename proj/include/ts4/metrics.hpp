#pragma once

#include "ts4/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ts4::metrics {

/// A percent change, or the raw difference when the reference is zero.
struct PercentDelta {
    double value = 0.0;
    bool zero_denominator = false;
};

struct FidelityReport {
    PercentDelta delta_mean_pct;
    PercentDelta delta_std_pct;
    double acf_rmse = 0.0;
    double dtw_pct = 0.0;
    std::string pair_id;
};

/// Mean and population standard deviation computed over the sorted samples,
/// so any permutation of a series yields bit-identical values.
double stable_mean(const std::vector<double>& x);
double stable_std(const std::vector<double>& x);

PercentDelta delta_mean_pct(const Series& orig, const Series& synth);
PercentDelta delta_std_pct(const Series& orig, const Series& synth);

/// Biased normalised autocorrelation for lags 0..max_lag.
/// Throws ConstantSeries for zero variance, InvalidArgument for max_lag >= N.
std::vector<double> acf(const Series& s, std::size_t max_lag);

/// RMS difference of |ACF| over lags 0..max_lag; defaults to min(N) - 1.
double acf_rmse(const Series& orig, const Series& synth, std::optional<std::size_t> max_lag = std::nullopt);

/// Unconstrained DTW with cost |a-b| and steps (1,0), (0,1), (1,1).
double dtw_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Zero-mean, unit-std copy (population std). Throws ConstantSeries.
std::vector<double> z_normalize(const std::vector<double>& x);

/// 100 * DTW(z(orig), z(synth)) / len(orig).
double dtw_pct(const Series& orig, const Series& synth);

FidelityReport fidelity(const Series& orig, const Series& synth, std::optional<std::size_t> max_lag = std::nullopt,
                        std::string pair_id = {});

/// Median of a non-empty range; mean of the two middle values for even sizes.
double median(std::vector<double> values);

} // namespace ts4::metrics
