#pragma once

#include "ts4/core.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace ts4::transient {

struct SpectrogramConfig {
    std::size_t window_len_samples = 2;
    std::size_t hop_samples = 2;
    std::size_t fft_size = 256;
    bool magnitude = true; // false: power spectrum
};

struct SpectrogramGrid {
    Eigen::MatrixXd magnitudes;     // F bins x T columns
    std::vector<double> bin_freqs;  // cycles/sample, [0, 0.5]
    std::vector<std::size_t> col_times; // 0-based first sample of each frame
};

struct TransientConfig {
    double mean_threshold = 50.0;
    double std_threshold = 80.0;
    std::size_t k_clusters = 3;
    std::size_t min_cluster_members = 2;
};

/// Inclusive 0-based sample range.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const Span&, const Span&) = default;
};

struct TransientMap {
    std::vector<Span> spans;
    Series difference; // transient-only residual, zero outside spans
    Series cleaned;    // spans replaced by straight lines
    std::vector<std::size_t> detected_columns;
};

struct ColumnStats {
    double mean = 0.0;
    double std = 0.0;
};

struct KMeansResult {
    std::vector<std::size_t> assignment;
    std::vector<double> centroids; // ascending
    std::size_t iterations = 0;
};

void validate(const SpectrogramConfig& cfg);
void validate(const TransientConfig& cfg);

/// Columns start at sample t*hop; the final frame is zero-padded when it runs
/// past the end so that every sample falls in some column.
/// Throws SeriesTooShort when N < window_len.
SpectrogramGrid spectrogram(const Series& s, const SpectrogramConfig& cfg);

/// Population mean and standard deviation over the bins of each column.
std::vector<ColumnStats> column_stats(const SpectrogramGrid& g);

/// Lloyd iteration on scalars with k-means++ seeding. Stops when no centroid
/// moves by 1e-9 or after 100 iterations. Empty clusters are re-seeded from the
/// point farthest from its centroid. Clusters are relabelled by ascending centroid.
/// Throws TooFewPoints when values.size() < k.
KMeansResult kmeans_1d(const std::vector<double>& values, std::size_t k, RngSeed seed);

/// Replaces each span by the straight line joining the samples just outside
/// it. A span touching either end of the series anchors on that end sample.
std::vector<double> interpolate_spans(const std::vector<double>& x, const std::vector<Span>& spans);

TransientMap detect_transients(const Series& s, const SpectrogramConfig& sp_cfg, const TransientConfig& tr_cfg,
                               RngSeed seed);

} // namespace ts4::transient
