#include "ts4/transient.hpp"

#include "ts4/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace ts4::transient {

void validate(const SpectrogramConfig& cfg)
{
    if (cfg.window_len_samples < 1) throw Error(ErrorCode::InvalidArgument, "spectrogram window must be >= 1");
    if (cfg.hop_samples < 1) throw Error(ErrorCode::InvalidArgument, "spectrogram hop must be >= 1");
    if (cfg.fft_size < 2 || cfg.window_len_samples > cfg.fft_size)
        throw Error(ErrorCode::InvalidArgument, "fft size must be >= 2 and >= the window length");
}

void validate(const TransientConfig& cfg)
{
    if (!(cfg.mean_threshold > 0.0) || !(cfg.std_threshold > 0.0))
        throw Error(ErrorCode::InvalidArgument, "transient thresholds must be positive");
    if (cfg.k_clusters < 2) throw Error(ErrorCode::InvalidArgument, "k_clusters must be >= 2");
    if (cfg.min_cluster_members < 1) throw Error(ErrorCode::InvalidArgument, "min_cluster_members must be >= 1");
}

SpectrogramGrid spectrogram(const Series& s, const SpectrogramConfig& cfg)
{
    validate(cfg);
    const std::size_t n = s.size();
    const std::size_t win = cfg.window_len_samples;
    const std::size_t hop = cfg.hop_samples;
    if (n < win)
        throw Error(ErrorCode::SeriesTooShort,
                    "series of length " + std::to_string(n) + " shorter than window " + std::to_string(win));

    const std::size_t cols = 1 + (n - win + hop - 1) / hop;
    const std::size_t bins = cfg.fft_size / 2 + 1;

    SpectrogramGrid g;
    g.magnitudes.resize(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(cols));
    g.bin_freqs.resize(bins);
    for (std::size_t k = 0; k < bins; ++k)
        g.bin_freqs[k] = static_cast<double>(k) / static_cast<double>(cfg.fft_size);
    g.col_times.resize(cols);

    std::vector<double> frame(win);
    for (std::size_t t = 0; t < cols; ++t) {
        const std::size_t start = t * hop;
        g.col_times[t] = start;
        for (std::size_t i = 0; i < win; ++i) frame[i] = start + i < n ? s.samples[start + i] : 0.0;
        const auto mags = fft::magnitude_spectrum(frame, cfg.fft_size);
        for (std::size_t k = 0; k < bins; ++k) {
            const double v = cfg.magnitude ? mags[k] : mags[k] * mags[k];
            g.magnitudes(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) = v;
        }
    }
    return g;
}

std::vector<ColumnStats> column_stats(const SpectrogramGrid& g)
{
    const auto bins = g.magnitudes.rows();
    std::vector<ColumnStats> stats(static_cast<std::size_t>(g.magnitudes.cols()));
    if (bins == 0) return stats;
    for (Eigen::Index t = 0; t < g.magnitudes.cols(); ++t) {
        const auto col = g.magnitudes.col(t);
        const double mean = col.sum() / static_cast<double>(bins);
        const double var = (col.array() - mean).square().sum() / static_cast<double>(bins);
        stats[static_cast<std::size_t>(t)] = {mean, std::sqrt(var)};
    }
    return stats;
}

namespace {

std::size_t nearest(double v, const std::vector<double>& centroids)
{
    std::size_t best = 0;
    double best_d = std::abs(v - centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d = std::abs(v - centroids[c]);
        if (d < best_d) {
            best = c;
            best_d = d;
        }
    }
    return best;
}

std::vector<double> seed_centroids(const std::vector<double>& values, std::size_t k, std::mt19937_64& rng)
{
    const std::size_t n = values.size();
    std::vector<double> centroids;
    centroids.reserve(k);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    centroids.push_back(values[pick(rng)]);

    std::vector<double> d2(n);
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = values[i] - centroids[nearest(values[i], centroids)];
            d2[i] = d * d;
            total += d2[i];
        }
        if (total <= 0.0) {
            // Every point coincides with a centroid; the duplicate stays empty
            // unless Lloyd finds a farthest point later.
            centroids.push_back(centroids.front());
            continue;
        }
        std::uniform_real_distribution<double> u(0.0, total);
        const double r = u(rng);
        double acc = 0.0;
        std::size_t chosen = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (r < acc && d2[i] > 0.0) {
                chosen = i;
                break;
            }
        }
        if (d2[chosen] <= 0.0) {
            // Guard against r landing exactly on the total.
            chosen = static_cast<std::size_t>(std::max_element(d2.begin(), d2.end()) - d2.begin());
        }
        centroids.push_back(values[chosen]);
    }
    return centroids;
}

} // namespace

KMeansResult kmeans_1d(const std::vector<double>& values, std::size_t k, RngSeed seed)
{
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    if (values.size() < k)
        throw Error(ErrorCode::TooFewPoints,
                    std::to_string(values.size()) + " values cannot form " + std::to_string(k) + " clusters");

    constexpr std::size_t kMaxIterations = 100;
    constexpr double kTolerance = 1e-9;

    std::mt19937_64 rng(seed.value);
    std::vector<double> centroids = seed_centroids(values, k, rng);
    const std::size_t n = values.size();
    std::vector<std::size_t> assignment(n);

    std::size_t iter = 0;
    while (iter < kMaxIterations) {
        ++iter;
        for (std::size_t i = 0; i < n; ++i) assignment[i] = nearest(values[i], centroids);

        std::vector<double> sums(k, 0.0);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[assignment[i]] += values[i];
            ++counts[assignment[i]];
        }

        std::vector<double> next = centroids;
        for (std::size_t c = 0; c < k; ++c)
            if (counts[c] > 0) next[c] = sums[c] / static_cast<double>(counts[c]);

        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = std::abs(values[i] - next[assignment[i]]);
                if (d > far_d) {
                    far = i;
                    far_d = d;
                }
            }
            if (far_d > 0.0) {
                --counts[assignment[far]];
                assignment[far] = c;
                counts[c] = 1;
                next[c] = values[far];
            }
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, std::abs(next[c] - centroids[c]));
        centroids = std::move(next);
        if (shift < kTolerance) break;
    }
    for (std::size_t i = 0; i < n; ++i) assignment[i] = nearest(values[i], centroids);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return centroids[a] < centroids[b]; });
    std::vector<std::size_t> relabel(k);
    KMeansResult result;
    result.centroids.resize(k);
    for (std::size_t r = 0; r < k; ++r) {
        relabel[order[r]] = r;
        result.centroids[r] = centroids[order[r]];
    }
    result.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.assignment[i] = relabel[assignment[i]];
    result.iterations = iter;
    return result;
}

std::vector<double> interpolate_spans(const std::vector<double>& x, const std::vector<Span>& spans)
{
    std::vector<double> out = x;
    const std::size_t n = x.size();
    if (n == 0) return out;
    for (const auto& span : spans) {
        if (span.start > span.end || span.end >= n)
            throw Error(ErrorCode::IndexOutOfRange, "span outside series");
        const std::size_t left = span.start > 0 ? span.start - 1 : 0;
        const std::size_t right = span.end + 1 < n ? span.end + 1 : n - 1;
        if (left == right) continue;
        const double x0 = x[left];
        const double x1 = x[right];
        const double width = static_cast<double>(right - left);
        for (std::size_t i = span.start; i <= span.end; ++i)
            out[i] = x0 + (x1 - x0) * (static_cast<double>(i - left) / width);
    }
    return out;
}

TransientMap detect_transients(const Series& s, const SpectrogramConfig& sp_cfg, const TransientConfig& tr_cfg,
                               RngSeed seed)
{
    require_valid(s);
    validate(sp_cfg);
    validate(tr_cfg);

    TransientMap map;
    map.cleaned = s;
    map.difference = with_samples(s, std::vector<double>(s.size(), 0.0));
    const std::size_t n = s.size();
    if (n < sp_cfg.window_len_samples) return map;

    const auto centred = zero_mean(s);
    const SpectrogramGrid grid = spectrogram(centred.series, sp_cfg);
    const auto stats = column_stats(grid);
    const std::size_t cols = stats.size();

    std::vector<double> means(cols);
    for (std::size_t t = 0; t < cols; ++t) means[t] = stats[t].mean;
    const std::size_t k = std::min(tr_cfg.k_clusters, cols);
    const KMeansResult clusters = kmeans_1d(means, k, seed);

    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t t = 0; t < cols; ++t) {
        if (stats[t].mean < tr_cfg.mean_threshold) continue; // low energy
        if (stats[t].std > tr_cfg.std_threshold) continue;   // energy not evenly spread
        members[clusters.assignment[t]].push_back(t);
    }
    for (const auto& cluster : members) {
        if (cluster.size() < tr_cfg.min_cluster_members) continue;
        map.detected_columns.insert(map.detected_columns.end(), cluster.begin(), cluster.end());
    }
    std::sort(map.detected_columns.begin(), map.detected_columns.end());
    if (map.detected_columns.empty()) return map;

    const std::size_t win = sp_cfg.window_len_samples;
    auto column_span = [&](std::size_t t) {
        const std::size_t start = grid.col_times[t];
        return Span{start, std::min(start + win - 1, n - 1)};
    };
    for (std::size_t col : map.detected_columns) {
        const Span next = column_span(col);
        if (!map.spans.empty() && next.start <= map.spans.back().end + 1)
            map.spans.back().end = std::max(map.spans.back().end, next.end);
        else
            map.spans.push_back(next);
    }

    map.cleaned.samples = interpolate_spans(s.samples, map.spans);
    for (std::size_t i = 0; i < n; ++i) map.difference.samples[i] = s.samples[i] - map.cleaned.samples[i];
    return map;
}

} // namespace ts4::transient
