#pragma once

#include "ts4/core.hpp"
#include "ts4/distort.hpp"
#include "ts4/metrics.hpp"
#include "ts4/ssa.hpp"
#include "ts4/transient.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ts4::pipeline {

struct Ts4Config {
    ssa::SsaConfig ssa;
    transient::SpectrogramConfig spectrogram;
    transient::TransientConfig transient;
    RngSeed base_seed{0}; // drives transient clustering; synthesis draws take their own seed
};

void validate(const Ts4Config& cfg);

/// input = transient_diff + shape + low_level
struct Ts4Parts {
    Series transient_diff;
    Series shape;
    Series low_level;
    transient::TransientMap transients;
    std::vector<std::size_t> shape_components;
};

/// Transient excision followed by SSA of the cleaned series.
/// Throws WindowTooLarge when N < 2M.
Ts4Parts ts4_decompose(const Series& s, const Ts4Config& cfg);

/// transient_diff + shape + aaft(low_level).
Series ts4_recombine(const Ts4Parts& parts, RngSeed seed);
Series ts4_synthesize(const Series& s, const Ts4Config& cfg, RngSeed seed);

enum class Method { TS4, SurrogateOnly, WindowSlice, WindowWarp };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

inline constexpr Method kAllMethods[] = {Method::TS4, Method::WindowSlice, Method::WindowWarp,
                                         Method::SurrogateOnly};

struct FoldPlan {
    std::int64_t base_fold = 1;
    std::map<int, std::int64_t> per_class_multiplier{{3, 1}, {2, 1}, {1, 6}, {0, 12}};

    /// Scores without an entry use 1.
    std::int64_t multiplier(int score) const;
};

void validate(const FoldPlan& plan);

/// Synthetic items per score: count * base_fold * multiplier(score).
std::map<int, std::int64_t> plan_folds(const std::map<int, std::int64_t>& class_counts, const FoldPlan& plan);

struct AugmentConfig {
    Ts4Config ts4;
    distort::DistortConfig distort;
    /// Retry with the largest admissible SSA window instead of skipping short series.
    bool allow_window_shrink = false;
    /// 0 = hardware concurrency.
    unsigned threads = 0;
};

struct Provenance {
    Method method = Method::TS4;
    std::string source_trial_id;
    std::int64_t fold_index = 0;
    RngSeed seed{0};
};

struct BatchItem {
    ScoredTrial trial;
    Provenance provenance;
};

struct SkipRecord {
    std::string trial_id;
    std::string reason;
    std::int64_t planned_items = 0;
};

struct AugmentedBatch {
    Method method = Method::TS4;
    FoldPlan plan;
    RngSeed base_seed{0};
    std::vector<BatchItem> items; // sorted by (source trial_id, fold)
    std::vector<SkipRecord> skips;
    std::vector<std::string> notes;
};

/// Name given to the synthetic trial for (source, method, fold).
std::string synthetic_trial_id(std::string_view source, Method method, std::int64_t fold_index);

/// Synthesises one channel series by `method`.
Series synthesize(const Series& s, Method method, const AugmentConfig& cfg, RngSeed seed);

/// Generates plan_folds(class_counts) items. Every channel of every item is
/// synthesised independently under its own derived seed. A trial whose
/// channels cannot be processed is listed in `skips`, not silently dropped.
AugmentedBatch augment_batch(const Dataset& d, Method method, const AugmentConfig& cfg, const FoldPlan& plan,
                             RngSeed base_seed);

struct PairRow {
    Method method = Method::TS4;
    std::string source_trial_id;
    std::string synthetic_trial_id;
    Channel channel = Channel::X;
    metrics::FidelityReport report;
    bool shape_metrics_valid = true; // false when ACF/DTW are undefined (constant series)
};

struct MethodAggregate {
    Method method = Method::TS4;
    double delta_mean_pct = 0.0;
    double delta_std_pct = 0.0;
    double acf_rmse = 0.0;
    double dtw_pct = 0.0;
    std::size_t pairs = 0;
    std::size_t mean_flagged = 0;
    std::size_t std_flagged = 0;
    std::size_t shape_unscored = 0;
};

struct FidelitySummary {
    std::vector<MethodAggregate> methods; // methods present in the items, ordered as kAllMethods
    std::vector<PairRow> pairs;

    /// nullptr when no item used `m`.
    const MethodAggregate* find(Method m) const;
};

/// Per-pair metrics across every item and channel, aggregated per method by
/// median. Pairs with a zero reference are left out of that percent median.
/// Throws InvalidArgument naming the first item whose source is not in `d`.
FidelitySummary fidelity_report(const std::vector<BatchItem>& items, const Dataset& d,
                                std::optional<std::size_t> max_lag = std::nullopt, unsigned threads = 0);

} // namespace ts4::pipeline
