#include "ts4/pipeline.hpp"

#include "parallel.hpp"
#include "ts4/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

namespace ts4::pipeline {

void validate(const Ts4Config& cfg)
{
    if (cfg.ssa.window_m < 2) throw Error(ErrorCode::WindowTooSmall, "SSA window must be >= 2");
    ssa::validate_rule(cfg.ssa.grouping, cfg.ssa.window_m);
    transient::validate(cfg.spectrogram);
    transient::validate(cfg.transient);
}

Ts4Parts ts4_decompose(const Series& s, const Ts4Config& cfg)
{
    require_valid(s);
    validate(cfg);
    if (s.size() < 2 * cfg.ssa.window_m)
        throw Error(ErrorCode::WindowTooLarge, "series of length " + std::to_string(s.size()) +
                                                   " is shorter than twice the SSA window " +
                                                   std::to_string(cfg.ssa.window_m));

    Ts4Parts parts;
    parts.transients = transient::detect_transients(s, cfg.spectrogram, cfg.transient, cfg.base_seed);
    const auto decomposition = ssa::decompose(parts.transients.cleaned, cfg.ssa);
    auto split = ssa::split_shape_lowlevel(decomposition, cfg.ssa.grouping);
    parts.transient_diff = parts.transients.difference;
    parts.shape = std::move(split.shape);
    parts.low_level = std::move(split.low_level);
    parts.shape_components = std::move(split.shape_components);
    return parts;
}

Series ts4_recombine(const Ts4Parts& parts, RngSeed seed)
{
    const Series randomized = surrogate::aaft(parts.low_level, seed);
    Series out = parts.shape;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.samples[i] = parts.transient_diff.samples[i] + parts.shape.samples[i] + randomized.samples[i];
    return out;
}

Series ts4_synthesize(const Series& s, const Ts4Config& cfg, RngSeed seed)
{
    return ts4_recombine(ts4_decompose(s, cfg), seed);
}

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::TS4: return "ts4";
    case Method::SurrogateOnly: return "surrogate";
    case Method::WindowSlice: return "slice";
    case Method::WindowWarp: return "warp";
    }
    return "ts4";
}

Method method_from_string(std::string_view name)
{
    for (Method m : kAllMethods)
        if (to_string(m) == name) return m;
    throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

std::int64_t FoldPlan::multiplier(int score) const
{
    const auto it = per_class_multiplier.find(score);
    return it == per_class_multiplier.end() ? 1 : it->second;
}

void validate(const FoldPlan& plan)
{
    if (plan.base_fold < 1) throw Error(ErrorCode::InvalidArgument, "base fold must be >= 1");
    for (const auto& [score, mult] : plan.per_class_multiplier)
        if (mult < 1)
            throw Error(ErrorCode::InvalidArgument, "multiplier for score " + std::to_string(score) + " must be >= 1");
}

std::map<int, std::int64_t> plan_folds(const std::map<int, std::int64_t>& class_counts, const FoldPlan& plan)
{
    validate(plan);
    std::map<int, std::int64_t> out;
    for (const auto& [score, count] : class_counts) {
        if (count < 0) throw Error(ErrorCode::InvalidArgument, "negative class count");
        out[score] = count * plan.base_fold * plan.multiplier(score);
    }
    return out;
}

std::string synthetic_trial_id(std::string_view source, Method method, std::int64_t fold_index)
{
    char fold[32];
    std::snprintf(fold, sizeof fold, "%05lld", static_cast<long long>(fold_index));
    return std::string(source) + "__" + std::string(to_string(method)) + "_f" + fold;
}

Series synthesize(const Series& s, Method method, const AugmentConfig& cfg, RngSeed seed)
{
    switch (method) {
    case Method::TS4: return ts4_synthesize(s, cfg.ts4, seed);
    case Method::SurrogateOnly: return surrogate::aaft(s, seed);
    case Method::WindowSlice: return distort::window_slice(s, cfg.distort, seed);
    case Method::WindowWarp: return distort::window_warp(s, cfg.distort, seed);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown method");
}

namespace {

struct PreparedTrial {
    const ScoredTrial* trial = nullptr;
    std::int64_t planned = 0;
    std::vector<Ts4Parts> parts; // TS4 only, one per channel
    std::optional<std::string> failure;
    std::optional<std::string> note;
};

Ts4Config shrink_window(Ts4Config cfg, std::size_t n)
{
    cfg.ssa.window_m = n / 2;
    if (auto* fc = std::get_if<ssa::FixedCount>(&cfg.ssa.grouping))
        fc->count = std::min(fc->count, cfg.ssa.window_m);
    return cfg;
}

void prepare(PreparedTrial& p, Method method, const AugmentConfig& cfg)
{
    const auto check = validate_trial(*p.trial);
    if (!check.ok()) {
        p.failure = check.violations.front();
        return;
    }
    if (method != Method::TS4) return;

    Ts4Config ts4 = cfg.ts4;
    const std::size_t n = p.trial->x.size();
    if (n < 2 * ts4.ssa.window_m && cfg.allow_window_shrink && n / 2 >= 2) {
        ts4 = shrink_window(ts4, n);
        p.note = "trial " + p.trial->trial_id + ": SSA window shrunk from " + std::to_string(cfg.ts4.ssa.window_m) +
                 " to " + std::to_string(ts4.ssa.window_m);
    }
    for (Channel c : kTrialChannels) p.parts.push_back(ts4_decompose(p.trial->channel(c), ts4));
}

} // namespace

AugmentedBatch augment_batch(const Dataset& d, Method method, const AugmentConfig& cfg, const FoldPlan& plan,
                             RngSeed base_seed)
{
    validate(plan);
    validate(cfg.ts4);
    distort::validate(cfg.distort);

    AugmentedBatch batch;
    batch.method = method;
    batch.plan = plan;
    batch.base_seed = base_seed;

    std::vector<PreparedTrial> prepared(d.trials.size());
    for (std::size_t i = 0; i < d.trials.size(); ++i) {
        prepared[i].trial = &d.trials[i];
        prepared[i].planned = plan.base_fold * plan.multiplier(d.trials[i].score);
    }
    std::stable_sort(prepared.begin(), prepared.end(), [](const PreparedTrial& a, const PreparedTrial& b) {
        return a.trial->trial_id < b.trial->trial_id;
    });
    for (std::size_t i = 1; i < prepared.size(); ++i)
        if (prepared[i].trial->trial_id == prepared[i - 1].trial->trial_id)
            throw Error(ErrorCode::InvalidArgument, "duplicate trial id '" + prepared[i].trial->trial_id + "'");

    detail::parallel_for(prepared.size(), cfg.threads, [&](std::size_t i) {
        try {
            prepare(prepared[i], method, cfg);
        } catch (const std::exception& e) {
            prepared[i].failure = e.what();
            prepared[i].parts.clear();
        }
    });

    struct Work {
        std::size_t trial;
        std::int64_t fold;
    };
    std::vector<Work> work;
    for (std::size_t t = 0; t < prepared.size(); ++t) {
        if (prepared[t].failure) continue;
        for (std::int64_t f = 0; f < prepared[t].planned; ++f) work.push_back({t, f});
    }

    std::vector<BatchItem> items(work.size());
    std::vector<std::optional<std::string>> item_errors(work.size());
    detail::parallel_for(work.size(), cfg.threads, [&](std::size_t w) {
        const PreparedTrial& p = prepared[work[w].trial];
        const std::int64_t fold = work[w].fold;
        BatchItem& item = items[w];
        item.provenance = {method, p.trial->trial_id, fold, derive_item_seed(base_seed, p.trial->trial_id, fold)};
        item.trial.trial_id = synthetic_trial_id(p.trial->trial_id, method, fold);
        item.trial.subject_id = p.trial->subject_id;
        item.trial.score = p.trial->score;
        try {
            for (std::size_t ci = 0; ci < 3; ++ci) {
                const Channel c = kTrialChannels[ci];
                const RngSeed seed = derive_channel_seed(item.provenance.seed, c);
                item.trial.channel(c) = method == Method::TS4 ? ts4_recombine(p.parts[ci], seed)
                                                              : synthesize(p.trial->channel(c), method, cfg, seed);
            }
        } catch (const std::exception& e) {
            item_errors[w] = e.what();
        }
    });

    // A trial with any failed item is dropped as a whole and reported.
    std::vector<std::optional<std::string>> trial_failure(prepared.size());
    for (std::size_t t = 0; t < prepared.size(); ++t) trial_failure[t] = prepared[t].failure;
    for (std::size_t w = 0; w < work.size(); ++w)
        if (item_errors[w] && !trial_failure[work[w].trial]) trial_failure[work[w].trial] = item_errors[w];

    std::set<std::uint64_t> seeds;
    for (std::size_t w = 0; w < work.size(); ++w) {
        if (trial_failure[work[w].trial]) continue;
        if (!seeds.insert(items[w].provenance.seed.value).second)
            throw Error(ErrorCode::InvalidArgument, "derived seed collision at " + items[w].trial.trial_id);
        batch.items.push_back(std::move(items[w]));
    }
    for (std::size_t t = 0; t < prepared.size(); ++t) {
        if (trial_failure[t])
            batch.skips.push_back({prepared[t].trial->trial_id, *trial_failure[t], prepared[t].planned});
        else if (prepared[t].note)
            batch.notes.push_back(*prepared[t].note);
    }
    return batch;
}

const MethodAggregate* FidelitySummary::find(Method m) const
{
    for (const auto& agg : methods)
        if (agg.method == m) return &agg;
    return nullptr;
}

FidelitySummary fidelity_report(const std::vector<BatchItem>& items, const Dataset& d,
                                std::optional<std::size_t> max_lag, unsigned threads)
{
    std::unordered_map<std::string, const ScoredTrial*> sources;
    for (const auto& t : d.trials) sources.emplace(t.trial_id, &t);
    for (const auto& item : items)
        if (!sources.count(item.provenance.source_trial_id))
            throw Error(ErrorCode::InvalidArgument, "item " + item.trial.trial_id + " has no source trial '" +
                                                        item.provenance.source_trial_id + "'");

    FidelitySummary summary;
    summary.pairs.resize(items.size() * 3);
    detail::parallel_for(items.size(), threads, [&](std::size_t i) {
        const BatchItem& item = items[i];
        const ScoredTrial& source = *sources.at(item.provenance.source_trial_id);
        for (std::size_t ci = 0; ci < 3; ++ci) {
            const Channel c = kTrialChannels[ci];
            PairRow& row = summary.pairs[i * 3 + ci];
            row.method = item.provenance.method;
            row.source_trial_id = source.trial_id;
            row.synthetic_trial_id = item.trial.trial_id;
            row.channel = c;
            const Series& orig = source.channel(c);
            const Series& synth = item.trial.channel(c);
            row.report.pair_id = item.trial.trial_id + ":" + std::string(to_string(c));
            row.report.delta_mean_pct = metrics::delta_mean_pct(orig, synth);
            row.report.delta_std_pct = metrics::delta_std_pct(orig, synth);
            try {
                row.report.acf_rmse = metrics::acf_rmse(orig, synth, max_lag);
                row.report.dtw_pct = metrics::dtw_pct(orig, synth);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ConstantSeries) throw;
                row.shape_metrics_valid = false;
                row.report.acf_rmse = 0.0;
                row.report.dtw_pct = 0.0;
            }
        }
    });

    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto median_or_nan = [&](std::vector<double>& v) { return v.empty() ? nan : metrics::median(v); };
    for (Method m : kAllMethods) {
        MethodAggregate agg;
        agg.method = m;
        std::vector<double> dm, ds, acf, dtw;
        for (const auto& row : summary.pairs) {
            if (row.method != m) continue;
            ++agg.pairs;
            if (row.report.delta_mean_pct.zero_denominator)
                ++agg.mean_flagged;
            else
                dm.push_back(row.report.delta_mean_pct.value);
            if (row.report.delta_std_pct.zero_denominator)
                ++agg.std_flagged;
            else
                ds.push_back(row.report.delta_std_pct.value);
            if (row.shape_metrics_valid) {
                acf.push_back(row.report.acf_rmse);
                dtw.push_back(row.report.dtw_pct);
            } else {
                ++agg.shape_unscored;
            }
        }
        if (agg.pairs == 0) continue;
        agg.delta_mean_pct = median_or_nan(dm);
        agg.delta_std_pct = median_or_nan(ds);
        agg.acf_rmse = median_or_nan(acf);
        agg.dtw_pct = median_or_nan(dtw);
        summary.methods.push_back(agg);
    }
    return summary;
}

} // namespace ts4::pipeline
