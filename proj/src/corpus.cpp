#include "ts4/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace ts4::corpus {

namespace {

struct Archetype {
    double active_min;  // fraction of the record spent moving
    double active_max;
    double move_amp;    // horizontal acceleration peak (ADC units)
    double lift_amp;
    double tilt_amp;
    double tremor_amp;
    double transient_rate; // expected impacts per trial
};

Archetype archetype(int score)
{
    switch (score) {
    case 3: return {0.45, 0.60, 20.0, 16.0, 8.0, 0.8, 0.3};
    case 2: return {0.65, 0.80, 15.0, 13.0, 6.0, 2.0, 0.8};
    case 1: return {0.80, 0.95, 10.0, 9.0, 4.0, 3.5, 1.4};
    default: return {0.90, 1.00, 6.0, 5.0, 3.0, 4.5, 1.6};
    }
}

constexpr double kPi = std::numbers::pi;

} // namespace

void validate(const CorpusConfig& cfg)
{
    if (!(cfg.median_length >= 2.0)) throw Error(ErrorCode::InvalidArgument, "median length must be >= 2");
    if (!(cfg.length_log_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "length spread must be >= 0");
    if (cfg.min_length < 10 || cfg.min_length > cfg.max_length)
        throw Error(ErrorCode::InvalidArgument, "need 10 <= min_length <= max_length");
    if (!(cfg.sample_rate_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
    if (cfg.subjects == 0) throw Error(ErrorCode::InvalidArgument, "need at least one subject");
}

std::vector<int> class_scores(const CorpusConfig& cfg)
{
    if (cfg.four_class) return {3, 2, 1, 0};
    return {3, 2, 1};
}

std::size_t draw_length(const CorpusConfig& cfg, RngSeed trial_seed)
{
    std::mt19937_64 rng(mix64(trial_seed.value ^ 0x6c656e677468ULL));
    std::normal_distribution<double> z(0.0, 1.0);
    const double len = std::round(cfg.median_length * std::exp(cfg.length_log_sigma * z(rng)));
    return static_cast<std::size_t>(
        std::clamp(len, static_cast<double>(cfg.min_length), static_cast<double>(cfg.max_length)));
}

ScoredTrial generate_trial(const CorpusConfig& cfg, int score, std::size_t index, RngSeed trial_seed)
{
    const Archetype a = archetype(score);
    const std::size_t n = draw_length(cfg, trial_seed);
    std::mt19937_64 rng(trial_seed.value);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.2);

    auto jitter = [&](double v, double rel) { return v * (1.0 + rel * (2.0 * unit(rng) - 1.0)); };

    const double active = a.active_min + (a.active_max - a.active_min) * unit(rng);
    const double span = std::max(8.0, active * static_cast<double>(n));
    const double onset = (static_cast<double>(n) - span) * unit(rng);
    const double move_amp = jitter(a.move_amp, 0.2);
    const double lift_amp = jitter(a.lift_amp, 0.2);
    const double tilt_amp = jitter(a.tilt_amp, 0.2);
    const double tremor_amp = jitter(a.tremor_amp, 0.3);
    const double tremor_hz = 4.0 + 2.0 * unit(rng);
    const double tremor_phase = 2.0 * kPi * unit(rng);
    const double offsets[3] = {4.0 * (2.0 * unit(rng) - 1.0), -4.0 + 4.0 * (2.0 * unit(rng) - 1.0),
                               64.0 + 4.0 * (2.0 * unit(rng) - 1.0)};

    std::vector<double> xyz[3];
    for (auto& c : xyz) c.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (static_cast<double>(i) - onset) / span;
        const bool moving = u >= 0.0 && u <= 1.0;
        const double bump = moving ? std::sin(kPi * u) : 0.0;
        const double t = static_cast<double>(i) / cfg.sample_rate_hz;
        const double tremor = tremor_amp * (0.25 + bump) * std::sin(2.0 * kPi * tremor_hz * t + tremor_phase);
        xyz[0][i] = offsets[0] + move_amp * std::sin(2.0 * kPi * std::clamp(u, 0.0, 1.0)) * bump + tremor;
        xyz[1][i] = offsets[1] + lift_amp * bump * bump + 0.6 * tremor;
        xyz[2][i] = offsets[2] - tilt_amp * bump * bump + 0.4 * tremor;
    }

    // Impacts: short broadband bursts on one axis, mostly while moving.
    std::poisson_distribution<int> impacts(a.transient_rate);
    const int count = impacts(rng);
    for (int k = 0; k < count; ++k) {
        const std::size_t axis = static_cast<std::size_t>(unit(rng) * 3.0) % 3;
        const std::size_t width = 2 + static_cast<std::size_t>(unit(rng) * 4.0);
        const double amp = (unit(rng) < 0.5 ? -1.0 : 1.0) * (95.0 + 30.0 * unit(rng));
        const double centre = onset + span * unit(rng);
        const auto start = static_cast<std::size_t>(std::clamp(centre, 0.0, static_cast<double>(n - width)));
        for (std::size_t i = start; i < start + width && i < n; ++i) xyz[axis][i] += amp;
    }

    ScoredTrial trial;
    char id[48];
    std::snprintf(id, sizeof id, "t%04zu_s%d", index, score);
    trial.trial_id = id;
    std::uniform_int_distribution<std::size_t> subject(1, cfg.subjects);
    std::snprintf(id, sizeof id, "p%02zu", subject(rng));
    trial.subject_id = id;
    trial.score = score;
    for (std::size_t c = 0; c < 3; ++c) {
        for (double& v : xyz[c]) v = std::clamp(std::round(v + noise(rng)), -128.0, 127.0);
        trial.channel(kTrialChannels[c]) = Series{std::move(xyz[c]), cfg.sample_rate_hz, kTrialChannels[c]};
    }
    return trial;
}

Dataset generate_corpus(const CorpusConfig& cfg)
{
    validate(cfg);
    Dataset d;
    std::size_t index = 0;
    for (int score : class_scores(cfg)) {
        for (std::size_t i = 0; i < cfg.n_per_class; ++i, ++index)
            d.trials.push_back(generate_trial(cfg, score, index, derive_item_seed(cfg.seed, "corpus", index)));
    }
    return d;
}

} // namespace ts4::corpus
