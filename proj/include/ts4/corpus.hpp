#pragma once

#include "ts4/core.hpp"

#include <vector>

namespace ts4::corpus {

/// Stand-in for clinical recordings: triaxial lift-move-place trials in raw
/// 8-bit ADC units at 30 Hz. Higher scores move faster and more smoothly;
/// lower scores are slower, shakier and carry more impact transients.
struct CorpusConfig {
    std::size_t n_per_class = 10;
    double median_length = 91.0;
    double length_log_sigma = 0.2; // spread of the log-normal length distribution
    std::size_t min_length = 40;
    std::size_t max_length = 300;
    /// false: scores {3, 2, 1}, with 1 standing for the merged {0, 1} class.
    bool four_class = false;
    double sample_rate_hz = 30.0;
    std::size_t subjects = 34;
    RngSeed seed{1};
};

void validate(const CorpusConfig& cfg);

std::vector<int> class_scores(const CorpusConfig& cfg);

/// Length of the i-th generated trial (drawn independently of the class).
std::size_t draw_length(const CorpusConfig& cfg, RngSeed trial_seed);

ScoredTrial generate_trial(const CorpusConfig& cfg, int score, std::size_t index, RngSeed trial_seed);

Dataset generate_corpus(const CorpusConfig& cfg);

} // namespace ts4::corpus
