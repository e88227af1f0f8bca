#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ts4 {

enum class ErrorCode {
    InvalidArgument,
    WindowTooSmall,
    WindowTooLarge,
    IndexOutOfRange,
    EigenFailure,
    SeriesTooShort,
    TooFewPoints,
    ZeroDenominator,
    ConstantSeries,
    Io,
    Format,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the toolkit carries one of the codes above so callers
/// (the batch planner in particular) can decide between skipping and aborting.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

enum class Channel { X, Y, Z, Mono };

std::string_view to_string(Channel channel);
Channel channel_from_string(std::string_view name);

/// One uniformly sampled channel. Samples are doubles even for 8-bit sources.
struct Series {
    std::vector<double> samples;
    double sample_rate_hz = 30.0;
    Channel channel = Channel::Mono;

    std::size_t size() const noexcept { return samples.size(); }
    double operator[](std::size_t i) const { return samples[i]; }

    friend bool operator==(const Series&, const Series&) = default;
};

/// Copies metadata from `like` and replaces the samples.
Series with_samples(const Series& like, std::vector<double> samples);

struct ValidationResult {
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

ValidationResult validate_series(const Series& s);

/// Throws Error(InvalidArgument) listing every violation.
void require_valid(const Series& s);

struct ZeroMeaned {
    Series series;
    double mean = 0.0;
};

ZeroMeaned zero_mean(const Series& s);

struct ScoredTrial {
    std::string trial_id;
    std::string subject_id;
    int score = 0;
    Series x;
    Series y;
    Series z;

    const Series& channel(Channel c) const;
    Series& channel(Channel c);

    friend bool operator==(const ScoredTrial&, const ScoredTrial&) = default;
};

inline constexpr Channel kTrialChannels[] = {Channel::X, Channel::Y, Channel::Z};

ValidationResult validate_trial(const ScoredTrial& t);

struct Dataset {
    std::vector<ScoredTrial> trials;

    std::map<int, std::int64_t> class_counts() const;
};

struct RngSeed {
    std::uint64_t value = 0;

    friend bool operator==(RngSeed, RngSeed) = default;
    friend auto operator<=>(RngSeed, RngSeed) = default;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a, stable across platforms (std::hash is not).
std::uint64_t stable_hash(std::string_view text) noexcept;

/// Seed for one synthetic item: hash(base, trial_id, fold).
RngSeed derive_item_seed(RngSeed base, std::string_view trial_id, std::int64_t fold_index) noexcept;

/// Per-channel seed below an item seed.
RngSeed derive_channel_seed(RngSeed item, Channel channel) noexcept;

} // namespace ts4
