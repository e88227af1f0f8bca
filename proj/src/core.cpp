#include "ts4/core.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace ts4 {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Format: return "Format";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

std::string_view to_string(Channel channel)
{
    switch (channel) {
    case Channel::X: return "x";
    case Channel::Y: return "y";
    case Channel::Z: return "z";
    case Channel::Mono: return "mono";
    }
    return "mono";
}

Channel channel_from_string(std::string_view name)
{
    if (name == "x" || name == "X" || name == "ax") return Channel::X;
    if (name == "y" || name == "Y" || name == "ay") return Channel::Y;
    if (name == "z" || name == "Z" || name == "az") return Channel::Z;
    if (name == "mono") return Channel::Mono;
    throw Error(ErrorCode::InvalidArgument, "unknown channel '" + std::string(name) + "'");
}

Series with_samples(const Series& like, std::vector<double> samples)
{
    return Series{std::move(samples), like.sample_rate_hz, like.channel};
}

ValidationResult validate_series(const Series& s)
{
    ValidationResult result;
    if (s.samples.size() < 2) result.violations.emplace_back("length < 2");
    if (!(s.sample_rate_hz > 0.0) || !std::isfinite(s.sample_rate_hz))
        result.violations.emplace_back("non-positive rate");
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        if (!std::isfinite(s.samples[i]))
            result.violations.push_back("non-finite at index " + std::to_string(i));
    }
    return result;
}

void require_valid(const Series& s)
{
    const auto result = validate_series(s);
    if (result.ok()) return;
    std::string msg = "invalid series:";
    for (const auto& v : result.violations) msg += " [" + v + "]";
    throw Error(ErrorCode::InvalidArgument, msg);
}

ZeroMeaned zero_mean(const Series& s)
{
    const double n = static_cast<double>(s.samples.size());
    const double mean = s.samples.empty() ? 0.0 : std::accumulate(s.samples.begin(), s.samples.end(), 0.0) / n;
    ZeroMeaned out{s, mean};
    for (double& v : out.series.samples) v -= mean;
    return out;
}

const Series& ScoredTrial::channel(Channel c) const
{
    switch (c) {
    case Channel::X: return x;
    case Channel::Y: return y;
    case Channel::Z: return z;
    case Channel::Mono: break;
    }
    throw Error(ErrorCode::InvalidArgument, "trials have no mono channel");
}

Series& ScoredTrial::channel(Channel c)
{
    return const_cast<Series&>(std::as_const(*this).channel(c));
}

ValidationResult validate_trial(const ScoredTrial& t)
{
    ValidationResult result;
    if (t.score < 0 || t.score > 3) result.violations.push_back("score " + std::to_string(t.score) + " not in {0,1,2,3}");
    for (Channel c : kTrialChannels) {
        for (const auto& v : validate_series(t.channel(c)).violations)
            result.violations.push_back(std::string(to_string(c)) + ": " + v);
    }
    if (t.x.size() != t.y.size() || t.x.size() != t.z.size())
        result.violations.emplace_back("channel lengths differ");
    if (t.x.sample_rate_hz != t.y.sample_rate_hz || t.x.sample_rate_hz != t.z.sample_rate_hz)
        result.violations.emplace_back("channel sample rates differ");
    return result;
}

std::map<int, std::int64_t> Dataset::class_counts() const
{
    std::map<int, std::int64_t> counts;
    for (const auto& t : trials) ++counts[t.score];
    return counts;
}

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stable_hash(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RngSeed derive_item_seed(RngSeed base, std::string_view trial_id, std::int64_t fold_index) noexcept
{
    std::uint64_t h = mix64(base.value);
    h = mix64(h ^ stable_hash(trial_id));
    h = mix64(h ^ static_cast<std::uint64_t>(fold_index));
    return RngSeed{h};
}

RngSeed derive_channel_seed(RngSeed item, Channel channel) noexcept
{
    return RngSeed{mix64(item.value ^ (0x1000ULL + static_cast<std::uint64_t>(channel)))};
}

} // namespace ts4
