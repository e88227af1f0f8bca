#include "support/oracles.hpp"
#include "ts4/transient.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace ts4;
using namespace ts4::transient;
using ts4::testing::make_series;

TEST_CASE("spectrogram grid shape", "[transient]")
{
    const auto g = spectrogram(make_series(std::vector<double>(91, 0.0)), SpectrogramConfig{});
    REQUIRE(g.magnitudes.rows() == 129);
    REQUIRE(g.magnitudes.cols() == 46); // 1 + ceil(89 / 2)
    REQUIRE(g.magnitudes.isZero(0.0));
    REQUIRE(g.bin_freqs.front() == 0.0);
    REQUIRE(g.bin_freqs.back() == 0.5);
    REQUIRE(g.col_times[45] == 90);

    const auto even = spectrogram(make_series(std::vector<double>(90, 0.0)), SpectrogramConfig{});
    REQUIRE(even.magnitudes.cols() == 45);

    REQUIRE_THROWS_AS(spectrogram(make_series({1.0, 2.0}, 30.0), SpectrogramConfig{3, 2, 256, true}), Error);
}

TEST_CASE("an isolated impulse gives one flat column", "[transient]")
{
    std::vector<double> v(91, 0.0);
    v[60] = 100.0; // 1-based sample 61
    const auto g = spectrogram(make_series(v), SpectrogramConfig{});
    for (Eigen::Index t = 0; t < g.magnitudes.cols(); ++t) {
        if (t == 30) {
            REQUIRE((g.magnitudes.col(t).array() - 100.0).abs().maxCoeff() < 1e-9);
        } else {
            REQUIRE(g.magnitudes.col(t).isZero(0.0));
        }
    }
    const auto stats = column_stats(g);
    REQUIRE(stats[30].mean == Catch::Approx(100.0).epsilon(1e-12));
    REQUIRE(stats[30].std == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("a constant frame is purely low-frequency", "[transient]")
{
    const auto g = spectrogram(make_series({5, 5, 5, 5}), SpectrogramConfig{});
    for (Eigen::Index t = 0; t < 2; ++t) {
        REQUIRE(g.magnitudes(0, t) == Catch::Approx(10.0));
        REQUIRE(g.magnitudes(128, t) == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("spectrogram matches the defining DFT", "[transient]")
{
    const auto v = ts4::testing::white_noise(33, 77, 20.0);
    const SpectrogramConfig cfg{5, 3, 64, true};
    const auto g = spectrogram(make_series(v), cfg);
    REQUIRE(g.magnitudes.cols() == 1 + (33 - 5 + 2) / 3);
    for (Eigen::Index t = 0; t < g.magnitudes.cols(); ++t) {
        std::vector<double> frame(5, 0.0);
        for (std::size_t i = 0; i < 5; ++i) {
            const std::size_t idx = static_cast<std::size_t>(t) * 3 + i;
            frame[i] = idx < v.size() ? v[idx] : 0.0;
        }
        const auto oracle = ts4::testing::direct_dft_magnitudes(frame, 64);
        for (std::size_t k = 0; k < oracle.size(); ++k)
            REQUIRE(g.magnitudes(static_cast<Eigen::Index>(k), t) == Catch::Approx(oracle[k]).margin(1e-9));
    }

    const auto power = spectrogram(make_series(v), SpectrogramConfig{5, 3, 64, false});
    REQUIRE((power.magnitudes - g.magnitudes.array().square().matrix()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("column_stats uses population moments", "[transient]")
{
    SpectrogramGrid g;
    g.magnitudes.resize(4, 2);
    g.magnitudes << 10, 0, 10, 0, 10, 0, 10, 100;
    const auto s = column_stats(g);
    REQUIRE(s[0].mean == 10.0);
    REQUIRE(s[0].std == 0.0);
    REQUIRE(s[1].mean == 25.0);
    REQUIRE(s[1].std == Catch::Approx(std::sqrt(1875.0)));
}

TEST_CASE("kmeans_1d examples", "[transient]")
{
    SECTION("three separated groups")
    {
        const auto r = kmeans_1d({0, 0, 0, 100, 100, 200}, 3, RngSeed{1});
        REQUIRE(r.assignment == std::vector<std::size_t>{0, 0, 0, 1, 1, 2});
        REQUIRE(r.centroids == std::vector<double>{0, 100, 200});
    }
    SECTION("all values equal")
    {
        const auto r = kmeans_1d({7, 7, 7, 7}, 3, RngSeed{2});
        for (double c : r.centroids) REQUIRE(c == 7.0);
        REQUIRE(r.assignment.size() == 4);
    }
    SECTION("too few points")
    {
        try {
            kmeans_1d({1, 2}, 3, RngSeed{0});
            FAIL("expected TooFewPoints");
        } catch (const Error& e) {
            REQUIRE(e.code() == ErrorCode::TooFewPoints);
        }
    }
    SECTION("deterministic for a fixed seed")
    {
        const auto v = ts4::testing::white_noise(50, 3, 10.0);
        const auto a = kmeans_1d(v, 3, RngSeed{9});
        const auto b = kmeans_1d(v, 3, RngSeed{9});
        REQUIRE(a.assignment == b.assignment);
        REQUIRE(a.centroids == b.centroids);
    }
}

TEST_CASE("kmeans_1d recovers well-separated blobs", "[transient][property]")
{
    const double truth[] = {0.0, 50.0, 150.0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 5.0);
        std::vector<double> values;
        std::vector<std::size_t> labels;
        for (std::size_t c = 0; c < 3; ++c)
            for (int i = 0; i < 30; ++i) {
                values.push_back(truth[c] + noise(rng));
                labels.push_back(c);
            }
        const auto r = kmeans_1d(values, 3, RngSeed{seed});
        std::size_t correct = 0;
        for (std::size_t i = 0; i < values.size(); ++i) correct += r.assignment[i] == labels[i] ? 1 : 0;
        REQUIRE(static_cast<double>(correct) / static_cast<double>(values.size()) >= 0.95);
    }
}

TEST_CASE("interpolate_spans", "[transient]")
{
    const std::vector<double> x{0, 1, 50, 60, 4, 5};
    REQUIRE(interpolate_spans(x, {Span{2, 3}}) == std::vector<double>{0, 1, 2, 3, 4, 5});
    REQUIRE(interpolate_spans(x, {}) == x);

    // boundary spans anchor on the end sample itself
    REQUIRE(interpolate_spans({9, 8, 2, 3}, {Span{0, 1}}) == std::vector<double>{9, 5.5, 2, 3});
    REQUIRE(interpolate_spans({0, 1, 9, 7}, {Span{2, 3}}) == std::vector<double>{0, 1, 4, 7});

    REQUIRE_THROWS_AS(interpolate_spans(x, {Span{4, 6}}), Error);
}

TEST_CASE("a rectangular pulse on a sinusoid is detected", "[transient]")
{
    const auto p = ts4::testing::pulse_signal(3);
    const auto map = detect_transients(make_series(p.samples), SpectrogramConfig{}, TransientConfig{}, RngSeed{3});
    REQUIRE(map.spans.size() == 1);
    const Span s = map.spans.front();
    REQUIRE(s.start + 2 >= p.pulse_start);
    REQUIRE(s.start <= p.pulse_start + 2);
    REQUIRE(s.end + 2 >= p.pulse_end);
    REQUIRE(s.end <= p.pulse_end + 2);
    for (std::size_t i = 0; i < p.samples.size(); ++i)
        if (i < s.start || i > s.end) REQUIRE(map.difference.samples[i] == 0.0);
}

TEST_CASE("a tall plateau is cut at its edges only", "[transient]")
{
    // Interior frames with a ~= b ~= 150 spread energy unevenly (bin std ~0.61a > 80).
    const auto p = ts4::testing::pulse_signal(0, 200, 0.5, 150.0);
    const auto map = detect_transients(make_series(p.samples), {}, {}, RngSeed{0});
    REQUIRE(map.spans == std::vector<Span>{Span{58, 59}, Span{64, 65}});
}

TEST_CASE("quiet series have no transients", "[transient]")
{
    const auto zero = detect_transients(make_series(std::vector<double>(91, 0.0)), {}, {}, RngSeed{0});
    REQUIRE(zero.spans.empty());
    REQUIRE(zero.cleaned.samples == std::vector<double>(91, 0.0));

    const auto constant = detect_transients(make_series(std::vector<double>(40, 90.0)), {}, {}, RngSeed{0});
    REQUIRE(constant.spans.empty());

    const auto one = detect_transients(make_series({1.0, 200.0}), SpectrogramConfig{3, 2, 256, true}, {}, RngSeed{0});
    REQUIRE(one.spans.empty());
}

TEST_CASE("transient maps satisfy their invariants", "[transient][property]")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto v = ts4::testing::ar1(60 + 5 * seed, 0.9, seed);
        for (double& x : v) x *= 8.0;
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> where(0, v.size() - 4);
        for (int k = 0; k < 3; ++k) {
            const std::size_t at = where(rng);
            for (std::size_t i = at; i < at + 3; ++i) v[i] += 110.0;
        }
        const auto s = make_series(v);
        const auto map = detect_transients(s, {}, {}, RngSeed{seed});

        for (std::size_t i = 0; i < v.size(); ++i)
            REQUIRE(ts4::testing::sums_to_within_ulp(map.cleaned.samples[i], map.difference.samples[i], v[i]));

        for (std::size_t i = 1; i < map.spans.size(); ++i) REQUIRE(map.spans[i].start > map.spans[i - 1].end + 1);
        for (const auto& span : map.spans) REQUIRE(span.end < v.size());

        const auto again = detect_transients(s, {}, {}, RngSeed{seed});
        REQUIRE(again.spans == map.spans);
        REQUIRE(again.difference.samples == map.difference.samples);

        // Raising the mean threshold can only remove columns.
        TransientConfig strict;
        strict.mean_threshold = 120.0;
        const auto fewer = detect_transients(s, {}, strict, RngSeed{seed});
        for (std::size_t c : fewer.detected_columns)
            REQUIRE(std::binary_search(map.detected_columns.begin(), map.detected_columns.end(), c));
    }
}

TEST_CASE("detecting on the cleaned series finds nothing new", "[transient]")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = ts4::testing::pulse_signal(seed);
        const auto first = detect_transients(make_series(p.samples), {}, {}, RngSeed{seed});
        const auto second = detect_transients(first.cleaned, {}, {}, RngSeed{seed});
        REQUIRE(second.spans.empty());
    }
}
