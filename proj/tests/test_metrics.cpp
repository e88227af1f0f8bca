#include "support/oracles.hpp"
#include "ts4/metrics.hpp"
#include "ts4/surrogate.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace ts4;
using namespace ts4::metrics;
using ts4::testing::make_series;

TEST_CASE("percent deltas", "[metrics]")
{
    const auto s = make_series({10, 12, 14, 20});
    REQUIRE(delta_mean_pct(s, s).value == 0.0);
    REQUIRE(delta_std_pct(s, s).value == 0.0);

    const double m = stable_mean(s.samples);
    std::vector<double> scaled = s.samples;
    for (double& x : scaled) x = 1.1 * (x - m) + m;
    REQUIRE(delta_std_pct(s, make_series(scaled)).value == Catch::Approx(10.0).epsilon(1e-12));
    REQUIRE_FALSE(delta_std_pct(s, make_series(scaled)).zero_denominator);

    std::vector<double> shifted = s.samples;
    for (double& x : shifted) x *= 1.5;
    REQUIRE(delta_mean_pct(s, make_series(shifted)).value == Catch::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("percent deltas flag a zero reference", "[metrics]")
{
    const auto centred = make_series({-1, 0, 1});
    const auto r = delta_mean_pct(centred, make_series({0, 1, 2}));
    REQUIRE(r.zero_denominator);
    REQUIRE(r.value == 1.0);

    const auto flat = make_series({3, 3, 3});
    const auto d = delta_std_pct(flat, make_series({2, 3, 4}));
    REQUIRE(d.zero_denominator);
    REQUIRE(d.value == Catch::Approx(std::sqrt(2.0 / 3.0)));
}

TEST_CASE("permuted series have bit-identical moments", "[metrics][property]")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto v = ts4::testing::white_noise(20 + seed, seed, 40.0);
        for (double& x : v) x = std::round(x) + 64.0;
        const auto out = surrogate::aaft(make_series(v), RngSeed{seed});
        REQUIRE(delta_mean_pct(make_series(v), out).value == 0.0);
        REQUIRE(delta_std_pct(make_series(v), out).value == 0.0);

        auto reversed = v;
        std::reverse(reversed.begin(), reversed.end());
        REQUIRE(stable_mean(reversed) == stable_mean(v));
        REQUIRE(stable_std(reversed) == stable_std(v));
    }
}

TEST_CASE("acf basics", "[metrics]")
{
    const auto v = ts4::testing::ar1(300, 0.6, 8);
    const auto r = acf(make_series(v), 40);
    REQUIRE(r.size() == 41);
    REQUIRE(r[0] == Catch::Approx(1.0).epsilon(1e-15));
    const auto oracle = ts4::testing::acf_oracle(v, 40);
    for (std::size_t k = 0; k <= 40; ++k) REQUIRE(r[k] == Catch::Approx(oracle[k]).margin(1e-12));
    for (double x : r) REQUIRE(std::abs(x) <= 1.0 + 1e-12);

    try {
        acf(make_series({2, 2, 2}), 1);
        FAIL("expected ConstantSeries");
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::ConstantSeries);
    }
    REQUIRE_THROWS_AS(acf(make_series({1, 2, 3}), 3), Error);
}

TEST_CASE("acf of white noise stays inside the sampling band", "[metrics]")
{
    const auto v = ts4::testing::white_noise(4096, 12);
    const auto r = acf(make_series(v), 100);
    std::size_t inside = 0;
    for (std::size_t k = 1; k <= 100; ++k) inside += std::abs(r[k]) < 4.0 / std::sqrt(4096.0) ? 1 : 0;
    REQUIRE(inside >= 95);
}

TEST_CASE("acf of a square wave peaks at its period", "[metrics]")
{
    std::vector<double> v(400);
    for (std::size_t t = 0; t < v.size(); ++t) v[t] = (t / 10) % 2 == 0 ? 1.0 : -1.0;
    const auto r = acf(make_series(v), 20);
    REQUIRE(r[20] > 0.9);
    REQUIRE(r[10] < -0.9);
}

TEST_CASE("acf_rmse", "[metrics]")
{
    const auto a = make_series(ts4::testing::ar1(200, 0.7, 3));
    REQUIRE(acf_rmse(a, a) == 0.0);
    auto neg = a;
    for (double& x : neg.samples) x = -x;
    REQUIRE(acf_rmse(a, neg) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE_THROWS_AS(acf_rmse(a, make_series({1, 2, 3}), 5), Error);

    // explicit formula over a short lag range
    const auto b = make_series(ts4::testing::ar1(200, 0.2, 4));
    const auto ra = ts4::testing::acf_oracle(a.samples, 10);
    const auto rb = ts4::testing::acf_oracle(b.samples, 10);
    double acc = 0.0;
    for (std::size_t k = 0; k <= 10; ++k) acc += std::pow(std::abs(ra[k]) - std::abs(rb[k]), 2);
    REQUIRE(acf_rmse(a, b, 10) == Catch::Approx(std::sqrt(acc / 11.0)).margin(1e-12));
}

TEST_CASE("acf_rmse of independent white noise", "[metrics][property]")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto a = make_series(ts4::testing::white_noise(1024, 2 * seed));
        const auto b = make_series(ts4::testing::white_noise(1024, 2 * seed + 1));
        const double v = acf_rmse(a, b, 50);
        REQUIRE(v > 0.0);
        REQUIRE(v < 0.2);
    }
}

TEST_CASE("dtw examples", "[metrics]")
{
    REQUIRE(dtw_distance({1, 2, 3}, {1, 3}) == 1.0);
    REQUIRE(ts4::testing::brute_force_dtw({1, 2, 3}, {1, 3}) == 1.0);
    REQUIRE(dtw_distance({5}, {1, 2}) == 7.0);
    REQUIRE_THROWS_AS(dtw_distance({}, {1}), Error);
}

TEST_CASE("dtw agrees with exhaustive path enumeration", "[metrics][property]")
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> len(1, 6);
    std::uniform_int_distribution<int> level(-20, 20);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> a(len(rng));
        std::vector<double> b(len(rng));
        for (double& x : a) x = level(rng) / 4.0;
        for (double& x : b) x = level(rng) / 4.0;
        REQUIRE(dtw_distance(a, b) == ts4::testing::brute_force_dtw(a, b));
    }
}

TEST_CASE("dtw_pct properties", "[metrics][property]")
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto a = make_series(ts4::testing::ar1(60, 0.8, seed));
        const auto b = make_series(ts4::testing::ar1(60, 0.8, seed + 500));
        REQUIRE(dtw_pct(a, a) == 0.0);
        REQUIRE(dtw_pct(a, b) >= 0.0);
        REQUIRE(dtw_pct(a, b) == Catch::Approx(dtw_pct(b, a)).epsilon(1e-12));

        auto affine = b;
        for (double& x : affine.samples) x = 3.5 * x - 12.0;
        REQUIRE(std::abs(dtw_pct(a, affine) - dtw_pct(a, b)) < 1e-9);
    }
    REQUIRE_THROWS_AS(dtw_pct(make_series({1, 1, 1}), make_series({1, 2, 3})), Error);
}

TEST_CASE("dtw_pct divides by the original length", "[metrics]")
{
    const std::vector<double> a{0, 1, 0, -1, 0, 1};
    const std::vector<double> b{1, 0, -1, 0, 1, 0, -1, 0};
    const double raw = dtw_distance(z_normalize(a), z_normalize(b));
    REQUIRE(dtw_pct(make_series(a), make_series(b)) == Catch::Approx(100.0 * raw / 6.0));
}

TEST_CASE("fidelity bundles every metric", "[metrics]")
{
    const auto a = make_series(ts4::testing::ar1(80, 0.8, 1));
    auto b = a;
    for (double& x : b.samples) x += 0.5;
    const auto r = fidelity(a, b, std::nullopt, "pair");
    REQUIRE(r.pair_id == "pair");
    REQUIRE(r.acf_rmse == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(r.dtw_pct == Catch::Approx(0.0).margin(1e-9));
    REQUIRE(r.delta_std_pct.value == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("median", "[metrics]")
{
    REQUIRE(median({3, 1, 2}) == 2.0);
    REQUIRE(median({4, 1, 3, 2}) == 2.5);
    REQUIRE_THROWS_AS(median({}), Error);
}
