#include "ts4/surrogate.hpp"

#include "ts4/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace ts4::surrogate {

std::vector<std::size_t> sort_index(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return idx;
}

std::vector<std::size_t> rank_index(const std::vector<double>& v)
{
    // Sorting the sort index yields its inverse permutation.
    const auto order = sort_index(v);
    std::vector<std::size_t> rank(v.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
    return rank;
}

Series aaft(const Series& s, RngSeed seed, SurrogateTrace& trace)
{
    require_valid(s);
    const std::size_t n = s.size();
    if (n < 4) throw Error(ErrorCode::SeriesTooShort, "surrogate needs at least 4 samples, got " + std::to_string(n));

    std::mt19937_64 rng(seed.value);

    // 1. sorted values and the rank of every input sample
    std::vector<double> sorted = s.samples;
    std::sort(sorted.begin(), sorted.end());
    trace.rank_index_in = rank_index(s.samples);

    // 2. sorted standard normals
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> rv(n);
    for (double& v : rv) v = normal(rng);
    std::sort(rv.begin(), rv.end());

    // 3. normals rearranged to follow the input's rank order
    trace.gaussianized.resize(n);
    for (std::size_t i = 0; i < n; ++i) trace.gaussianized[i] = rv[trace.rank_index_in[i]];

    // 4. phase randomisation with Hermitian symmetry. DC stays real and, for
    // even N, the Nyquist bin is left untouched.
    std::vector<std::complex<double>> ft(trace.gaussianized.begin(), trace.gaussianized.end());
    ft = fft::forward(ft);
    const std::size_t half = n / 2;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    trace.random_phases.resize(half);
    for (double& phi : trace.random_phases) {
        phi = angle(rng);
        if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
    }
    const std::size_t last_random = (n % 2 == 0) ? half - 1 : half;
    auto& ftr = trace.phase_randomized_spectrum;
    ftr = ft;
    ftr[0] = std::complex<double>(ft[0].real(), 0.0);
    for (std::size_t k = 1; k <= last_random; ++k) {
        ftr[k] = ft[k] * std::polar(1.0, trace.random_phases[k - 1]);
        ftr[n - k] = std::conj(ftr[k]);
    }
    if (n % 2 == 0) ftr[half] = std::complex<double>(ft[half].real(), 0.0);

    // 5. back to the time domain; the imaginary part is rounding noise
    const auto back = fft::inverse(ftr);
    std::vector<double> phase_randomized(n);
    double max_real = 0.0;
    double max_imag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        phase_randomized[i] = back[i].real();
        max_real = std::max(max_real, std::abs(back[i].real()));
        max_imag = std::max(max_imag, std::abs(back[i].imag()));
    }
    trace.max_imag_ratio = max_real > 0.0 ? max_imag / max_real : max_imag;

    // 6. ranks of the phase-randomised series
    trace.rank_index_out = rank_index(phase_randomized);

    // 7. original amplitudes placed in that rank order
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = sorted[trace.rank_index_out[i]];
    return with_samples(s, std::move(out));
}

Series aaft(const Series& s, RngSeed seed)
{
    SurrogateTrace trace;
    return aaft(s, seed, trace);
}

} // namespace ts4::surrogate
