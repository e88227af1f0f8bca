#pragma once

#include "ts4/core.hpp"

#include <complex>
#include <vector>

namespace ts4::surrogate {

/// Intermediate vectors of one AAFT run, kept for diagnostics and tests.
struct SurrogateTrace {
    std::vector<std::size_t> rank_index_in;  // rank of each input sample
    std::vector<double> gaussianized;        // sorted normals rearranged into the input's rank order
    std::vector<double> random_phases;       // N/2 angles in [0, 2*pi)
    std::vector<std::complex<double>> phase_randomized_spectrum;
    std::vector<std::size_t> rank_index_out; // rank of each sample of the phase-randomised series
    double max_imag_ratio = 0.0;             // max|imag| / max|real| after the inverse transform
};

/// Indices that sort `v` ascending; ties keep their original order.
std::vector<std::size_t> sort_index(const std::vector<double>& v);

/// rank[i] = position of v[i] in the stable ascending sort of v.
std::vector<std::size_t> rank_index(const std::vector<double>& v);

/// Amplitude-adjusted phase-randomised surrogate. The output is a permutation
/// of the input samples. Throws SeriesTooShort for N < 4.
Series aaft(const Series& s, RngSeed seed);
Series aaft(const Series& s, RngSeed seed, SurrogateTrace& trace);

} // namespace ts4::surrogate
