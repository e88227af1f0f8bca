#pragma once

#include "ts4/core.hpp"

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace ts4::ssa {

/// Keep the smallest prefix of the sorted eigenvalues whose sum reaches
/// `fraction` of the total.
struct CumulativeVariance {
    double fraction = 0.90;
};

/// Keep exactly the `count` leading components.
struct FixedCount {
    std::size_t count = 1;
};

using GroupingRule = std::variant<CumulativeVariance, FixedCount>;

struct SsaConfig {
    std::size_t window_m = 17;
    GroupingRule grouping = CumulativeVariance{};
};

using TrajectoryMatrix = Eigen::MatrixXd;
using CovarianceMatrix = Eigen::MatrixXd;

struct SsaDecomposition {
    Eigen::VectorXd eigenvalues;  // M, non-increasing
    Eigen::MatrixXd eigenvectors; // M x M, column k is e^k
    Eigen::MatrixXd pcs;          // (N-M+1) x M, column k is a^k
    std::size_t source_length = 0;
    std::size_t window_m = 0;
    double sample_rate_hz = 30.0;
    Channel channel = Channel::Mono;
};

/// Rows are the lagged windows [x(i), ..., x(i+M-1)].
/// Throws WindowTooSmall (m < 2) or WindowTooLarge (m > N/2).
TrajectoryMatrix embed(const Series& s, std::size_t m);

/// Y^T Y / n, with n the source series length.
CovarianceMatrix covariance(const TrajectoryMatrix& y, std::size_t n);

/// Embeds, diagonalises the lag covariance and projects onto the eigenvectors.
/// The series is not centred. Equal eigenvalues keep the solver's original
/// (ascending) index order; each eigenvector's largest-magnitude entry is made
/// positive so the output is deterministic.
SsaDecomposition decompose(const Series& s, const SsaConfig& cfg);

/// Diagonal-averaged reconstruction over the 0-based component indices.
/// Throws IndexOutOfRange for any index >= M.
Series reconstruct(const SsaDecomposition& d, const std::vector<std::size_t>& components);

/// Component indices deemed significant under `rule`. Always a prefix 0..k-1.
std::vector<std::size_t> significant_components(const SsaDecomposition& d, const GroupingRule& rule);

struct ShapeSplit {
    Series shape;
    Series low_level;
    std::vector<std::size_t> shape_components;
    std::vector<std::size_t> low_level_components;
};

ShapeSplit split_shape_lowlevel(const SsaDecomposition& d, const GroupingRule& rule);

/// Throws InvalidArgument when the rule's parameters are out of range for window m.
void validate_rule(const GroupingRule& rule, std::size_t window_m);

} // namespace ts4::ssa
