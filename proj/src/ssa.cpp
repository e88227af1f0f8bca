#include "ts4/ssa.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ts4::ssa {

namespace {

void check_window(std::size_t n, std::size_t m)
{
    if (m < 2) throw Error(ErrorCode::WindowTooSmall, "window " + std::to_string(m) + " < 2");
    if (m > n / 2)
        throw Error(ErrorCode::WindowTooLarge,
                    "window " + std::to_string(m) + " exceeds half the series length " + std::to_string(n));
}

} // namespace

void validate_rule(const GroupingRule& rule, std::size_t window_m)
{
    if (const auto* cv = std::get_if<CumulativeVariance>(&rule)) {
        if (!(cv->fraction > 0.0 && cv->fraction <= 1.0))
            throw Error(ErrorCode::InvalidArgument, "cumulative variance fraction must be in (0, 1]");
    } else {
        const auto& fc = std::get<FixedCount>(rule);
        if (fc.count < 1 || fc.count > window_m)
            throw Error(ErrorCode::InvalidArgument,
                        "fixed component count must be in [1, " + std::to_string(window_m) + "]");
    }
}

TrajectoryMatrix embed(const Series& s, std::size_t m)
{
    const std::size_t n = s.size();
    check_window(n, m);
    const std::size_t rows = n - m + 1;
    TrajectoryMatrix y(rows, m);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < m; ++c) y(r, c) = s.samples[r + c];
    return y;
}

CovarianceMatrix covariance(const TrajectoryMatrix& y, std::size_t n)
{
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "covariance divisor must be positive");
    CovarianceMatrix c = (y.transpose() * y) / static_cast<double>(n);
    // Force exact symmetry; the product is symmetric only up to rounding.
    return (c + c.transpose()) * 0.5;
}

SsaDecomposition decompose(const Series& s, const SsaConfig& cfg)
{
    require_valid(s);
    const std::size_t n = s.size();
    const std::size_t m = cfg.window_m;
    const TrajectoryMatrix y = embed(s, m);
    const CovarianceMatrix c = covariance(y, n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::EigenFailure, "symmetric eigensolver did not converge");

    std::vector<Eigen::Index> order(m);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto& values = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });

    SsaDecomposition d;
    d.eigenvalues.resize(static_cast<Eigen::Index>(m));
    d.eigenvectors.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
        const auto src = order[k];
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        if (v(peak) < 0.0) v = -v;
        d.eigenvalues(static_cast<Eigen::Index>(k)) = values(src);
        d.eigenvectors.col(static_cast<Eigen::Index>(k)) = v;
    }
    // a_t^k = sum_j x(t+j) e_j^k, i.e. the trajectory rows projected on e^k.
    d.pcs = y * d.eigenvectors;
    d.source_length = n;
    d.window_m = m;
    d.sample_rate_hz = s.sample_rate_hz;
    d.channel = s.channel;
    return d;
}

Series reconstruct(const SsaDecomposition& d, const std::vector<std::size_t>& components)
{
    const std::size_t n = d.source_length;
    const std::size_t m = d.window_m;
    for (std::size_t k : components) {
        if (k >= m)
            throw Error(ErrorCode::IndexOutOfRange,
                        "component " + std::to_string(k) + " out of range for window " + std::to_string(m));
    }

    Series out{std::vector<double>(n, 0.0), d.sample_rate_hz, d.channel};
    if (components.empty()) return out;

    // elementary[r, j] = sum_{k in K} a_r^k e_j^k
    const auto rows = static_cast<Eigen::Index>(n - m + 1);
    Eigen::MatrixXd elementary = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(m));
    for (std::size_t k : components) {
        const auto kk = static_cast<Eigen::Index>(k);
        elementary.noalias() += d.pcs.col(kk) * d.eigenvectors.col(kk).transpose();
    }

    // 1-based t and j below, matching the three boundary regimes of the
    // diagonal average: interior (1/M), leading edge (1/t), trailing edge (1/(N-t+1)).
    auto term = [&](std::size_t t, std::size_t j) {
        return elementary(static_cast<Eigen::Index>(t - j), static_cast<Eigen::Index>(j - 1));
    };
    for (std::size_t t = 1; t <= n; ++t) {
        double acc = 0.0;
        double norm = 0.0;
        if (t >= m && t <= n - m + 1) {
            for (std::size_t j = 1; j <= m; ++j) acc += term(t, j);
            norm = static_cast<double>(m);
        } else if (t < m) {
            for (std::size_t j = 1; j <= t; ++j) acc += term(t, j);
            norm = static_cast<double>(t);
        } else {
            for (std::size_t j = t + m - n; j <= m; ++j) acc += term(t, j);
            norm = static_cast<double>(n - t + 1);
        }
        out.samples[t - 1] = acc / norm;
    }
    return out;
}

std::vector<std::size_t> significant_components(const SsaDecomposition& d, const GroupingRule& rule)
{
    const std::size_t m = d.window_m;
    validate_rule(rule, m);
    std::size_t count = m;
    if (const auto* cv = std::get_if<CumulativeVariance>(&rule)) {
        // Same summation order as the running sum so the full prefix reaches the total exactly.
        double total = 0.0;
        for (std::size_t k = 0; k < m; ++k) total += d.eigenvalues(static_cast<Eigen::Index>(k));
        double running = 0.0;
        count = m;
        for (std::size_t k = 0; k < m; ++k) {
            running += d.eigenvalues(static_cast<Eigen::Index>(k));
            if (running >= cv->fraction * total) {
                count = k + 1;
                break;
            }
        }
    } else {
        count = std::get<FixedCount>(rule).count;
    }
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

ShapeSplit split_shape_lowlevel(const SsaDecomposition& d, const GroupingRule& rule)
{
    ShapeSplit split;
    split.shape_components = significant_components(d, rule);
    for (std::size_t k = split.shape_components.size(); k < d.window_m; ++k)
        split.low_level_components.push_back(k);
    split.shape = reconstruct(d, split.shape_components);
    split.low_level = reconstruct(d, split.low_level_components);
    return split;
}

} // namespace ts4::ssa
