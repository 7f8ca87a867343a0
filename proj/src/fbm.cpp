#include "roughdense/fbm.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "roughdense/rng.hpp"

namespace roughdense {

double fbm_covariance(double t, double s, double h) {
    return 0.5 * (std::pow(s, 2 * h) + std::pow(t, 2 * h) - std::pow(std::abs(t - s), 2 * h));
}

CovarianceFactor::CovarianceFactor(const TimeGrid& grid, HurstParam hurst)
    : grid_(grid), hurst_(hurst) {
    const auto n = static_cast<Eigen::Index>(grid.cells());
    Mat cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double ti = grid.t(static_cast<std::size_t>(i) + 1);
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double tj = grid.t(static_cast<std::size_t>(j) + 1);
            cov(i, j) = fbm_covariance(ti, tj, hurst.h);
            cov(j, i) = cov(i, j);
        }
    }
    Eigen::LLT<Mat> llt(cov);
    if (llt.info() != Eigen::Success) {
        cov.diagonal().array() += 1e-12;
        llt.compute(cov);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error(
                "CovarianceFactor: covariance factorization failed even with jitter; "
                "reduce the grid level");
        }
        jittered_ = true;
    }
    lower_ = llt.matrixL();
}

FbmSample sample_fbm(const CovarianceFactor& factor, int d, std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("sample_fbm: d must be >= 1");
    const auto& grid = factor.grid();
    const auto n = static_cast<Eigen::Index>(grid.cells());
    FbmSample out{grid, factor.hurst(), d, seed, Mat::Zero(d, n + 1), factor.jittered()};
    GaussianSource gauss(seed);
    Vec z(n);
    for (int c = 0; c < d; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) z(i) = gauss.next();
        out.values.row(c).tail(n) = (factor.lower() * z).transpose();
    }
    return out;
}

FbmSample sample_fbm(HurstParam hurst, int d, const TimeGrid& grid, std::uint64_t seed) {
    CovarianceFactor factor(grid, hurst);
    return sample_fbm(factor, d, seed);
}

DyadicInterpolant interpolate_dyadic(const FbmSample& sample, int coarse_level) {
    if (coarse_level < 1 || coarse_level > sample.grid.level) {
        throw std::invalid_argument("interpolate_dyadic: coarse level must lie in [1, sample level]");
    }
    const std::size_t stride = std::size_t{1} << (sample.grid.level - coarse_level);
    const std::size_t pts = sample.grid.points();
    DyadicInterpolant out{sample.grid, coarse_level, Mat(sample.d, pts)};
    for (std::size_t i = 0; i < pts; ++i) {
        const std::size_t k = i / stride;
        const std::size_t a = k * stride;
        if (a == i) {
            out.values.col(i) = sample.values.col(i);
        } else {
            const std::size_t b = a + stride;
            const double w = static_cast<double>(i - a) / static_cast<double>(stride);
            out.values.col(i) = (1.0 - w) * sample.values.col(a) + w * sample.values.col(b);
        }
    }
    return out;
}

}  // namespace roughdense
