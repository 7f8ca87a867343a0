#pragma once

#include <cstdint>
#include <memory>

#include "roughdense/grid.hpp"
#include "roughdense/linalg.hpp"

namespace roughdense {

/// fBm covariance R(t, s) = (s^2H + t^2H - |t-s|^2H) / 2.
double fbm_covariance(double t, double s, double h);

/// Exact d-dimensional fBm sample on a dyadic grid, components independent.
/// values is d x (points); column 0 is zero.
struct FbmSample {
    TimeGrid grid;
    HurstParam hurst;
    int d;
    std::uint64_t seed;
    Mat values;
    bool jitter_applied = false;
};

/// Cholesky factor of the grid covariance matrix [R(t_i, t_j)]_{i,j>=1}.
/// Built once per (grid, h) and shared across an ensemble of samplers.
/// A diagonal jitter of 1e-12 is applied if the factorization fails at
/// extreme levels; the flag records that it happened.
class CovarianceFactor {
  public:
    CovarianceFactor(const TimeGrid& grid, HurstParam hurst);

    const Mat& lower() const { return lower_; }
    const TimeGrid& grid() const { return grid_; }
    HurstParam hurst() const { return hurst_; }
    bool jittered() const { return jittered_; }

  private:
    TimeGrid grid_;
    HurstParam hurst_;
    Mat lower_;
    bool jittered_ = false;
};

FbmSample sample_fbm(const CovarianceFactor& factor, int d, std::uint64_t seed);
FbmSample sample_fbm(HurstParam hurst, int d, const TimeGrid& grid, std::uint64_t seed);

/// Piecewise-linear interpolation of a sample along the coarser dyadic grid
/// of the given level, evaluable back on the fine sample grid.
struct DyadicInterpolant {
    TimeGrid fine_grid;
    int coarse_level;
    Mat values;  // d x fine points

    double value(int comp, std::size_t fine_index) const { return values(comp, fine_index); }
};

DyadicInterpolant interpolate_dyadic(const FbmSample& sample, int coarse_level);

}  // namespace roughdense
