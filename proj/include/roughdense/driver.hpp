#pragma once

#include <vector>

#include "roughdense/fbm.hpp"
#include "roughdense/grid.hpp"
#include "roughdense/linalg.hpp"

namespace roughdense {

/// A path together with its level-2 increments: the enhanced (rough) driver.
///
/// Storage is O(grid): prefix arrays B2_{t_0, t_i} built from per-cell blocks
/// via Chen's relation, so any pair (s, t) is an O(1) lookup
///   B2_{st} = P_t - P_s - B1_{0s} (x) B1_{st},
/// and Chen holds exactly (to round-off) for every reconstructed increment.
/// Per-cell blocks are the exact double integrals of the piecewise-linear
/// interpolant, i.e. dB (x) dB / 2 on each interpolation cell.
struct EnhancedDriver {
    TimeGrid grid;
    HurstParam hurst;
    int d;
    int interpolation_level;
    double gamma;       // exponent used for the stored norm estimates
    Mat values;         // d x points
    std::vector<Mat> l2_prefix;  // points entries, d x d

    Vec b1(std::size_t i, std::size_t j) const {
        return values.col(j) - values.col(i);
    }
    Mat b2(std::size_t i, std::size_t j) const {
        return l2_prefix[j] - l2_prefix[i] -
               values.col(i) * (values.col(j) - values.col(i)).transpose();
    }

    /// Hölder norms of the two levels over the grid pair policy.
    double norm_level1(double gamma_) const;
    double norm_level2(double gamma2) const;

    /// Largest Chen defect |B2_st - B2_su - B2_ut - B1_su (x) B1_ut| over a
    /// subsample of grid triples (all triples when the grid is small).
    double chen_defect() const;
};

/// Enhance a sample using the piecewise-linear interpolant at the given level
/// (defaults to the sample's own grid level).
EnhancedDriver levy_area(const FbmSample& sample, int interpolation_level);
EnhancedDriver levy_area(const FbmSample& sample);

/// Enhance an injected deterministic path given by its grid values.
EnhancedDriver enhance_path(const TimeGrid& grid, HurstParam hurst, const Mat& values,
                            double gamma);

/// Distances ||B2^(m+1) - B2^(m)||_{2 gamma} for m = base_level .. max_level-1,
/// where B2^(m) is built from the level-m interpolant and the norm is taken
/// over the pairs of the fixed base-level grid.
std::vector<double> levy_refinement_distances(const FbmSample& sample, int base_level,
                                              int max_level, double gamma);

}  // namespace roughdense
