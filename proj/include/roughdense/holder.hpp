#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "roughdense/grid.hpp"

namespace roughdense {

/// Magnitude of a 1-increment between grid indices i < j.
using IncrementMagnitude = std::function<double(std::size_t, std::size_t)>;

/// Index pairs over which grid Hölder suprema are taken. Exact means every
/// i < j; beyond `exact_pair_limit` points we restrict to dyadic spans
/// (all offsets, spans 1, 2, 4, ...), which keeps the cost near-linear and
/// still samples every scale.
std::vector<std::pair<std::size_t, std::size_t>> holder_pairs(std::size_t points);

constexpr std::size_t exact_pair_limit = (std::size_t{1} << 12) + 1;

/// sup over selected pairs u < v in [lo, hi] of |g_v - g_u| / (t_v - t_u)^gamma.
/// Exact on the grid; a lower bound for the continuum semi-norm.
double holder_norm(const std::vector<double>& path, const TimeGrid& grid,
                   double gamma, std::size_t lo, std::size_t hi);

/// Same supremum for a generic increment magnitude over [0, points).
/// OpenMP kernel; holder_sup_serial is the reference implementation.
double holder_sup(std::size_t points, const std::vector<double>& times,
                  const IncrementMagnitude& mag, double mu);
double holder_sup_serial(std::size_t points, const std::vector<double>& times,
                         const IncrementMagnitude& mag, double mu);

/// Least-squares slope of log2(max increment at scale) vs -log2(scale) over
/// dyadic scales, dropping the two finest and two coarsest levels. Used for
/// empirical Hölder-order certificates.
double dyadic_scale_slope(std::size_t points, const std::vector<double>& times,
                          const IncrementMagnitude& mag);

}  // namespace roughdense
