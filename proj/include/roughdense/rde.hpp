#pragma once

#include <vector>

#include "roughdense/driver.hpp"
#include "roughdense/fields.hpp"
#include "roughdense/increments.hpp"

namespace roughdense {

enum class Scheme { Euler, Davie };

struct SolverConfig {
    int level;      // stepping level, <= driver level
    Scheme scheme = Scheme::Davie;
    double gamma = 0.0;  // Hölder exponent for norms; defaults to driver gamma
};

/// Grid solution with its controlled-path decomposition zeta = V(X).
struct SolutionPath {
    TimeGrid grid;   // stepping grid
    Mat values;      // d x points
    std::vector<Mat> zeta;

    double holder_norm(double gamma) const;
    /// Controlled-path remainder r_{st} = delta X - zeta_s B1_{st}; the driver
    /// must be the one the solution was produced from.
    Vec remainder(std::size_t i, std::size_t j, const EnhancedDriver& driver) const;
    /// Dyadic log-log slope of |r|; a certificate that r has order ~ 2 gamma.
    double remainder_slope(const EnhancedDriver& driver) const;
};

/// One step of the second-order scheme:
///   dX = V0(X) dt + V_i(X) B1^i + (V_{i1}.grad V_{i2})(X) B2^{i1 i2};
/// Euler drops the level-2 term (Young regime only). When the stepping grid
/// is coarser than the driver grid, B1/B2 blocks are the Chen-assembled
/// increments of the fine driver.
SolutionPath solve(const VectorFieldSystem& sys, const EnhancedDriver& driver, const Vec& x0,
                   const SolverConfig& config);

/// Young integral int g df as the limit of Riemann sums (sewing of g_s df_st);
/// requires gamma + kappa > 1.
Inc1 young_integral(const GridPath& g, const GridPath& f, double gamma, double kappa);

/// A path controlled by the driver: values m (rows) with coefficient mu,
/// delta m^i = mu^{i i1} B1^{i1} + higher order.
struct ControlledPath {
    TimeGrid grid;
    Mat values;              // p x points
    std::vector<Mat> coeff;  // p x d per point
};

struct RoughIntegralResult {
    Inc1 increment;                        // scalar <m, dB> integral
    std::vector<double> level_corrections; // compensated-sum refinement diagnostics
};

/// Compensated Riemann sums  sum m^i B1^i + mu^{i1 i} B2^{i1 i}  over dyadic
/// refinement down to the grid. Requires a d-row controlled path.
RoughIntegralResult rough_integral(const ControlledPath& m, const EnhancedDriver& driver);

/// Composition phi(z) of a smooth map with a solution path; coefficients
/// become Dphi zeta. jac == nullptr falls back to finite differences.
ControlledPath controlled_compose(const std::function<Vec(const Vec&)>& phi,
                                  const std::function<Mat(const Vec&)>& jac, int out_dim,
                                  const SolutionPath& z);

/// ||X||_gamma / (1 + ||B1||_gamma^(1/gamma) + ||B2||_2gamma^(1/2gamma)).
double apriori_ratio(const SolutionPath& x, const EnhancedDriver& driver, double gamma);

}  // namespace roughdense
