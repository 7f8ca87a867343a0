#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roughdense/linalg.hpp"

namespace roughdense {

/// The system (V_0, V_1, ..., V_d) with its Jacobians and structure
/// functions.
///
/// omega(i, x) returns the matrix Omega_i with (row k, column j) holding
/// omega_{ij}^k, i.e. column j expands the bracket [V_i, V_j] in the frame:
/// [V_i, V_j] = sum_k omega_{ij}^k V_k = V(x) * Omega_i(x).col(j). The
/// antisymmetry hypothesis says Omega_i is skew for i >= 1.
struct VectorFieldSystem {
    int d = 0;
    std::string name;
    std::function<Vec(const Vec&)> v0;
    std::function<Mat(const Vec&)> frame;  // columns V_1..V_d
    std::function<Mat(const Vec&, int)> jacobian;  // DV_j, j = 1..d; null -> finite differences
    std::function<Mat(const Vec&, int)> omega;     // Omega_i, i = 0..d; null if unavailable
    // Directional derivative of Omega_{i2} along V_{i1}; null means zero
    // (constant structure functions).
    std::function<Mat(const Vec&, int, int)> omega_dir_deriv;

    bool has_omega() const { return static_cast<bool>(omega); }

    /// DV_j at x: analytic when supplied, else central differences with
    /// step fd_step * (1 + |x|).
    Mat jacobian_of_field(const Vec& x, int j, double fd_step = 1e-5) const;

    /// (V_{i1} . grad) V_{i2}, the level-2 scheme coefficient.
    Vec dir_deriv_field(const Vec& x, int i1, int i2, double fd_step = 1e-5) const;

    /// Lie bracket [V_i, V_j](x) = (DV_j) V_i - (DV_i) V_j.
    Vec bracket(const Vec& x, int i, int j, double fd_step = 1e-5) const;
};

// Built-in systems.
VectorFieldSystem constant_frame(int d, const Mat& v, const Vec& v0);
VectorFieldSystem constant_frame(int d);  // identity frame, zero drift
/// d = 3 identity frame carrying synthetic so(3) structure constants
/// omega_{ij}^k = theta eps_{ijk} (plus omega_0 = c L_1): not induced by the
/// actual brackets, used to drive the derivative machinery with genuinely
/// non-commuting exponents.
VectorFieldSystem synthetic_skew(double theta, double omega0_scale);
/// d = 1, V(x) = x, V0 = 0: closed-form solution x exp(B_t).
VectorFieldSystem scalar_linear();
/// d = 2 polynomial fields for convergence studies; drift optional.
VectorFieldSystem poly2d(bool with_drift);
/// Linear fields V_j(x) = A_j x + b_j with omega fitted pointwise from the
/// (constant) brackets.
VectorFieldSystem linear_fields(const std::vector<Mat>& a, const std::vector<Vec>& b,
                                const Vec& v0);

/// Registry lookup used by the CLI/system files: accepts
/// {"builtin": name, ...params}.
VectorFieldSystem system_from_json(const std::string& json_text);

// Hypothesis checks over a point sample.
double check_basis(const VectorFieldSystem& sys, std::span<const Vec> points);
double check_antisymmetry(const VectorFieldSystem& sys, std::span<const Vec> points);
double check_bracket(const VectorFieldSystem& sys, std::span<const Vec> points,
                     double fd_step);
double check_ellipticity(const VectorFieldSystem& sys, std::span<const Vec> points);
/// (M, C): M = sup ||V(x)||^2 (spectral, squared), C = sup ||Omega_0(x)||.
std::pair<double, double> constants_mc(const VectorFieldSystem& sys,
                                       std::span<const Vec> points);

struct HypothesisReport {
    double min_singular_value = 0.0;
    double antisymmetry_defect = 0.0;
    double bracket_residual = 0.0;
    double ellipticity = 0.0;
    double m_constant = 0.0;
    double c_constant = 0.0;
};

HypothesisReport check_hypotheses(const VectorFieldSystem& sys, std::span<const Vec> points,
                                  double fd_step = 1e-5);

}  // namespace roughdense
