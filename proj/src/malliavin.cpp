#include "roughdense/malliavin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughdense/holder.hpp"

namespace roughdense {

SkewExpReport skew_exp_check(const Mat& a1, const Mat& a2, int quad_steps) {
    if (!is_skew(a2, 1e-12)) {
        throw std::invalid_argument("skew_exp_check: A2 must be skew-symmetric");
    }
    SkewExpReport rep;
    const Mat sum = a1 + a2;
    const Mat exp_sum = expm(sum);
    rep.norm_exp_sum = spectral_norm(exp_sum);
    rep.exp_norm_a1 = std::exp(spectral_norm(a1));

    // Composite midpoint on e^{(1-s)(A1+A2)} A1 e^{s A2}; the per-step factors
    // advance by fixed exponentials so each step is two small multiplies.
    const double h = 1.0 / quad_steps;
    const Mat left_step = expm(-h * sum);          // decreases (1-s) exponent
    const Mat right_step = expm(h * a2);           // increases s exponent
    Mat left = expm((1.0 - 0.5 * h) * sum);
    Mat right = expm(0.5 * h * a2);
    Mat integral = Mat::Zero(a1.rows(), a1.cols());
    for (int k = 0; k < quad_steps; ++k) {
        integral += left * a1 * right;
        left = left * left_step;
        right = right * right_step;
    }
    integral *= h;
    rep.duhamel_residual = spectral_norm(exp_sum - expm(a2) - integral);
    return rep;
}

double DerivativeProcess::sup_spectral_norm() const {
    double worst = 0.0;
    for (const auto& mi : m) worst = std::max(worst, spectral_norm(mi));
    return worst;
}

std::vector<double> DerivativeProcess::spectral_norm_profile() const {
    std::vector<double> out;
    out.reserve(m.size());
    for (const auto& mi : m) out.push_back(spectral_norm(mi));
    return out;
}

double DerivativeProcess::holder_norm(double gamma) const {
    auto times = grid.times();
    auto mag = [this](std::size_t i, std::size_t j) { return spectral_norm(m[j] - m[i]); };
    return holder_sup(grid.points(), times, mag, gamma);
}

namespace {

DerivativeProcess propagate_exp_product(const SolutionPath& solution,
                                        const VectorFieldSystem& sys,
                                        const EnhancedDriver& driver) {
    const int d = sys.d;
    const std::size_t steps = solution.grid.cells();
    const std::size_t stride = std::size_t{1} << (driver.grid.level - solution.grid.level);
    const double dt = solution.grid.dt();

    DerivativeProcess out{solution.grid, std::vector<Mat>(steps + 1)};
    out.m[steps] = sys.frame(solution.values.col(steps));
    for (std::size_t k = steps; k-- > 0;) {
        const Vec x = solution.values.col(k);
        Mat a = sys.omega(x, 0) * dt;
        const Vec b1 = driver.b1(k * stride, (k + 1) * stride);
        for (int i = 1; i <= d; ++i) a += sys.omega(x, i) * b1(i - 1);
        if (!a.allFinite()) {
            throw std::runtime_error("propagate: non-finite omega evaluation at step " +
                                     std::to_string(k));
        }
        out.m[k] = out.m[k + 1] * expm(-a);
    }
    return out;
}

DerivativeProcess propagate_davie(const SolutionPath& solution, const VectorFieldSystem& sys,
                                  const EnhancedDriver& driver) {
    const int d = sys.d;
    const std::size_t steps = solution.grid.cells();
    const std::size_t stride = std::size_t{1} << (driver.grid.level - solution.grid.level);
    const double dt = solution.grid.dt();

    // Forward fundamental solution Phi_0 = I of dPhi = Phi dOmega, then the
    // final condition fixes M_s = V(X_T) Phi_T^{-1} Phi_s.
    std::vector<Mat> phi(steps + 1);
    phi[0] = Mat::Identity(d, d);
    for (std::size_t k = 0; k < steps; ++k) {
        const Vec x = solution.values.col(k);
        const Vec b1 = driver.b1(k * stride, (k + 1) * stride);
        const Mat b2 = driver.b2(k * stride, (k + 1) * stride);
        Mat step = sys.omega(x, 0) * dt;
        std::vector<Mat> om(d + 1);
        for (int i = 0; i <= d; ++i) om[i] = sys.omega(x, i);
        for (int i = 1; i <= d; ++i) step += om[i] * b1(i - 1);
        // Level-2 coefficient omega_{i1} omega_{i2} + V_{i1} omega_{i2},
        // contracted against B2^{i1 i2} (derivative index in the first slot).
        for (int i1 = 1; i1 <= d; ++i1) {
            for (int i2 = 1; i2 <= d; ++i2) {
                Mat coeff = om[i1] * om[i2];
                if (sys.omega_dir_deriv) coeff += sys.omega_dir_deriv(x, i1, i2);
                step += coeff * b2(i1 - 1, i2 - 1);
            }
        }
        if (!step.allFinite()) {
            throw std::runtime_error("propagate: non-finite omega evaluation at step " +
                                     std::to_string(k));
        }
        phi[k + 1] = phi[k] * (Mat::Identity(d, d) + step);
    }

    DerivativeProcess out{solution.grid, std::vector<Mat>(steps + 1)};
    const Mat lead = sys.frame(solution.values.col(steps)) * phi[steps].inverse();
    for (std::size_t k = 0; k <= steps; ++k) out.m[k] = lead * phi[k];
    return out;
}

}  // namespace

DerivativeProcess propagate(const SolutionPath& solution, const VectorFieldSystem& sys,
                            const EnhancedDriver& driver, PropagationMethod method) {
    if (!sys.has_omega()) {
        throw std::invalid_argument("propagate: system carries no structure functions");
    }
    if (solution.grid.horizon != driver.grid.horizon ||
        solution.grid.level > driver.grid.level) {
        throw std::invalid_argument("propagate: solution and driver grids are inconsistent");
    }
    return method == PropagationMethod::ExpProduct
               ? propagate_exp_product(solution, sys, driver)
               : propagate_davie(solution, sys, driver);
}

double deterministic_bound_margin(const DerivativeProcess& process, double m_const,
                                  double c_const, double horizon) {
    return m_const * std::exp(c_const * horizon) - process.sup_spectral_norm();
}

Vec directional_oracle(const VectorFieldSystem& sys, const FbmSample& sample,
                       const SolverConfig& config, const Vec& x0, std::size_t s_index, int j,
                       double eps) {
    if (sample.hurst.regime() != Regime::Young) {
        throw std::invalid_argument(
            "directional_oracle: pathwise perturbation needs the Young regime");
    }
    if (eps <= 0.0) throw std::invalid_argument("directional_oracle: eps must be positive");

    const EnhancedDriver base = levy_area(sample);
    const SolutionPath x_base = solve(sys, base, x0, config);

    FbmSample shifted = sample;
    for (std::size_t i = s_index; i < sample.grid.points(); ++i) {
        shifted.values(j, i) += eps;
    }
    const EnhancedDriver drv = levy_area(shifted);
    const SolutionPath x_shift = solve(sys, drv, x0, config);

    const auto last = x_base.grid.points() - 1;
    return (x_shift.values.col(last) - x_base.values.col(last)) / eps;
}

MalliavinMatrix malliavin_matrix(const DerivativeProcess& process, HurstParam hurst) {
    const std::size_t n = process.grid.cells();
    const int d = static_cast<int>(process.m[0].rows());
    const auto& g = process.grid;

    // Increment covariance Q_pq = E[dB_p dB_q] from R; the bilinear form on
    // piecewise-constant rows is exactly the H pairing of step functions.
    Mat q(n, n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t r = 0; r <= p; ++r) {
            const double v = fbm_covariance(g.t(p + 1), g.t(r + 1), hurst.h) -
                             fbm_covariance(g.t(p + 1), g.t(r), hurst.h) -
                             fbm_covariance(g.t(p), g.t(r + 1), hurst.h) +
                             fbm_covariance(g.t(p), g.t(r), hurst.h);
            q(p, r) = v;
            q(r, p) = v;
        }
    }

    Mat gamma = Mat::Zero(d, d);
    for (std::size_t p = 0; p < n; ++p) {
        Mat acc = Mat::Zero(d, d);
        for (std::size_t r = 0; r < n; ++r) acc += q(p, r) * process.m[r];
        gamma += process.m[p] * acc.transpose();
    }
    gamma = 0.5 * (gamma + gamma.transpose());
    return {gamma, lambda_min_symmetric(gamma)};
}

Mat l2_gram(const DerivativeProcess& process) {
    const std::size_t n = process.grid.cells();
    const double dt = process.grid.dt();
    const int d = static_cast<int>(process.m[0].rows());
    Mat out = Mat::Zero(d, d);
    for (std::size_t k = 0; k <= n; ++k) {
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        out += w * dt * process.m[k] * process.m[k].transpose();
    }
    return out;
}

double holder_bound_ratio(const DerivativeProcess& process, const EnhancedDriver& driver,
                          const Vec& x0, double gamma) {
    const double nm = process.holder_norm(gamma);
    const double nb = driver.norm_level1(gamma);
    if (nb == 0.0) return nm == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    const double denom = (1.0 + x0.norm() + std::pow(nb, 1.0 / gamma)) *
                         std::pow(nb, (1.0 - gamma) / gamma);
    return nm / denom;
}

}  // namespace roughdense
