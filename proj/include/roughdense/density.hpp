#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roughdense/fields.hpp"
#include "roughdense/malliavin.hpp"
#include "roughdense/rde.hpp"

namespace roughdense {

/// Wilson score interval bounds for k successes out of n at z sigmas.
double wilson_upper(double k, double n, double z);
double wilson_lower(double k, double n, double z);

struct EnsembleConfig {
    HurstParam hurst;
    double horizon = 1.0;
    int level = 7;
    int n_paths = 1000;
    std::uint64_t base_seed = 1;
    Scheme scheme = Scheme::Davie;
    Vec x0;
    bool with_derivative = false;
    PropagationMethod method = PropagationMethod::ExpProduct;

    explicit EnsembleConfig(HurstParam h) : hurst(h) {}
};

/// Monte Carlo ensemble: terminal values plus per-path sup statistics.
/// Generation is parallel across paths (one derived seed per path index, so
/// extending N preserves the prefix); reductions happen afterwards in fixed
/// path order.
struct Ensemble {
    EnsembleConfig config;
    int d = 0;
    Mat terminal;            // d x N
    Vec sup_abs;             // per-path sup_t |X_t|
    Vec deriv_sup;           // per-path sup_s ||M_s||, when requested
    double m_constant = 0.0; // from the system over trajectory points
    double c_constant = 0.0;

    explicit Ensemble(EnsembleConfig cfg) : config(std::move(cfg)) {}

    std::vector<double> terminal_component(int c) const;
};

Ensemble build_ensemble(const VectorFieldSystem& sys, const EnsembleConfig& config);
/// Serial reference generator; must produce bit-identical output.
Ensemble build_ensemble_serial(const VectorFieldSystem& sys, const EnsembleConfig& config);

struct Histogram {
    std::vector<double> edges;     // bins + 1
    std::vector<double> count;
    std::vector<double> density;   // count / (N width): integrates to one
    std::vector<double> band_lo;   // Wilson bands at 3 sigma, density scale
    std::vector<double> band_hi;
    double n = 0;
};

Histogram estimate_density(const std::vector<double>& samples, int bins);

struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double std_error = 0.0;
    std::string params;  // JSON text of the inputs that fixed the bound
    bool pass = false;   // lhs <= rhs + 3 std_error
};

struct GaussianEnvelopeParams {
    double c1, c2, c3, c4;
    double value(double y, double t, double hurst) const;
};

struct SubGaussianEnvelopeParams {
    double c1, c2, delta;
    double value(double y) const;
};

/// Smallest c1 making every bin's upper band pass, keeping (c2, c3, c4).
GaussianEnvelopeParams fit_gaussian_envelope(const Histogram& hist, double c2, double c3,
                                             double c4, double t, double hurst);
/// Fits the decay rate c2 on well-populated bins (least squares on log band
/// against |y|^delta), then the smallest covering c1.
SubGaussianEnvelopeParams fit_subgaussian_envelope(const Histogram& hist, double delta,
                                                   int min_count);

InequalityReport envelope_check(const Histogram& hist, const GaussianEnvelopeParams& env,
                                double t, double hurst);
InequalityReport envelope_check(const Histogram& hist, const SubGaussianEnvelopeParams& env);

/// P(sup|X| - mean >= lambda) <= exp(-lambda^2 / (2 M^2 e^{2CT} T^{2H})),
/// empirical tail with Wilson upper band on the left side.
InequalityReport concentration_check(const Ensemble& ens, double m_const, double c_const,
                                     double lambda);

struct TestFunction {
    std::function<double(const Vec&)> f;
    std::function<Vec(const Vec&)> grad;
    std::string name;
};

/// Ent f^2 <= 2 M^2 e^{2CT} T^{2H} E |grad f|^2, bootstrap error bars.
InequalityReport logsobolev_check(const Ensemble& ens, const TestFunction& fn, double m_const,
                                  double c_const, int bootstrap = 200,
                                  std::uint64_t boot_seed = 2024);
/// Var f <= M^2 e^{2CT} T^{2H} E |grad f|^2.
InequalityReport poincare_check(const Ensemble& ens, const TestFunction& fn, double m_const,
                                double c_const, int bootstrap = 200,
                                std::uint64_t boot_seed = 2024);

/// Rough-regime variant: Ent f^2 <= C_{p,T} (E |grad f|^{2p})^{1/p} with an
/// existential constant. Reports the fitted ratio lhs/rhs; the verdict only
/// asserts both sides are finite with rhs > 0.
InequalityReport logsobolev_p_check(const Ensemble& ens, const TestFunction& fn, double p);

/// Fitted tail constant: M_beta = max over the r-grid of
/// P(||B||_beta > r) / exp(-r^2 / (2 T^{2(H-beta)})), Wilson-centered.
double fit_tail_constant(const std::vector<double>& norms, const std::vector<double>& r_grid,
                         double denom);

}  // namespace roughdense
