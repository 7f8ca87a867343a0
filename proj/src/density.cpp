#include "roughdense/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "roughdense/parallel.hpp"
#include "roughdense/rng.hpp"

namespace roughdense {

using nlohmann::json;

double wilson_upper(double k, double n, double z) {
    const double ph = k / n;
    const double den = 1.0 + z * z / n;
    const double center = (ph + z * z / (2.0 * n)) / den;
    const double hw = z * std::sqrt(ph * (1.0 - ph) / n + z * z / (4.0 * n * n)) / den;
    return center + hw;
}

double wilson_lower(double k, double n, double z) {
    const double ph = k / n;
    const double den = 1.0 + z * z / n;
    const double center = (ph + z * z / (2.0 * n)) / den;
    const double hw = z * std::sqrt(ph * (1.0 - ph) / n + z * z / (4.0 * n * n)) / den;
    return std::max(0.0, center - hw);
}

namespace {

template <class ForLoop>
Ensemble build_ensemble_impl(const VectorFieldSystem& sys, const EnsembleConfig& config,
                             ForLoop&& loop) {
    const int d = sys.d;
    const int n = config.n_paths;
    if (n < 1) throw std::invalid_argument("build_ensemble: need at least one path");
    const double budget = static_cast<double>(n) *
                          static_cast<double>(std::size_t{1} << config.level) * d;
    if (budget > 2e9) {
        throw std::invalid_argument("build_ensemble: N * 2^level * d exceeds the desk budget");
    }

    TimeGrid grid(config.horizon, config.level);
    CovarianceFactor factor(grid, config.hurst);

    Ensemble out{config};
    out.d = d;
    out.terminal.resize(d, n);
    out.sup_abs.resize(n);
    if (config.with_derivative) out.deriv_sup.resize(n);

    SolverConfig solver{config.level, config.scheme, config.hurst.h - 0.05};
    std::vector<std::string> errors(n);
    loop(static_cast<std::size_t>(n), [&](std::size_t p) {
        try {
            FbmSample sample = sample_fbm(factor, d, derive_seed(config.base_seed, p));
            EnhancedDriver driver = levy_area(sample);
            SolutionPath x = solve(sys, driver, config.x0, solver);
            out.terminal.col(static_cast<Eigen::Index>(p)) = x.values.col(x.grid.points() - 1);
            double sup = 0.0;
            for (std::size_t k = 0; k < x.grid.points(); ++k) {
                sup = std::max(sup, x.values.col(k).norm());
            }
            out.sup_abs(static_cast<Eigen::Index>(p)) = sup;
            if (config.with_derivative) {
                DerivativeProcess m = propagate(x, sys, driver, config.method);
                out.deriv_sup(static_cast<Eigen::Index>(p)) = m.sup_spectral_norm();
            }
        } catch (const std::exception& e) {
            errors[p] = e.what();
        }
    });
    for (const auto& e : errors) {
        if (!e.empty()) throw std::runtime_error("build_ensemble: path failed: " + e);
    }

    // Constants from the system over the realized trajectory terminal points.
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) pts.push_back(out.terminal.col(p));
    auto [mc, cc] = constants_mc(sys, pts);
    out.m_constant = mc;
    out.c_constant = cc;
    return out;
}

}  // namespace

Ensemble build_ensemble(const VectorFieldSystem& sys, const EnsembleConfig& config) {
    return build_ensemble_impl(sys, config,
                               [](std::size_t n, auto&& f) { parallel_for(n, f); });
}

Ensemble build_ensemble_serial(const VectorFieldSystem& sys, const EnsembleConfig& config) {
    return build_ensemble_impl(sys, config,
                               [](std::size_t n, auto&& f) { serial_for(n, f); });
}

std::vector<double> Ensemble::terminal_component(int c) const {
    std::vector<double> out(static_cast<std::size_t>(terminal.cols()));
    for (Eigen::Index i = 0; i < terminal.cols(); ++i) out[i] = terminal(c, i);
    return out;
}

Histogram estimate_density(const std::vector<double>& samples, int bins) {
    if (bins < 1 || samples.empty()) {
        throw std::invalid_argument("estimate_density: need samples and bins");
    }
    for (double s : samples) {
        if (!std::isfinite(s)) throw std::invalid_argument("estimate_density: degenerate support");
    }
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        // delta-like sample: one unit-width bin carrying all the mass
        lo -= 0.5;
        hi += 0.5;
        bins = 1;
    }

    Histogram h;
    h.n = static_cast<double>(samples.size());
    const double w = (hi - lo) / bins;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = lo + w * b;
    h.count.assign(bins, 0.0);
    for (double s : samples) {
        int b = static_cast<int>((s - lo) / w);
        if (b >= bins) b = bins - 1;
        h.count[b] += 1.0;
    }
    h.density.resize(bins);
    h.band_lo.resize(bins);
    h.band_hi.resize(bins);
    for (int b = 0; b < bins; ++b) {
        h.density[b] = h.count[b] / (h.n * w);
        h.band_lo[b] = wilson_lower(h.count[b], h.n, 3.0) / w;
        h.band_hi[b] = wilson_upper(h.count[b], h.n, 3.0) / w;
    }
    return h;
}

double GaussianEnvelopeParams::value(double y, double t, double hurst) const {
    const double dev = std::abs(y) - c2;
    return c1 * std::exp(-dev * dev / (c3 * std::exp(c4 * t) * std::pow(t, 2.0 * hurst)));
}

double SubGaussianEnvelopeParams::value(double y) const {
    return c1 * std::exp(-c2 * std::pow(std::abs(y), delta));
}

namespace {

/// Largest envelope shape value over a bin [a, b] for the Gaussian form:
/// the shape peaks where |y| = c2.
double gauss_shape_max(double a, double b, double c2, double denom) {
    auto shape = [&](double y) {
        const double dev = std::abs(y) - c2;
        return std::exp(-dev * dev / denom);
    };
    double best = std::max(shape(a), shape(b));
    if (a < c2 && c2 < b) best = 1.0;
    if (a < -c2 && -c2 < b) best = 1.0;
    if (a < 0.0 && 0.0 < b) best = std::max(best, shape(0.0));
    return best;
}

}  // namespace

GaussianEnvelopeParams fit_gaussian_envelope(const Histogram& hist, double c2, double c3,
                                             double c4, double t, double hurst) {
    const double denom = c3 * std::exp(c4 * t) * std::pow(t, 2.0 * hurst);
    double c1 = 0.0;
    for (std::size_t b = 0; b + 1 < hist.edges.size(); ++b) {
        const double shape = gauss_shape_max(hist.edges[b], hist.edges[b + 1], c2, denom);
        c1 = std::max(c1, hist.band_hi[b] / shape);
    }
    return {c1, c2, c3, c4};
}

SubGaussianEnvelopeParams fit_subgaussian_envelope(const Histogram& hist, double delta,
                                                   int min_count) {
    // Least squares of log band_hi against |y|^delta on populated bins.
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (std::size_t b = 0; b + 1 < hist.edges.size(); ++b) {
        if (hist.count[b] < min_count) continue;
        const double y = 0.5 * (hist.edges[b] + hist.edges[b + 1]);
        const double x = std::pow(std::abs(y), delta);
        const double v = std::log(hist.band_hi[b]);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
        m += 1;
    }
    if (m < 3) throw std::invalid_argument("fit_subgaussian_envelope: too few populated bins");
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double c2 = std::max(1e-6, -slope);
    // Smallest covering c1 at the shallow end of each bin.
    double c1 = 0.0;
    for (std::size_t b = 0; b + 1 < hist.edges.size(); ++b) {
        const double a = hist.edges[b], bb = hist.edges[b + 1];
        double ymin = std::min(std::abs(a), std::abs(bb));
        if (a < 0.0 && 0.0 < bb) ymin = 0.0;
        c1 = std::max(c1, hist.band_hi[b] * std::exp(c2 * std::pow(ymin, delta)));
    }
    return {c1, c2, delta};
}

InequalityReport envelope_check(const Histogram& hist, const GaussianEnvelopeParams& env,
                                double t, double hurst) {
    InequalityReport rep;
    rep.name = "gaussian-envelope";
    const double denom = env.c3 * std::exp(env.c4 * t) * std::pow(t, 2.0 * hurst);
    double worst = -1e300;
    for (std::size_t b = 0; b + 1 < hist.edges.size(); ++b) {
        const double bound =
            env.c1 * gauss_shape_max(hist.edges[b], hist.edges[b + 1], env.c2, denom);
        const double excess = hist.band_hi[b] - bound;
        if (excess > worst) {
            worst = excess;
            rep.lhs = hist.band_hi[b];
            rep.rhs = bound;
        }
    }
    rep.std_error = 0.0;  // the band already carries the MC uncertainty
    rep.pass = rep.lhs <= rep.rhs + 1e-12;
    rep.params = json{{"c1", env.c1}, {"c2", env.c2}, {"c3", env.c3}, {"c4", env.c4}}.dump();
    return rep;
}

InequalityReport envelope_check(const Histogram& hist, const SubGaussianEnvelopeParams& env) {
    InequalityReport rep;
    rep.name = "subgaussian-envelope";
    double worst = -1e300;
    for (std::size_t b = 0; b + 1 < hist.edges.size(); ++b) {
        const double a = hist.edges[b], bb = hist.edges[b + 1];
        double ymin = std::min(std::abs(a), std::abs(bb));
        if (a < 0.0 && 0.0 < bb) ymin = 0.0;
        const double bound = env.value(ymin);
        const double excess = hist.band_hi[b] - bound;
        if (excess > worst) {
            worst = excess;
            rep.lhs = hist.band_hi[b];
            rep.rhs = bound;
        }
    }
    rep.std_error = 0.0;
    rep.pass = rep.lhs <= rep.rhs + 1e-12;
    rep.params = json{{"c1", env.c1}, {"c2", env.c2}, {"delta", env.delta}}.dump();
    return rep;
}

InequalityReport concentration_check(const Ensemble& ens, double m_const, double c_const,
                                     double lambda) {
    const double t = ens.config.horizon;
    const double h = ens.config.hurst.h;
    const double denom = 2.0 * m_const * m_const * std::exp(2.0 * c_const * t) *
                         std::pow(t, 2.0 * h);
    const double bound = lambda == 0.0 ? 1.0 : std::exp(-lambda * lambda / denom);

    const double n = static_cast<double>(ens.sup_abs.size());
    const double mean = ens.sup_abs.mean();
    double k = 0.0;
    for (Eigen::Index i = 0; i < ens.sup_abs.size(); ++i) {
        if (ens.sup_abs(i) - mean >= lambda) k += 1.0;
    }
    InequalityReport rep;
    rep.name = "concentration";
    rep.lhs = wilson_upper(k, n, 3.0);
    rep.rhs = bound;
    rep.std_error = 0.0;  // folded into the Wilson band
    rep.pass = rep.lhs <= rep.rhs;
    rep.params = json{{"lambda", lambda}, {"M", m_const}, {"C", c_const}, {"T", t}}.dump();
    return rep;
}

namespace {

struct EntStats {
    double entropy;
    double variance;
    double mean_grad_sq;
};

EntStats stats_from(const std::vector<double>& f_vals, const std::vector<double>& g_vals,
                    const std::vector<std::size_t>* idx) {
    const std::size_t n = f_vals.size();
    double sf2 = 0, sf = 0, sg = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t i = idx ? (*idx)[q] : q;
        sf += f_vals[i];
        sf2 += f_vals[i] * f_vals[i];
        sg += g_vals[i];
    }
    const double m2 = sf2 / n;
    const double mf = sf / n;
    // Ent = E[f^2 ln(f^2 / E f^2)]: identical algebraically, and exactly zero
    // for constant f where the split form leaves rounding residue.
    double ent = 0, var = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t i = idx ? (*idx)[q] : q;
        const double f2 = f_vals[i] * f_vals[i];
        if (f2 > 0.0 && m2 > 0.0) ent += f2 * std::log(f2 / m2);
        var += (f_vals[i] - mf) * (f_vals[i] - mf);
    }
    EntStats s{};
    s.entropy = ent / n;
    s.variance = var / n;
    s.mean_grad_sq = sg / n;
    return s;
}

InequalityReport functional_check(const Ensemble& ens, const TestFunction& fn, double m_const,
                                  double c_const, int bootstrap, std::uint64_t boot_seed,
                                  bool logsobolev) {
    const std::size_t n = static_cast<std::size_t>(ens.terminal.cols());
    std::vector<double> f_vals(n), g_vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec x = ens.terminal.col(static_cast<Eigen::Index>(i));
        f_vals[i] = fn.f(x);
        g_vals[i] = fn.grad(x).squaredNorm();
    }
    const double t = ens.config.horizon;
    const double factor = (logsobolev ? 2.0 : 1.0) * m_const * m_const *
                          std::exp(2.0 * c_const * t) * std::pow(t, 2.0 * ens.config.hurst.h);

    auto gap = [&](const std::vector<std::size_t>* idx) {
        const EntStats s = stats_from(f_vals, g_vals, idx);
        const double lhs = logsobolev ? s.entropy : s.variance;
        return std::pair<double, double>(lhs, factor * s.mean_grad_sq);
    };

    InequalityReport rep;
    rep.name = logsobolev ? "log-sobolev" : "poincare";
    auto [lhs, rhs] = gap(nullptr);
    rep.lhs = lhs;
    rep.rhs = rhs;

    // Bootstrap the gap; resampling is deterministic given boot_seed.
    std::mt19937_64 eng(boot_seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> gaps(static_cast<std::size_t>(bootstrap));
    std::vector<std::size_t> idx(n);
    for (int b = 0; b < bootstrap; ++b) {
        for (auto& i : idx) i = pick(eng);
        auto [l, r] = gap(&idx);
        gaps[static_cast<std::size_t>(b)] = l - r;
    }
    double mean = 0;
    for (double v : gaps) mean += v;
    mean /= bootstrap;
    double var = 0;
    for (double v : gaps) var += (v - mean) * (v - mean);
    rep.std_error = std::sqrt(var / std::max(1, bootstrap - 1));
    rep.pass = rep.lhs <= rep.rhs + 3.0 * rep.std_error + 1e-14 * (1.0 + std::abs(rep.rhs));
    rep.params = json{{"f", fn.name}, {"M", m_const}, {"C", c_const}, {"T", t},
                      {"bootstrap", bootstrap}}.dump();
    return rep;
}

}  // namespace

InequalityReport logsobolev_check(const Ensemble& ens, const TestFunction& fn, double m_const,
                                  double c_const, int bootstrap, std::uint64_t boot_seed) {
    return functional_check(ens, fn, m_const, c_const, bootstrap, boot_seed, true);
}

InequalityReport poincare_check(const Ensemble& ens, const TestFunction& fn, double m_const,
                                double c_const, int bootstrap, std::uint64_t boot_seed) {
    return functional_check(ens, fn, m_const, c_const, bootstrap, boot_seed, false);
}

InequalityReport logsobolev_p_check(const Ensemble& ens, const TestFunction& fn, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("logsobolev_p_check: requires p > 1");
    const std::size_t n = static_cast<std::size_t>(ens.terminal.cols());
    std::vector<double> f_vals(n), g_vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec x = ens.terminal.col(static_cast<Eigen::Index>(i));
        f_vals[i] = fn.f(x);
        g_vals[i] = std::pow(fn.grad(x).squaredNorm(), p);
    }
    const EntStats s = stats_from(f_vals, g_vals, nullptr);
    InequalityReport rep;
    rep.name = "log-sobolev-p";
    rep.lhs = s.entropy;
    rep.rhs = std::pow(s.mean_grad_sq, 1.0 / p);  // the gradient moment, constant-free
    rep.std_error = 0.0;
    rep.pass = std::isfinite(rep.lhs) && std::isfinite(rep.rhs) && rep.rhs > 0.0;
    rep.params = json{{"f", fn.name},
                      {"p", p},
                      {"fitted_constant", rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0}}
                     .dump();
    return rep;
}

double fit_tail_constant(const std::vector<double>& norms, const std::vector<double>& r_grid,
                         double denom) {
    const double n = static_cast<double>(norms.size());
    double best = 0.0;
    for (double r : r_grid) {
        double k = 0.0;
        for (double v : norms) {
            if (v > r) k += 1.0;
        }
        best = std::max(best, (k / n) * std::exp(r * r / denom));
    }
    return best;
}

}  // namespace roughdense
