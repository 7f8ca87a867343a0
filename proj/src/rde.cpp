#include "roughdense/rde.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "roughdense/holder.hpp"

namespace roughdense {

double SolutionPath::holder_norm(double gamma) const {
    auto times = grid.times();
    auto mag = [this](std::size_t i, std::size_t j) {
        return (values.col(j) - values.col(i)).norm();
    };
    return holder_sup(grid.points(), times, mag, gamma);
}

Vec SolutionPath::remainder(std::size_t i, std::size_t j, const EnhancedDriver& driver) const {
    const std::size_t stride = std::size_t{1} << (driver.grid.level - grid.level);
    return (values.col(j) - values.col(i)) - zeta[i] * driver.b1(i * stride, j * stride);
}

double SolutionPath::remainder_slope(const EnhancedDriver& driver) const {
    auto times = grid.times();
    auto mag = [&](std::size_t i, std::size_t j) { return remainder(i, j, driver).norm(); };
    return dyadic_scale_slope(grid.points(), times, mag);
}

SolutionPath solve(const VectorFieldSystem& sys, const EnhancedDriver& driver, const Vec& x0,
                   const SolverConfig& config) {
    if (config.level < 1 || config.level > driver.grid.level) {
        throw std::invalid_argument("solve: stepping level must lie in [1, driver level]");
    }
    if (config.scheme == Scheme::Euler && driver.hurst.regime() == Regime::Rough) {
        throw std::invalid_argument("solve: Euler scheme requires the Young regime (h > 1/2)");
    }
    if (x0.size() != sys.d || sys.d != driver.d) {
        throw std::invalid_argument("solve: dimension mismatch");
    }
    const int d = sys.d;
    TimeGrid grid(driver.grid.horizon, config.level);
    const std::size_t steps = grid.cells();
    const std::size_t stride = std::size_t{1} << (driver.grid.level - config.level);

    SolutionPath out{grid, Mat(d, steps + 1), {}};
    out.zeta.reserve(steps + 1);
    out.values.col(0) = x0;
    Vec x = x0;
    out.zeta.push_back(sys.frame(x));
    for (std::size_t k = 0; k < steps; ++k) {
        const std::size_t a = k * stride, b = (k + 1) * stride;
        const double dt = grid.dt();
        const Vec b1 = driver.b1(a, b);
        Vec incr = sys.v0(x) * dt + out.zeta[k] * b1;
        if (config.scheme == Scheme::Davie) {
            const Mat b2 = driver.b2(a, b);
            for (int i1 = 0; i1 < d; ++i1) {
                for (int i2 = 0; i2 < d; ++i2) {
                    incr += sys.dir_deriv_field(x, i1, i2) * b2(i1, i2);
                }
            }
        }
        x += incr;
        if (!x.allFinite()) {
            throw std::runtime_error("solve: non-finite state at step " + std::to_string(k));
        }
        out.values.col(k + 1) = x;
        out.zeta.push_back(sys.frame(x));
    }
    return out;
}

Inc1 young_integral(const GridPath& g, const GridPath& f, double gamma, double kappa) {
    if (!(gamma + kappa > 1.0)) {
        throw std::invalid_argument("young_integral: requires gamma + kappa > 1");
    }
    auto gv = std::make_shared<std::vector<double>>(g.v);
    auto fv = std::make_shared<std::vector<double>>(f.v);
    Inc1 germ{g.grid, [gv, fv](std::size_t i, std::size_t j) {
                  return (*gv)[i] * ((*fv)[j] - (*fv)[i]);
              }};
    return sew(germ, gamma + kappa);
}

RoughIntegralResult rough_integral(const ControlledPath& m, const EnhancedDriver& driver) {
    if (m.values.rows() != driver.d) {
        throw std::invalid_argument("rough_integral: controlled path must have d rows");
    }
    if (m.grid.level > driver.grid.level) {
        throw std::invalid_argument("rough_integral: path grid finer than driver grid");
    }
    const std::size_t stride = std::size_t{1} << (driver.grid.level - m.grid.level);
    const std::size_t n = m.grid.cells();

    auto cell_term = [&](std::size_t i, std::size_t j) {
        const std::size_t a = i * stride, b = j * stride;
        double s = m.values.col(i).dot(driver.b1(a, b));
        const Mat b2 = driver.b2(a, b);
        // mu^{i i1} pairs with B2^{i1 i}: derivative index in the first slot.
        for (int ii = 0; ii < driver.d; ++ii)
            for (int i1 = 0; i1 < driver.d; ++i1) s += m.coeff[i](ii, i1) * b2(i1, ii);
        return s;
    };

    RoughIntegralResult res{{m.grid, nullptr}, {}};
    double prev = cell_term(0, n);
    for (int k = 1; (std::size_t{1} << k) <= n; ++k) {
        const std::size_t chunks = std::size_t{1} << k;
        const std::size_t w = n / chunks;
        double s = 0.0;
        for (std::size_t l = 0; l < chunks; ++l) s += cell_term(l * w, (l + 1) * w);
        res.level_corrections.push_back(std::abs(s - prev));
        prev = s;
    }
    if (!refinements_cauchy(res.level_corrections, std::abs(prev))) {
        throw std::runtime_error("rough_integral: compensated sums are not Cauchy");
    }

    auto prefix = std::make_shared<std::vector<double>>(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) (*prefix)[k + 1] = (*prefix)[k] + cell_term(k, k + 1);
    res.increment.eval = [prefix](std::size_t i, std::size_t j) {
        return (*prefix)[j] - (*prefix)[i];
    };
    return res;
}

ControlledPath controlled_compose(const std::function<Vec(const Vec&)>& phi,
                                  const std::function<Mat(const Vec&)>& jac, int out_dim,
                                  const SolutionPath& z) {
    const std::size_t pts = z.grid.points();
    const int d = static_cast<int>(z.values.rows());
    ControlledPath out{z.grid, Mat(out_dim, pts), {}};
    out.coeff.reserve(pts);
    for (std::size_t k = 0; k < pts; ++k) {
        const Vec x = z.values.col(k);
        out.values.col(k) = phi(x);
        Mat dphi;
        if (jac) {
            dphi = jac(x);
        } else {
            dphi.resize(out_dim, d);
            const double h = 1e-6 * (1.0 + x.norm());
            Vec xp = x, xm = x;
            for (int c = 0; c < d; ++c) {
                xp(c) += h;
                xm(c) -= h;
                dphi.col(c) = (phi(xp) - phi(xm)) / (2.0 * h);
                xp(c) = x(c);
                xm(c) = x(c);
            }
        }
        out.coeff.push_back(dphi * z.zeta[k]);
    }
    return out;
}

double apriori_ratio(const SolutionPath& x, const EnhancedDriver& driver, double gamma) {
    const double nx = x.holder_norm(gamma);
    const double n1 = driver.norm_level1(gamma);
    const double n2 = driver.norm_level2(2.0 * gamma);
    return nx / (1.0 + std::pow(n1, 1.0 / gamma) + std::pow(n2, 1.0 / (2.0 * gamma)));
}

}  // namespace roughdense
