#include "roughdense/increments.hpp"

#include <cmath>
#include <memory>

#include "roughdense/holder.hpp"
#include "roughdense/parallel.hpp"

namespace roughdense {

Inc1 delta_path(const GridPath& g) {
    auto vals = std::make_shared<std::vector<double>>(g.v);
    return {g.grid, [vals](std::size_t i, std::size_t j) { return (*vals)[j] - (*vals)[i]; }};
}

Inc2 delta_inc(const Inc1& h) {
    auto f = h.eval;
    return {h.grid, [f](std::size_t i, std::size_t u, std::size_t j) {
                return f(i, j) - f(i, u) - f(u, j);
            }};
}

GridPath product(const GridPath& g, const GridPath& h) {
    std::vector<double> out(g.v.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.v[i] * h.v[i];
    return {g.grid, std::move(out)};
}

Inc1 product(const GridPath& g, const Inc1& h) {
    auto gv = std::make_shared<std::vector<double>>(g.v);
    auto f = h.eval;
    return {h.grid, [gv, f](std::size_t i, std::size_t j) { return (*gv)[i] * f(i, j); }};
}

Inc1 product(const Inc1& g, const GridPath& h) {
    auto hv = std::make_shared<std::vector<double>>(h.v);
    auto f = g.eval;
    return {g.grid, [hv, f](std::size_t i, std::size_t j) { return f(i, j) * (*hv)[j]; }};
}

Inc2 product(const Inc1& g, const Inc1& h) {
    auto fg = g.eval;
    auto fh = h.eval;
    return {g.grid, [fg, fh](std::size_t i, std::size_t u, std::size_t j) {
                return fg(i, u) * fh(u, j);
            }};
}

HolderReport norm_c2(const Inc1& f, double mu) {
    if (!(mu > 0.0 && mu < 2.0)) {
        throw std::invalid_argument("norm_c2: exponent must lie in (0, 2)");
    }
    auto times = f.grid.times();
    auto mag = [&f](std::size_t i, std::size_t j) { return std::abs(f(i, j)); };
    return {mu, 0.0, holder_sup(f.grid.points(), times, mag, mu)};
}

HolderReport norm_c3(const Inc2& h, double gamma, double rho) {
    if (!(gamma > 0.0 && gamma < 2.0 && rho > 0.0 && rho < 2.0)) {
        throw std::invalid_argument("norm_c3: exponents must lie in (0, 2)");
    }
    const std::size_t n = h.grid.points();
    auto times = h.grid.times();
    double worst = parallel_reduce_max(n, [&](std::size_t i) {
        double local = 0.0;
        for (std::size_t u = i + 1; u < n; ++u) {
            const double du = std::pow(times[u] - times[i], gamma);
            for (std::size_t j = u + 1; j < n; ++j) {
                const double v =
                    std::abs(h(i, u, j)) / (du * std::pow(times[j] - times[u], rho));
                if (v > local) local = v;
            }
        }
        return local;
    });
    return {gamma, rho, worst};
}

bool refinements_cauchy(const std::vector<double>& corrections, double scale) {
    const std::size_t k = corrections.size();
    if (k < 4) return true;
    if (corrections[k - 1] <= 1e-12 * (scale + 1.0)) return true;
    const double head = std::sqrt(corrections[0] * corrections[1]);
    const double tail = std::sqrt(corrections[k - 2] * corrections[k - 1]);
    return tail < 1.3 * head;
}

Inc1 sew(const Inc1& g, double mu, SewDiagnostics* diag) {
    if (!(mu > 1.0)) throw std::invalid_argument("sew: requires mu > 1");
    const std::size_t n = g.grid.cells();

    // Dyadic refinement sums over [0, T]; the last level is the full cell sum.
    std::vector<double> corrections;
    double prev = g(0, n);
    double scale = std::abs(prev);
    for (int k = 1; (std::size_t{1} << k) <= n; ++k) {
        const std::size_t chunks = std::size_t{1} << k;
        const std::size_t stride = n / chunks;
        double s = 0.0;
        for (std::size_t l = 0; l < chunks; ++l) s += g(l * stride, (l + 1) * stride);
        corrections.push_back(std::abs(s - prev));
        prev = s;
        if (std::abs(s) > scale) scale = std::abs(s);
    }
    if (diag) diag->level_corrections = corrections;

    if (!refinements_cauchy(corrections, scale)) {
        throw SewingError("sew: dyadic refinement sums are not Cauchy (mu <= 1 data?)");
    }

    auto prefix = std::make_shared<std::vector<double>>(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) (*prefix)[k + 1] = (*prefix)[k] + g(k, k + 1);
    return {g.grid,
            [prefix](std::size_t i, std::size_t j) { return (*prefix)[j] - (*prefix)[i]; }};
}

Inc1 iterated_integral2(const GridPath& f, const GridPath& g) {
    const std::size_t n = f.grid.cells();
    auto fv = std::make_shared<std::vector<double>>(f.v);
    auto gv = std::make_shared<std::vector<double>>(g.v);
    // Per-cell integral of f dg for linear segments: midpoint value times dg.
    auto prefix = std::make_shared<std::vector<double>>(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        (*prefix)[k + 1] =
            (*prefix)[k] + 0.5 * ((*fv)[k] + (*fv)[k + 1]) * ((*gv)[k + 1] - (*gv)[k]);
    }
    return {f.grid, [prefix, fv, gv](std::size_t i, std::size_t j) {
                return ((*prefix)[j] - (*prefix)[i]) - (*fv)[i] * ((*gv)[j] - (*gv)[i]);
            }};
}

}  // namespace roughdense
