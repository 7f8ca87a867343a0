#include "roughdense/holder.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "roughdense/parallel.hpp"

namespace roughdense {

std::vector<std::pair<std::size_t, std::size_t>> holder_pairs(std::size_t points) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (points <= exact_pair_limit) {
        out.reserve(points * (points - 1) / 2);
        for (std::size_t i = 0; i + 1 < points; ++i)
            for (std::size_t j = i + 1; j < points; ++j) out.emplace_back(i, j);
    } else {
        for (std::size_t span = 1; span < points; span *= 2)
            for (std::size_t i = 0; i + span < points; ++i) out.emplace_back(i, i + span);
    }
    return out;
}

double holder_norm(const std::vector<double>& path, const TimeGrid& grid,
                   double gamma, std::size_t lo, std::size_t hi) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("holder_norm: gamma must lie in (0, 1)");
    }
    if (lo >= hi || hi >= path.size()) {
        throw std::invalid_argument("holder_norm: empty or invalid index range");
    }
    const std::size_t n = hi - lo + 1;
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = grid.t(lo + i);
    auto mag = [&](std::size_t i, std::size_t j) {
        return std::abs(path[lo + j] - path[lo + i]);
    };
    return holder_sup(n, times, mag, gamma);
}

namespace {

template <class Reduce>
double holder_sup_impl(std::size_t points, const std::vector<double>& times,
                       const IncrementMagnitude& mag, double mu, Reduce&& reduce) {
    auto pairs = holder_pairs(points);
    return reduce(pairs.size(), [&](std::size_t k) {
        auto [i, j] = pairs[k];
        double dt = times[j] - times[i];
        return mag(i, j) / std::pow(dt, mu);
    });
}

}  // namespace

double holder_sup(std::size_t points, const std::vector<double>& times,
                  const IncrementMagnitude& mag, double mu) {
    return holder_sup_impl(points, times, mag, mu,
                           [](std::size_t n, auto&& f) { return parallel_reduce_max(n, f); });
}

double holder_sup_serial(std::size_t points, const std::vector<double>& times,
                         const IncrementMagnitude& mag, double mu) {
    return holder_sup_impl(points, times, mag, mu,
                           [](std::size_t n, auto&& f) { return serial_reduce_max(n, f); });
}

double dyadic_scale_slope(std::size_t points, const std::vector<double>& times,
                          const IncrementMagnitude& mag) {
    // Scales are spans of 2^k cells; drop the two finest (round-off noise)
    // and the two coarsest (too few samples) before regressing.
    std::vector<double> lx, ly;
    for (std::size_t span = 1; span < points - 1; span *= 2) {
        double worst = 0.0;
        for (std::size_t i = 0; i + span < points; ++i) {
            double v = mag(i, i + span);
            if (v > worst) worst = v;
        }
        if (worst == 0.0) continue;  // identically-zero scale carries no slope information
        lx.push_back(std::log2(times[span] - times[0]));
        ly.push_back(std::log2(worst));
    }
    if (lx.empty()) return std::numeric_limits<double>::infinity();
    if (lx.size() < 5) throw std::invalid_argument("dyadic_scale_slope: grid too small");
    std::size_t a = 2, b = lx.size() - 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double m = static_cast<double>(b - a);
    for (std::size_t k = a; k < b; ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace roughdense
