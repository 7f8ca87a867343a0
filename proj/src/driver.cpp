#include "roughdense/driver.hpp"

#include <cmath>
#include <stdexcept>

#include "roughdense/holder.hpp"
#include "roughdense/parallel.hpp"

namespace roughdense {

namespace {

std::vector<Mat> build_prefix(const Mat& values) {
    const auto pts = static_cast<std::size_t>(values.cols());
    const auto d = values.rows();
    std::vector<Mat> prefix(pts, Mat::Zero(d, d));
    for (std::size_t k = 0; k + 1 < pts; ++k) {
        const Vec db = values.col(k + 1) - values.col(k);
        // Chen step: B2_{0,k+1} = B2_{0,k} + cell + B1_{0,k} (x) dB.
        prefix[k + 1] = prefix[k] + 0.5 * db * db.transpose() +
                        values.col(k) * db.transpose();
    }
    return prefix;
}

}  // namespace

double EnhancedDriver::norm_level1(double gamma_) const {
    auto times = grid.times();
    auto mag = [this](std::size_t i, std::size_t j) { return b1(i, j).norm(); };
    return holder_sup(grid.points(), times, mag, gamma_);
}

double EnhancedDriver::norm_level2(double gamma2) const {
    auto times = grid.times();
    auto mag = [this](std::size_t i, std::size_t j) { return spectral_norm(b2(i, j)); };
    return holder_sup(grid.points(), times, mag, gamma2);
}

double EnhancedDriver::chen_defect() const {
    const std::size_t pts = grid.points();
    // All triples up to level 10; coarser stride beyond to stay near 1e8 evals.
    std::size_t stride = 1;
    while ((pts / stride) > 1025) stride *= 2;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pts; i += stride) idx.push_back(i);
    if (idx.back() != pts - 1) idx.push_back(pts - 1);
    const std::size_t m = idx.size();
    return parallel_reduce_max(m, [&](std::size_t a) {
        double worst = 0.0;
        for (std::size_t b = a + 1; b < m; ++b) {
            for (std::size_t c = b + 1; c < m; ++c) {
                const std::size_t s = idx[a], u = idx[b], t = idx[c];
                Mat defect = b2(s, t) - b2(s, u) - b2(u, t) - b1(s, u) * b1(u, t).transpose();
                double v = defect.cwiseAbs().maxCoeff();
                if (v > worst) worst = v;
            }
        }
        return worst;
    });
}

EnhancedDriver levy_area(const FbmSample& sample, int interpolation_level) {
    if (interpolation_level < 1 || interpolation_level > sample.grid.level) {
        throw std::invalid_argument("levy_area: interpolation level out of range");
    }
    Mat vals = interpolation_level == sample.grid.level
                   ? sample.values
                   : interpolate_dyadic(sample, interpolation_level).values;
    EnhancedDriver out{sample.grid, sample.hurst, sample.d, interpolation_level,
                       sample.hurst.h - 0.05, std::move(vals), {}};
    out.l2_prefix = build_prefix(out.values);
    return out;
}

EnhancedDriver levy_area(const FbmSample& sample) {
    return levy_area(sample, sample.grid.level);
}

EnhancedDriver enhance_path(const TimeGrid& grid, HurstParam hurst, const Mat& values,
                            double gamma) {
    if (static_cast<std::size_t>(values.cols()) != grid.points()) {
        throw std::invalid_argument("enhance_path: values shape does not match grid");
    }
    EnhancedDriver out{grid, hurst, static_cast<int>(values.rows()), grid.level, gamma,
                       values, {}};
    out.l2_prefix = build_prefix(out.values);
    return out;
}

std::vector<double> levy_refinement_distances(const FbmSample& sample, int base_level,
                                              int max_level, double gamma) {
    if (base_level < 1 || max_level > sample.grid.level || base_level >= max_level) {
        throw std::invalid_argument("levy_refinement_distances: bad level range");
    }
    // Prefix arrays per interpolation level, all restricted to the base grid.
    const std::size_t nb = (std::size_t{1} << base_level) + 1;
    std::vector<double> tb(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        tb[i] = sample.grid.t(i << (sample.grid.level - base_level));
    }
    const double g2 = 2.0 * gamma;

    std::vector<std::vector<Mat>> p2(max_level - base_level + 1);
    std::vector<Mat> vals(max_level - base_level + 1);
    for (int lvl = base_level; lvl <= max_level; ++lvl) {
        EnhancedDriver drv = levy_area(sample, lvl);
        const std::size_t stride = std::size_t{1} << (sample.grid.level - base_level);
        std::vector<Mat> pref(nb);
        Mat v(sample.d, nb);
        for (std::size_t i = 0; i < nb; ++i) {
            pref[i] = drv.l2_prefix[i * stride];
            v.col(i) = drv.values.col(i * stride);
        }
        p2[lvl - base_level] = std::move(pref);
        vals[lvl - base_level] = std::move(v);
    }

    auto b2_at = [&](int k, std::size_t i, std::size_t j) -> Mat {
        return p2[k][j] - p2[k][i] -
               vals[k].col(i) * (vals[k].col(j) - vals[k].col(i)).transpose();
    };

    std::vector<double> dist;
    for (int lvl = base_level; lvl < max_level; ++lvl) {
        const int k = lvl - base_level;
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < nb; ++i) {
            for (std::size_t j = i + 1; j < nb; ++j) {
                const Mat diff = b2_at(k + 1, i, j) - b2_at(k, i, j);
                const double v = spectral_norm(diff) / std::pow(tb[j] - tb[i], g2);
                if (v > worst) worst = v;
            }
        }
        dist.push_back(worst);
    }
    return dist;
}

}  // namespace roughdense
