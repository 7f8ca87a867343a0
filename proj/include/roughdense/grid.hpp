#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace roughdense {

enum class Regime { Young, Rough };

/// Hurst parameter of the driving noise, restricted to the range where a
/// level-2 rough path is enough. The Young/Rough split decides which
/// integration machinery applies; h = 1/2 counts as Rough since Young
/// integration needs the exponents to sum strictly above 1.
struct HurstParam {
    double h;

    explicit HurstParam(double h_) : h(h_) {
        if (!(h > 1.0 / 3.0 && h < 1.0)) {
            throw std::invalid_argument("HurstParam: h must lie in (1/3, 1)");
        }
    }

    Regime regime() const { return h > 0.5 ? Regime::Young : Regime::Rough; }
};

/// Dyadic grid t_i = i 2^-m T on [0, T].
struct TimeGrid {
    double horizon;
    int level;

    TimeGrid(double horizon_, int level_) : horizon(horizon_), level(level_) {
        if (!(horizon > 0.0 && horizon <= 1.0)) {
            throw std::invalid_argument("TimeGrid: horizon must lie in (0, 1]");
        }
        if (level < 1 || level > 26) {
            throw std::invalid_argument("TimeGrid: level must lie in [1, 26]");
        }
    }

    std::size_t cells() const { return std::size_t{1} << level; }
    std::size_t points() const { return cells() + 1; }
    double dt() const { return horizon / static_cast<double>(cells()); }
    double t(std::size_t i) const {
        return horizon * static_cast<double>(i) / static_cast<double>(cells());
    }

    std::vector<double> times() const {
        std::vector<double> out(points());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = t(i);
        return out;
    }

    bool operator==(const TimeGrid& o) const {
        return horizon == o.horizon && level == o.level;
    }
};

}  // namespace roughdense
