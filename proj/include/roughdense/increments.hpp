#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "roughdense/grid.hpp"

namespace roughdense {

/// Scalar path on a grid (a 0-increment).
struct GridPath {
    TimeGrid grid;
    std::vector<double> v;

    GridPath(TimeGrid g, std::vector<double> values) : grid(g), v(std::move(values)) {
        if (v.size() != grid.points()) {
            throw std::invalid_argument("GridPath: size does not match grid");
        }
    }
};

/// 1-increment: evaluator on grid pairs (i, j), i <= j, vanishing on the
/// diagonal. Stored as a formula (or prefix sums when additive) rather than
/// a dense pair table.
struct Inc1 {
    TimeGrid grid;
    std::function<double(std::size_t, std::size_t)> eval;

    double operator()(std::size_t i, std::size_t j) const { return eval(i, j); }
};

/// 2-increment: evaluator on grid triples (i, u, j), i <= u <= j.
struct Inc2 {
    TimeGrid grid;
    std::function<double(std::size_t, std::size_t, std::size_t)> eval;

    double operator()(std::size_t i, std::size_t u, std::size_t j) const {
        return eval(i, u, j);
    }
};

struct HolderReport {
    double exponent_gamma = 0.0;
    double exponent_rho = 0.0;  // zero for 1-increments
    double norm = 0.0;
};

/// (delta g)_{st} = g_t - g_s.
Inc1 delta_path(const GridPath& g);

/// (delta h)_{sut} = h_{st} - h_{su} - h_{ut}; delta of delta_path is zero.
Inc2 delta_inc(const Inc1& h);

/// Products per the graded convolution rule; only ranks with n+m-1 <= 3.
GridPath product(const GridPath& g, const GridPath& h);  // (gh)_t   = g_t h_t
Inc1 product(const GridPath& g, const Inc1& h);          // (gh)_{st} = g_s h_{st}
Inc1 product(const Inc1& g, const GridPath& h);          // (gh)_{st} = g_{st} h_t
Inc2 product(const Inc1& g, const Inc1& h);              // (gh)_{sut} = g_{su} h_{ut}

/// Exact grid suprema of the Hölder semi-norms.
HolderReport norm_c2(const Inc1& f, double mu);
/// |h_{sut}| / (|u-s|^gamma |t-u|^rho); O(points^3), meant for test-size grids.
HolderReport norm_c3(const Inc2& h, double gamma, double rho);

struct SewDiagnostics {
    std::vector<double> level_corrections;  // dyadic refinement corrections on [0, T]
};

/// Heuristic Cauchy test on dyadic refinement corrections: healthy mu > 1
/// data contracts them by ~2^(1-mu) per level, divergent data grows them.
/// Flags only clear growth, so short noisy sequences are not rejected.
bool refinements_cauchy(const std::vector<double>& corrections, double scale);

class SewingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Sewing: the limit of Riemann sums of g over dyadic refinements inside
/// [s, t], reached exactly on the grid once the refinement hits every cell.
/// Returns an additive increment (prefix-sum backed). Detects mu <= 1 data
/// through non-Cauchy refinement corrections.
Inc1 sew(const Inc1& g, double mu, SewDiagnostics* diag = nullptr);

/// J(df dg)_{st} = int_s^t (f_u - f_s) dg_u for piecewise-linear f, g;
/// exact segment-wise double integral, O(1) per pair via prefix arrays.
Inc1 iterated_integral2(const GridPath& f, const GridPath& g);

}  // namespace roughdense
