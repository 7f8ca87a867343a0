#include "roughdense/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace roughdense {

using nlohmann::json;

Mat VectorFieldSystem::jacobian_of_field(const Vec& x, int j, double fd_step) const {
    if (jacobian) return jacobian(x, j);
    const double h = fd_step * (1.0 + x.norm());
    Mat out(d, d);
    Vec xp = x, xm = x;
    for (int c = 0; c < d; ++c) {
        xp(c) += h;
        xm(c) -= h;
        out.col(c) = (frame(xp).col(j) - frame(xm).col(j)) / (2.0 * h);
        xp(c) = x(c);
        xm(c) = x(c);
    }
    return out;
}

Vec VectorFieldSystem::dir_deriv_field(const Vec& x, int i1, int i2, double fd_step) const {
    return jacobian_of_field(x, i2, fd_step) * frame(x).col(i1);
}

Vec VectorFieldSystem::bracket(const Vec& x, int i, int j, double fd_step) const {
    const Mat v = frame(x);
    if (i == -1) {  // [V_0, V_j]
        const double h = fd_step * (1.0 + x.norm());
        Mat dv0(d, d);
        Vec xp = x, xm = x;
        for (int c = 0; c < d; ++c) {
            xp(c) += h;
            xm(c) -= h;
            dv0.col(c) = (v0(xp) - v0(xm)) / (2.0 * h);
            xp(c) = x(c);
            xm(c) = x(c);
        }
        return jacobian_of_field(x, j, fd_step) * v0(x) - dv0 * v.col(j);
    }
    return jacobian_of_field(x, j, fd_step) * v.col(i) -
           jacobian_of_field(x, i, fd_step) * v.col(j);
}

VectorFieldSystem constant_frame(int d, const Mat& v, const Vec& v0c) {
    VectorFieldSystem sys;
    sys.d = d;
    sys.name = "constant-frame";
    sys.v0 = [v0c](const Vec&) { return v0c; };
    sys.frame = [v](const Vec&) { return v; };
    sys.jacobian = [d](const Vec&, int) { return Mat::Zero(d, d); };
    sys.omega = [d](const Vec&, int) { return Mat::Zero(d, d); };
    sys.omega_dir_deriv = nullptr;
    return sys;
}

VectorFieldSystem constant_frame(int d) {
    return constant_frame(d, Mat::Identity(d, d), Vec::Zero(d));
}

namespace {

Mat so3_generator(int i) {
    Mat l = Mat::Zero(3, 3);
    // (L_i)_{kj} = eps_{ijk}: L_1 rotates the (2,3) plane, etc.
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    l(b, a) = 1.0;
    l(a, b) = -1.0;
    return l;
}

}  // namespace

VectorFieldSystem synthetic_skew(double theta, double omega0_scale) {
    VectorFieldSystem sys;
    sys.d = 3;
    sys.name = "synthetic-skew";
    sys.v0 = [](const Vec&) { return Vec::Zero(3); };
    sys.frame = [](const Vec&) { return Mat(Mat::Identity(3, 3)); };
    sys.jacobian = [](const Vec&, int) { return Mat(Mat::Zero(3, 3)); };
    // omega_0 is deliberately not skew (only its norm enters the bounds);
    // normalized so that ||omega_0|| = omega0_scale exactly.
    Mat w0(3, 3);
    w0 << 0.3, 1.0, 0.0,
         -1.0, 0.2, 0.4,
          0.1, 0.0, -0.5;
    w0 /= spectral_norm(w0);
    sys.omega = [theta, omega0_scale, w0](const Vec&, int i) -> Mat {
        if (i == 0) return omega0_scale * w0;
        return theta * so3_generator(i - 1);
    };
    sys.omega_dir_deriv = nullptr;  // constant structure functions
    return sys;
}

VectorFieldSystem scalar_linear() {
    VectorFieldSystem sys;
    sys.d = 1;
    sys.name = "scalar-linear";
    sys.v0 = [](const Vec&) { return Vec::Zero(1); };
    sys.frame = [](const Vec& x) {
        Mat v(1, 1);
        v(0, 0) = x(0);
        return v;
    };
    sys.jacobian = [](const Vec&, int) {
        Mat j(1, 1);
        j(0, 0) = 1.0;
        return j;
    };
    sys.omega = [](const Vec&, int) { return Mat(Mat::Zero(1, 1)); };
    sys.omega_dir_deriv = nullptr;
    return sys;
}

VectorFieldSystem poly2d(bool with_drift) {
    VectorFieldSystem sys;
    sys.d = 2;
    sys.name = with_drift ? "poly-2d" : "poly-2d-driftless";
    sys.v0 = [with_drift](const Vec& x) {
        Vec out(2);
        if (with_drift) {
            out << 0.2, -0.1 * x(0);
        } else {
            out.setZero();
        }
        return out;
    };
    sys.frame = [](const Vec& x) {
        Mat v(2, 2);
        v << 0.8 + 0.1 * x(1) * x(1), 0.1 * x(1),
             0.2 * x(0),              0.7 + 0.1 * x(0) * x(0);
        return v;
    };
    sys.jacobian = [](const Vec& x, int j) {
        Mat out = Mat::Zero(2, 2);
        if (j == 0) {
            out(0, 1) = 0.2 * x(1);
            out(1, 0) = 0.2;
        } else {
            out(0, 1) = 0.1;
            out(1, 0) = 0.2 * x(0);
        }
        return out;
    };
    sys.omega = nullptr;
    sys.omega_dir_deriv = nullptr;
    return sys;
}

VectorFieldSystem linear_fields(const std::vector<Mat>& a, const std::vector<Vec>& b,
                                const Vec& v0c) {
    const int d = static_cast<int>(a.size());
    VectorFieldSystem sys;
    sys.d = d;
    sys.name = "linear-fields";
    sys.v0 = [v0c](const Vec&) { return v0c; };
    sys.frame = [a, b, d](const Vec& x) {
        Mat v(d, d);
        for (int j = 0; j < d; ++j) v.col(j) = a[j] * x + b[j];
        return v;
    };
    sys.jacobian = [a](const Vec&, int j) { return a[j]; };
    // omega fitted pointwise: V(x) Omega_i(x).col(j) = [V_i, V_j](x).
    sys.omega = [a, b, d, v0c](const Vec& x, int i) -> Mat {
        Mat v(d, d);
        for (int j = 0; j < d; ++j) v.col(j) = a[j] * x + b[j];
        Mat rhs(d, d);
        for (int j = 0; j < d; ++j) {
            if (i == 0) {
                rhs.col(j) = a[j] * v0c;  // [V_0, V_j] for constant drift
            } else {
                const Vec vi = a[i - 1] * x + b[i - 1];
                const Vec vj = a[j] * x + b[j];
                rhs.col(j) = a[j] * vi - a[i - 1] * vj;
            }
        }
        return v.colPivHouseholderQr().solve(rhs);
    };
    sys.omega_dir_deriv = nullptr;
    return sys;
}

VectorFieldSystem system_from_json(const std::string& json_text) {
    const json cfg = json::parse(json_text);
    const std::string builtin = cfg.at("builtin").get<std::string>();
    if (builtin == "constant-frame") {
        const int d = cfg.value("d", 1);
        Mat v = Mat::Identity(d, d) * cfg.value("scale", 1.0);
        Vec v0c = Vec::Zero(d);
        if (cfg.contains("v0")) {
            auto vals = cfg.at("v0").get<std::vector<double>>();
            if (static_cast<int>(vals.size()) != d) {
                throw std::invalid_argument("system v0 has wrong dimension");
            }
            for (int i = 0; i < d; ++i) v0c(i) = vals[i];
        }
        return constant_frame(d, v, v0c);
    }
    if (builtin == "synthetic-skew") {
        return synthetic_skew(cfg.value("theta", 1.0), cfg.value("omega0", 0.0));
    }
    if (builtin == "scalar-linear") return scalar_linear();
    if (builtin == "poly-2d") return poly2d(true);
    if (builtin == "poly-2d-driftless") return poly2d(false);
    throw std::invalid_argument("unknown builtin system: " + builtin);
}

double check_basis(const VectorFieldSystem& sys, std::span<const Vec> points) {
    if (points.empty()) throw std::invalid_argument("check_basis: empty sample");
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& x : points) worst = std::min(worst, min_singular_value(sys.frame(x)));
    return worst;
}

double check_antisymmetry(const VectorFieldSystem& sys, std::span<const Vec> points) {
    if (!sys.has_omega()) throw std::invalid_argument("check_antisymmetry: system has no omega");
    double worst = 0.0;
    for (const auto& x : points) {
        for (int i = 1; i <= sys.d; ++i) {
            const Mat om = sys.omega(x, i);
            worst = std::max(worst, (om + om.transpose()).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

double check_bracket(const VectorFieldSystem& sys, std::span<const Vec> points,
                     double fd_step) {
    if (!sys.has_omega()) throw std::invalid_argument("check_bracket: system has no omega");
    double worst = 0.0;
    for (const auto& x : points) {
        const Mat v = sys.frame(x);
        for (int i = 1; i <= sys.d; ++i) {
            const Mat om = sys.omega(x, i);
            for (int j = 0; j < sys.d; ++j) {
                const Vec resid = sys.bracket(x, i - 1, j, fd_step) - v * om.col(j);
                worst = std::max(worst, resid.norm());
            }
        }
    }
    return worst;
}

double check_ellipticity(const VectorFieldSystem& sys, std::span<const Vec> points) {
    if (points.empty()) throw std::invalid_argument("check_ellipticity: empty sample");
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& x : points) {
        const Mat v = sys.frame(x);
        worst = std::min(worst, lambda_min_symmetric(v * v.transpose()));
    }
    return worst;
}

std::pair<double, double> constants_mc(const VectorFieldSystem& sys,
                                       std::span<const Vec> points) {
    if (points.empty()) throw std::invalid_argument("constants_mc: empty sample");
    double m = 0.0, c = 0.0;
    for (const auto& x : points) {
        const double nv = spectral_norm(sys.frame(x));
        m = std::max(m, nv * nv);
        if (sys.has_omega()) c = std::max(c, spectral_norm(sys.omega(x, 0)));
    }
    return {m, c};
}

HypothesisReport check_hypotheses(const VectorFieldSystem& sys, std::span<const Vec> points,
                                  double fd_step) {
    HypothesisReport rep;
    rep.min_singular_value = check_basis(sys, points);
    rep.ellipticity = check_ellipticity(sys, points);
    if (sys.has_omega()) {
        rep.antisymmetry_defect = check_antisymmetry(sys, points);
        rep.bracket_residual = check_bracket(sys, points, fd_step);
    }
    auto [m, c] = constants_mc(sys, points);
    rep.m_constant = m;
    rep.c_constant = c;
    return rep;
}

}  // namespace roughdense
