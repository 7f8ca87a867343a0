#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "roughdense/malliavin.hpp"
#include "roughdense/rng.hpp"

using namespace roughdense;

namespace {

Mat random_matrix(int d, std::mt19937_64& eng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Mat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = u(eng);
    return a;
}

Mat random_skew(int d, std::mt19937_64& eng, double scale) {
    Mat a = random_matrix(d, eng, scale);
    return 0.5 * (a - a.transpose());
}

}  // namespace

TEST_CASE("skew exponential basics") {
    Mat zero = Mat::Zero(3, 3);
    auto rep0 = skew_exp_check(zero, zero, 100);
    CHECK(rep0.norm_exp_sum == doctest::Approx(1.0));
    CHECK(rep0.exp_norm_a1 == doctest::Approx(1.0));
    CHECK(rep0.duhamel_residual <= 1e-14);

    // rotation block: spectral norm one
    Mat rot = Mat::Zero(2, 2);
    rot(0, 1) = 0.8;
    rot(1, 0) = -0.8;
    auto rep1 = skew_exp_check(Mat::Zero(2, 2), rot, 200);
    CHECK(rep1.norm_exp_sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep1.duhamel_residual <= 1e-10);

    Mat notskew = Mat::Ones(2, 2);
    CHECK_THROWS(skew_exp_check(zero.topLeftCorner(2, 2), notskew, 10));
}

TEST_CASE("skew exponential inequality over random trials") {
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 2 + static_cast<int>(eng() % 7);
        const Mat a1 = random_matrix(d, eng, 1.0);
        const Mat a2 = random_skew(d, eng, 2.0);
        const Mat e = expm(a1 + a2);
        CHECK(spectral_norm(e) <= std::exp(spectral_norm(a1)) + 1e-10);
    }
}

TEST_CASE("duhamel residual decays at quadrature order two") {
    std::mt19937_64 eng(11);
    const Mat a1 = random_matrix(4, eng, 0.5);
    const Mat a2 = random_skew(4, eng, 0.5);
    const double r1 = skew_exp_check(a1, a2, 50).duhamel_residual;
    const double r2 = skew_exp_check(a1, a2, 100).duhamel_residual;
    const double r3 = skew_exp_check(a1, a2, 200).duhamel_residual;
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(r2 / r3 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("propagation on the constant orthonormal frame is the identity") {
    TimeGrid g(1.0, 7);
    auto s = sample_fbm(HurstParam(0.75), 2, g, 71);
    auto drv = levy_area(s);
    auto sys = constant_frame(2);
    auto sol = solve(sys, drv, Vec::Zero(2), {7, Scheme::Davie, 0.7});
    for (auto method : {PropagationMethod::ExpProduct, PropagationMethod::DavieM}) {
        auto m = propagate(sol, sys, drv, method);
        double worst = 0.0;
        for (const auto& mat : m.m) {
            worst = std::max(worst, (mat - Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("synthetic skew structure gives orthogonal factors") {
    TimeGrid g(1.0, 8);
    auto s = sample_fbm(HurstParam(0.75), 3, g, 73);
    auto drv = levy_area(s);
    auto sys = synthetic_skew(1.0, 0.0);
    auto sol = solve(sys, drv, Vec::Zero(3), {8, Scheme::Davie, 0.7});
    auto m = propagate(sol, sys, drv, PropagationMethod::ExpProduct);
    // every M_s is a product of orthogonal factors times V(X_T) = I
    for (const auto& mat : m.m) {
        CHECK((mat.transpose() * mat - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    }
    for (double v : m.spectral_norm_profile()) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK((m.m.back() - sys.frame(Vec::Zero(3))).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("exp-product and davie propagation agree") {
    TimeGrid g(1.0, 10);
    auto s = sample_fbm(HurstParam(0.75), 3, g, 79);
    auto drv = levy_area(s);
    auto sys = synthetic_skew(1.0, 0.3);
    auto sol = solve(sys, drv, Vec::Zero(3), {10, Scheme::Davie, 0.7});
    auto m1 = propagate(sol, sys, drv, PropagationMethod::ExpProduct);
    auto m2 = propagate(sol, sys, drv, PropagationMethod::DavieM);
    double worst = 0.0;
    for (std::size_t i = 0; i < m1.m.size(); ++i) {
        worst = std::max(worst, (m1.m[i] - m2.m[i]).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("deterministic bound margins") {
    TimeGrid g(1.0, 7);
    auto s = sample_fbm(HurstParam(0.75), 3, g, 83);
    auto drv = levy_area(s);

    // constant unit frame: bound M e^{CT} = 1 with sup norm exactly 1
    auto unit = constant_frame(3);
    auto sol = solve(unit, drv, Vec::Zero(3), {7, Scheme::Davie, 0.7});
    auto m = propagate(sol, unit, drv, PropagationMethod::ExpProduct);
    CHECK(deterministic_bound_margin(m, 1.0, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));

    // skew structure with omega0: margin stays nonnegative
    auto sys = synthetic_skew(1.3, 0.5);
    auto sol2 = solve(sys, drv, Vec::Zero(3), {7, Scheme::Davie, 0.7});
    auto m2 = propagate(sol2, sys, drv, PropagationMethod::ExpProduct);
    std::vector<Vec> pts{Vec::Zero(3)};
    auto [mc, cc] = constants_mc(sys, pts);
    CHECK(mc == doctest::Approx(1.0));
    CHECK(cc == doctest::Approx(0.5));
    CHECK(deterministic_bound_margin(m2, mc, cc, 1.0) >= -1e-10);
    // the sqrt(M) variant is the sharp one for orthonormal frames
    CHECK(deterministic_bound_margin(m2, std::sqrt(mc), cc, 1.0) >= -1e-10);

    // doubling the frame doubles the sup norm but quadruples M
    auto scaled = constant_frame(3, 2.0 * Mat::Identity(3, 3), Vec::Zero(3));
    auto sol3 = solve(scaled, drv, Vec::Zero(3), {7, Scheme::Davie, 0.7});
    auto m3 = propagate(sol3, scaled, drv, PropagationMethod::ExpProduct);
    CHECK(m3.sup_spectral_norm() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(deterministic_bound_margin(m3, 4.0, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("directional oracle agrees with propagation") {
    // d = 1, V(x) = x: D_s X_T = X_T for every s; the oracle rebuilds the
    // area from the shifted path and must land within O(eps).
    TimeGrid g(1.0, 9);
    auto sys = scalar_linear();
    auto s = sample_fbm(HurstParam(0.75), 1, g, 89);
    auto drv = levy_area(s);
    Vec x0 = Vec::Ones(1);
    SolverConfig cfg{9, Scheme::Davie, 0.7};
    auto sol = solve(sys, drv, x0, cfg);
    auto m = propagate(sol, sys, drv, PropagationMethod::ExpProduct);

    const std::size_t s_index = g.points() / 3;
    const double eps = 1e-4;
    const Vec col = directional_oracle(sys, s, cfg, x0, s_index, 0, eps);
    const double predicted = m.m[s_index](0, 0);
    CHECK(std::abs(col(0) - predicted) / std::abs(predicted) < 1e-2);

    // halving eps halves the eps-part of the defect: signed Richardson
    // differences isolate it from the discretization mismatch
    const Vec col2 = directional_oracle(sys, s, cfg, x0, s_index, 0, eps / 2);
    const Vec col4 = directional_oracle(sys, s, cfg, x0, s_index, 0, eps / 4);
    const double step1 = col(0) - col2(0);
    const double step2 = col2(0) - col4(0);
    CHECK(step1 / step2 == doctest::Approx(2.0).epsilon(0.05));

    // constant frame: the column is exactly V e_j for any s
    auto cf = constant_frame(2);
    auto s2 = sample_fbm(HurstParam(0.75), 2, TimeGrid(1.0, 7), 91);
    const Vec colc = directional_oracle(cf, s2, {7, Scheme::Davie, 0.7}, Vec::Zero(2),
                                        40, 1, 1e-5);
    CHECK(colc(0) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(colc(1) == doctest::Approx(1.0).epsilon(1e-10));

    auto rough = sample_fbm(HurstParam(0.4), 1, TimeGrid(1.0, 6), 93);
    CHECK_THROWS(directional_oracle(sys, rough, {6, Scheme::Davie, 0.35}, x0, 10, 0, 1e-4));
}

TEST_CASE("malliavin matrix gram identities") {
    // V = identity, M == I: gamma = R(T, T) I exactly, for both regimes.
    for (double h : {0.75, 0.35}) {
        TimeGrid g(1.0, 8);
        DerivativeProcess proc{g, std::vector<Mat>(g.points(), Mat::Identity(2, 2))};
        auto mm = malliavin_matrix(proc, HurstParam(h));
        CHECK((mm.gamma - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(mm.lambda_min == doctest::Approx(1.0).epsilon(1e-10));
        const Mat l2 = l2_gram(proc);
        CHECK(mm.lambda_min >= 0.9 * lambda_min_symmetric(l2));
    }

    // zero derivative -> zero matrix
    TimeGrid g(1.0, 6);
    DerivativeProcess zero{g, std::vector<Mat>(g.points(), Mat::Zero(2, 2))};
    CHECK(malliavin_matrix(zero, HurstParam(0.75)).gamma.cwiseAbs().maxCoeff() == 0.0);

    // symmetric PSD on a genuinely rotating derivative path
    {
        TimeGrid gr(1.0, 7);
        auto s = sample_fbm(HurstParam(0.45), 3, gr, 321);
        auto drv = levy_area(s);
        auto sys = synthetic_skew(1.0, 0.2);
        auto sol = solve(sys, drv, Vec::Zero(3), {7, Scheme::Davie, 0.4});
        auto m = propagate(sol, sys, drv, PropagationMethod::ExpProduct);
        auto mm = malliavin_matrix(m, HurstParam(0.45));
        CHECK((mm.gamma - mm.gamma.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(mm.lambda_min >= -1e-10);
    }

    // gram equals the MC covariance of sum_p f_p dB_p for step rows
    TimeGrid gg(1.0, 4);
    std::mt19937_64 eng(5);
    std::vector<Mat> rows(gg.points());
    for (auto& r : rows) r = random_matrix(1, eng, 1.0);
    DerivativeProcess proc1{gg, rows};
    auto mm = malliavin_matrix(proc1, HurstParam(0.7));
    CovarianceFactor factor(gg, HurstParam(0.7));
    const int n = 40000;
    double acc = 0.0, acc2 = 0.0;
    for (int k = 0; k < n; ++k) {
        auto sample = sample_fbm(factor, 1, derive_seed(99, k));
        double v = 0.0;
        for (std::size_t p = 0; p < gg.cells(); ++p) {
            v += rows[p](0, 0) * (sample.values(0, p + 1) - sample.values(0, p));
        }
        acc += v * v;
        acc2 += v * v * v * v;
    }
    const double mc = acc / n;
    const double se = std::sqrt((acc2 / n - mc * mc) / n);
    CHECK(std::abs(mm.gamma(0, 0) - mc) <= 3 * se);
}

TEST_CASE("holder bound ratio") {
    TimeGrid g(1.0, 8);
    auto s = sample_fbm(HurstParam(0.75), 3, g, 97);
    auto drv = levy_area(s);

    // constant frame: M is constant, ratio zero
    auto cf = constant_frame(3);
    auto sol = solve(cf, drv, Vec::Zero(3), {8, Scheme::Davie, 0.7});
    auto m = propagate(sol, cf, drv, PropagationMethod::ExpProduct);
    CHECK(holder_bound_ratio(m, drv, Vec::Zero(3), 0.7) == 0.0);

    // synthetic skew: finite and stable under refinement
    auto sys = synthetic_skew(1.0, 0.2);
    auto sol2 = solve(sys, drv, Vec::Zero(3), {8, Scheme::Davie, 0.7});
    auto m2 = propagate(sol2, sys, drv, PropagationMethod::ExpProduct);
    const double r = holder_bound_ratio(m2, drv, Vec::Zero(3), 0.7);
    CHECK(r > 0.0);
    CHECK(r < 50.0);

    // scaling the driver by c >= 1 leaves a non-increasing ratio trend
    std::vector<double> ratios;
    for (double c : {1.0, 2.0, 4.0}) {
        auto scaled = enhance_path(g, s.hurst, c * s.values, 0.7);
        auto solc = solve(sys, scaled, Vec::Zero(3), {8, Scheme::Davie, 0.7});
        auto mc = propagate(solc, sys, scaled, PropagationMethod::ExpProduct);
        ratios.push_back(holder_bound_ratio(mc, scaled, Vec::Zero(3), 0.7));
    }
    CHECK(ratios[2] <= ratios[0] * 1.05);
}
