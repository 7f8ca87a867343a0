// Benchmark the OpenMP kernels against their serial reference
// implementations: ensemble generation, Hölder-norm suprema, and the
// skew-exponential trial loop.

#include <chrono>
#include <cstdio>
#include <random>

#include "roughdense/density.hpp"
#include "roughdense/holder.hpp"
#include "roughdense/parallel.hpp"

using namespace roughdense;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
double timed(F&& fn) {
    const auto t0 = Clock::now();
    fn();
    return seconds_since(t0);
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-24s serial %8.3fs   omp %8.3fs   speedup %5.2fx   identical %s\n", name,
                serial, parallel, serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", hardware_threads());

    {
        auto sys = constant_frame(2);
        EnsembleConfig cfg{HurstParam(0.75)};
        cfg.level = 7;
        cfg.n_paths = 4000;
        cfg.base_seed = 7;
        cfg.x0 = Vec::Zero(2);
        Ensemble es{cfg}, ep{cfg};
        const double ts = timed([&] { es = build_ensemble_serial(sys, cfg); });
        const double tp = timed([&] { ep = build_ensemble(sys, cfg); });
        const bool same = (es.terminal - ep.terminal).cwiseAbs().maxCoeff() == 0.0 &&
                          (es.sup_abs - ep.sup_abs).cwiseAbs().maxCoeff() == 0.0;
        report("ensemble generation", ts, tp, same);
    }

    {
        TimeGrid g(1.0, 12);
        auto s = sample_fbm(HurstParam(0.6), 1, g, 11);
        auto times = g.times();
        auto mag = [&](std::size_t i, std::size_t j) {
            return std::abs(s.values(0, j) - s.values(0, i));
        };
        double ns = 0, np = 0;
        const double ts = timed([&] { ns = holder_sup_serial(g.points(), times, mag, 0.55); });
        const double tp = timed([&] { np = holder_sup(g.points(), times, mag, 0.55); });
        report("holder supremum", ts, tp, ns == np);
    }

    {
        std::mt19937_64 eng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const int trials = 3000;
        std::vector<Mat> a1s(trials), a2s(trials);
        for (int k = 0; k < trials; ++k) {
            const int d = 2 + static_cast<int>(eng() % 7);
            Mat a(d, d), b(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) a(i, j) = u(eng), b(i, j) = u(eng);
            a1s[k] = a;
            a2s[k] = 0.5 * (b - b.transpose());
        }
        auto worst_margin = [&](auto&& reduce) {
            return reduce(static_cast<std::size_t>(trials), [&](std::size_t k) {
                const double lhs = spectral_norm(expm(a1s[k] + a2s[k]));
                return lhs - std::exp(spectral_norm(a1s[k]));
            });
        };
        double ms = 0, mp = 0;
        const double ts = timed([&] {
            ms = worst_margin([](std::size_t n, auto&& f) { return serial_reduce_max(n, f); });
        });
        const double tp = timed([&] {
            mp = worst_margin([](std::size_t n, auto&& f) { return parallel_reduce_max(n, f); });
        });
        report("skew-exp trials", ts, tp, ms == mp);
        std::printf("  worst inequality margin: %.3e (negative means satisfied)\n", ms);
    }
    return 0;
}
