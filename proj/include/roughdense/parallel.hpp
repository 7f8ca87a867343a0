#pragma once

#include <cstddef>
#include <limits>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace roughdense {

int hardware_threads();

/// Global worker-count used by parallel_for; 0 means "all available".
void set_max_threads(int n);
int max_threads();

/// Serial reference loop. Kept alongside the OpenMP kernel so tests can
/// assert the two produce identical results.
template <class F>
void serial_for(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        body(static_cast<std::size_t>(i));
    }
#else
    serial_for(n, std::forward<F>(body));
#endif
}

/// Max-reduction over i in [0, n). The result does not depend on the
/// iteration order, so the parallel kernel matches the serial one exactly.
template <class F>
double serial_reduce_max(std::size_t n, F&& value_of) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double v = value_of(i);
        if (v > best) best = v;
    }
    return best;
}

template <class F>
double parallel_reduce_max(std::size_t n, F&& value_of) {
#ifdef _OPENMP
    double best = -std::numeric_limits<double>::infinity();
    const int nt = max_threads();
#pragma omp parallel num_threads(nt)
    {
        double local = -std::numeric_limits<double>::infinity();
#pragma omp for schedule(static) nowait
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            double v = value_of(static_cast<std::size_t>(i));
            if (v > local) local = v;
        }
#pragma omp critical
        {
            if (local > best) best = local;
        }
    }
    return best;
#else
    return serial_reduce_max(n, std::forward<F>(value_of));
#endif
}

}  // namespace roughdense
