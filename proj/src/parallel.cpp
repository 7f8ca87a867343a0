#include "roughdense/parallel.hpp"

#include <thread>

namespace roughdense {

namespace {
int g_max_threads = 0;
}

int hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void set_max_threads(int n) { g_max_threads = n < 0 ? 0 : n; }

int max_threads() {
    return g_max_threads > 0 ? g_max_threads : hardware_threads();
}

}  // namespace roughdense
