#include "toa/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace toa {

namespace {

std::atomic<int> g_override{0};

int env_workers() {
    const char* s = std::getenv("TOA_THREADS");
    if (s != nullptr) {
        char* end = nullptr;
        long v = std::strtol(s, &end, 10);
        if (end != s && v >= 1) return static_cast<int>(v);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace

int worker_count() {
    int n = g_override.load(std::memory_order_relaxed);
    if (n > 0) return n;
    static const int from_env = env_workers();
    return from_env;
}

void set_worker_count(int n) { g_override.store(n > 0 ? n : 0, std::memory_order_relaxed); }

namespace detail {

void parallel_for_impl(std::ptrdiff_t n, void (*body)(std::ptrdiff_t, void*), void* ctx) {
    if (n <= 0) return;
#ifdef _OPENMP
    const int workers = worker_count();
    if (workers > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(workers)
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i, ctx);
        return;
    }
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i, ctx);
}

}  // namespace detail

}  // namespace toa
