#pragma once

#include <cstddef>
#include <memory>
#include <type_traits>

namespace toa {

// Number of workers used by the parallel kernels.  The TOA_THREADS
// environment variable caps it; the default is the machine parallelism
// reported by the OpenMP runtime (1 in builds without OpenMP).
int worker_count();

// Testing/benchmark hook; n <= 0 restores the environment-driven default.
void set_worker_count(int n);

namespace detail {
void parallel_for_impl(std::ptrdiff_t n, void (*body)(std::ptrdiff_t, void*), void* ctx);
}

// Parallel map over [0, n).  The body must write only to its own index so
// results are identical for any worker count.
template <class F>
void parallel_for(std::ptrdiff_t n, F&& f) {
    using Fn = std::remove_reference_t<F>;
    auto thunk = [](std::ptrdiff_t i, void* ctx) { (*static_cast<Fn*>(ctx))(i); };
    detail::parallel_for_impl(n, thunk, static_cast<void*>(std::addressof(f)));
}

}  // namespace toa
