#include "kernels.hpp"

#include <cmath>

#include "toa/parallel.hpp"

namespace toa::detail {

void time_map_serial(const std::vector<double>& energy, const std::vector<cplx>& weight,
                     const TimeGrid& grid, std::vector<cplx>& out) {
    out.assign(grid.n_points, cplx(0.0, 0.0));
    for (int j = 0; j < grid.n_points; ++j) {
        const double t = grid.at(j);
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < energy.size(); ++i)
            acc += weight[i] * std::polar(1.0, -energy[i] * t);
        out[j] = acc;
    }
}

void time_map_blocked(const std::vector<double>& energy, const std::vector<cplx>& weight,
                      const TimeGrid& grid, std::vector<cplx>& out, bool parallel) {
    constexpr int kBlock = 64;
    const int n = grid.n_points;
    const std::size_t m = energy.size();
    out.assign(n, cplx(0.0, 0.0));

    std::vector<cplx> rot(m);
    const double dt = grid.dt();
    for (std::size_t i = 0; i < m; ++i) rot[i] = std::polar(1.0, -energy[i] * dt);

    const std::ptrdiff_t nblocks = (n + kBlock - 1) / kBlock;
    auto body = [&](std::ptrdiff_t b) {
        const int j0 = static_cast<int>(b) * kBlock;
        const int j1 = std::min(n, j0 + kBlock);
        const double t0 = grid.at(j0);
        cplx local[kBlock];
        for (int j = j0; j < j1; ++j) local[j - j0] = cplx(0.0, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            cplx z = weight[i] * std::polar(1.0, -energy[i] * t0);
            const cplx r = rot[i];
            for (int j = j0; j < j1; ++j) {
                local[j - j0] += z;
                z *= r;
            }
        }
        for (int j = j0; j < j1; ++j) out[j] = local[j - j0];
    };
    if (parallel) {
        parallel_for(nblocks, body);
    } else {
        for (std::ptrdiff_t b = 0; b < nblocks; ++b) body(b);
    }
}

void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const cplx wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace toa::detail
