#pragma once

// Internal time-map kernels: out[j] = sum_i weight[i] exp(-i energy[i] t_j).
// The blocked OpenMP kernel and the straightforward serial reference must
// agree; the unit tests and the benchmark target compare them.

#include <vector>

#include "toa/distribution.hpp"
#include "toa/packet.hpp"

namespace toa::detail {

// Reference implementation: one complex exponential per (node, time) pair.
void time_map_serial(const std::vector<double>& energy, const std::vector<cplx>& weight,
                     const TimeGrid& grid, std::vector<cplx>& out);

// Production kernel: fixed blocks of 64 grid points, one exponential per
// (node, block) plus incremental phase rotation inside a block.  Blocks are
// the parallel unit, so results are bit-identical for any worker count.
void time_map_blocked(const std::vector<double>& energy, const std::vector<cplx>& weight,
                      const TimeGrid& grid, std::vector<cplx>& out, bool parallel);

// In-place power-of-two FFT, sign = -1 for exp(-i 2 pi j k / n).
void fft_pow2(std::vector<cplx>& a, int sign);

}  // namespace toa::detail
