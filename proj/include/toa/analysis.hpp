#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "toa/distribution.hpp"
#include "toa/engine.hpp"
#include "toa/packet.hpp"

namespace toa {

struct SweepRow {
    double value = 0.0;          // swept parameter value
    double mean_toa = 0.0;       // phase-route mean (NaN when the row failed)
    double phase_time_p0 = 0.0;  // Wigner time at the packet's mean momentum
    double hartman = 0.0;        // t_H(a) = t0 - m a / p0
    double arrival_prob = 0.0;   // P(x)
    std::string error;           // empty when the row is clean
};

struct SweepResult {
    std::string parameter;  // "pV" or "a"
    double t0 = 0.0;        // free-flight reference m (x - q0) / p0
    double x = 0.0;
    std::vector<SweepRow> rows;
};

// Mean arrival time beyond a barrier of fixed width as a function of the
// barrier momentum pV (pV = 0 rows fall back to the free potential).
SweepResult sweep_barrier_height(const GaussianPacket& packet, double width, double x,
                                 double pV_lo, double pV_hi, int n,
                                 const EngineOptions& opts = {});

// Same sweep over the barrier width at fixed pV (a = 0 rows are free).
SweepResult sweep_barrier_width(const GaussianPacket& packet, double pV, double x,
                                double a_lo, double a_hi, int n,
                                const EngineOptions& opts = {});

// Index of the row that follows the largest single-step change of mean_toa;
// the jump location is reported as that step, not fit to a model.
std::size_t largest_step_index(const SweepResult& sweep);

struct Peak {
    double t = 0.0;
    double height = 0.0;
    double half_width = 0.0;  // half width at half height
};

struct PeakReport {
    std::vector<Peak> peaks;  // ordered by t
    double window_lo = 0.0;
    double window_hi = 0.0;
};

// Local maxima of the density inside [t1, t2] exceeding prominence * max
// density in the window, with parabolic sub-grid refinement of the location.
PeakReport find_peaks(const ArrivalDistribution& dist, double t1, double t2,
                      double prominence = 0.02);

}  // namespace toa
