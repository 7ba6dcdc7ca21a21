#pragma once

#include <optional>
#include <utility>

#include "toa/distribution.hpp"
#include "toa/packet.hpp"
#include "toa/potential.hpp"

namespace toa {

struct EngineOptions {
    // Relative tolerance of the momentum quadrature refinement loop.
    double rel_tol = 1e-9;
    // Evaluate the time map by uniform-grid FFT instead of the reference
    // Gauss-Legendre kernel (must agree with it to 1e-6; off by default).
    bool use_fft = false;
    // Use the OpenMP kernels (results are identical to the serial path).
    bool parallel = true;
    // Proceed even when the packet quality flag is bad.  Finite-range specs
    // then include the left-mover channel in the channel sum.
    bool allow_poor_quality = false;
};

// Arrival amplitude <t x r|psi> in the momentum form
//   (1/sqrt(2 pi)) Int dp sqrt(p/m) g(x, p) psi~(p) e^{-i E t},
// with g the plane-wave-stripped eigenfunction of the potential.
cplx arrival_amplitude(double t, double x, const GaussianPacket& packet,
                       const PotentialSpec& spec, const EngineOptions& opts = {});

// Normalized time-of-arrival density at x.  When no grid is given, one is
// centered on the classical estimates and expanded until the missed tail
// mass is negligible.
ArrivalDistribution arrival_distribution(double x, const GaussianPacket& packet,
                                         const PotentialSpec& spec,
                                         std::optional<TimeGrid> grid = std::nullopt,
                                         const EngineOptions& opts = {});

// P(x): total probability of ever arriving at x (momentum quadrature).
double arrival_probability(double x, const GaussianPacket& packet, const PotentialSpec& spec,
                           const EngineOptions& opts = {});

// First moment of the density; grid_error when the grid misses more than
// 1e-6 of the arrival mass.
double mean_toa_moment(const ArrivalDistribution& dist);

// Mean arrival time through the energy derivative of the scattering phase
// (Wigner route); no time grid involved.
double mean_toa_phase(double x, const GaussianPacket& packet, const PotentialSpec& spec,
                      const EngineOptions& opts = {});

struct ReflectionDecomposition {
    double transmitted = 0.0;
    double reflected = 0.0;
    double interference = 0.0;
    double total() const { return transmitted + reflected + interference; }
};

// P(x) split into positive-current, negative-current and interference parts.
ReflectionDecomposition decompose_reflection(double x, const GaussianPacket& packet,
                                             const PotentialSpec& spec,
                                             const EngineOptions& opts = {});

// Energy-resolved arrival times of the incoming and reflected waves for the
// total-reflection ramp; their sum is independent of x.
std::pair<double, double> incident_reflected_times(double x, double energy,
                                                   const GaussianPacket& packet,
                                                   const LinearRamp& ramp);

struct TotalReflectionSplit {
    double mean_incident = 0.0;
    double mean_reflected = 0.0;
    ArrivalDistribution distribution;
};

// Packet-averaged incident/reflected arrival times (weights M^2 cos^2 phi
// |psi~|^2) plus the full bimodal distribution at x.
TotalReflectionSplit split_mean_toa_total_reflection(double x, const GaussianPacket& packet,
                                                     const LinearRamp& ramp,
                                                     const EngineOptions& opts = {});

// Single-momentum phase time (m/p)(x - q0 + d arg T/dp).
double wigner_phase_time(double p, double x, double q0, const PotentialSpec& spec,
                         double mass);

// Hartman saturation value t0 - m a / p0.
double hartman_time(double t0, double a, double p0, double mass);

}  // namespace toa
