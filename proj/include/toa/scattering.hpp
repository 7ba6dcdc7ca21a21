#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "toa/packet.hpp"
#include "toa/potential.hpp"

namespace toa {

// Stationary scattering state at one momentum.  The reduced momentum
// p' = sqrt(p^2 - pV^2) uses the principal branch, so it is i|p'| below the
// barrier momentum and the same closed forms cover both regimes.
struct ScatteringSolution {
    enum class Channel { right_mover, left_mover };

    double p = 0.0;
    double energy = 0.0;
    cplx p_prime;
    cplx T;
    cplx R;
    // Interior wave at q = 0 as a (value, derivative) pair; regular at p' = 0.
    cplx psi0;
    cplx dpsi0;
    // Plane-wave interior coefficients {A, B} (empty when degenerate or n/a).
    std::vector<cplx> interior;
    Channel channel = Channel::right_mover;
};

// Step potential of height V at the origin.
ScatteringSolution step_coefficients(double p, double V, double mass);

// Square barrier; coefficients from 2x2 interface matching solved in a form
// that stays regular at p = pV.
ScatteringSolution barrier_solution(double p, const SquareBarrier& barrier, double mass);

// Literal closed-form barrier transmission
//   T = 2 p p' e^{-ipa} / (2 p p' cos p'a - i (p^2+p'^2) sin p'a),
// kept as an independent cross-check of barrier_solution.
cplx barrier_transmission_formula(double p, const SquareBarrier& barrier, double mass);

// ---- total-reflection linear ramp, eigenstates in Airy modulus/phase form ----

struct RampPoint {
    double modulus;  // M(q, E): 1 for q <= 0, Airy envelope beyond
    double phase;    // phi(q, E), continuous in q (unwrapped arctangent)
};

RampPoint linear_modulus_phase(double q, double E, double force, double mass);

// Phase shift delta(E) = phi(0, E), continuous in E.
double phase_shift(double E, double force, double mass);

// d delta / dE, closed form through the Airy ODE (no finite differences).
double phase_shift_energy_derivative(double E, double force, double mass);

// d phi(q, E) / dE at fixed q, closed form.
double ramp_phase_energy_derivative(double q, double E, double force, double mass);

// ---- engine-facing reduced waves -------------------------------------------

// Eigenfunction with the sqrt(m / 2 pi p) plane-wave normalization stripped,
// split into positive-current and negative-current components, together with
// the momentum derivative at fixed x used by the phase-time route.
struct WaveParts {
    cplx transmitted;  // Phi_tr
    cplx reflected;    // Phi_ref (0 where no returning wave exists)
    cplx d_dp;         // d(Phi_tr + Phi_ref)/dp at fixed x
    cplx d_dx;         // d(Phi_tr + Phi_ref)/dx
    cplx total() const { return transmitted + reflected; }
};

// Right-mover channel.  Handles Free, Step, SquareBarrier, LinearRamp.
// SampledSmooth is served by the quasi-classical module instead.
WaveParts reduced_waves(const PotentialSpec& spec, double mass, double p, double x);

// Left-mover channel, available for Free and SquareBarrier (mirror image).
WaveParts reduced_waves_left(const PotentialSpec& spec, double mass, double p, double x);

// Full eigenfunction <x|E r(+)> including normalization: sqrt(m/2 pi p) times
// the region expression, or the (m/2E)^(1/4) cosine form for the ramp.
cplx eigenfunction(double x, const ScatteringSolution& sol, const PotentialSpec& spec,
                   double mass);
cplx eigenfunction_derivative(double x, const ScatteringSolution& sol,
                              const PotentialSpec& spec, double mass);

// Positive/negative-current components at x for the solution's momentum.
std::pair<cplx, cplx> split_currents(double x, const ScatteringSolution& sol,
                                     const PotentialSpec& spec, double mass);

// d arg T / dp of the transmission amplitude (Free, Step, SquareBarrier).
double transmission_phase_derivative(const PotentialSpec& spec, double mass, double p);

}  // namespace toa
