#pragma once

#include <optional>
#include <utility>

#include "toa/packet.hpp"
#include "toa/potential.hpp"

namespace toa {

struct ClassicalState {
    double q;
    double p;
    double mass;

    ClassicalState(double q_, double p_, double mass_) : q(q_), p(p_), mass(mass_) {
        if (!(mass > 0.0)) throw domain_error("ClassicalState: mass must be > 0");
    }

    double energy(const PotentialSpec& spec) const {
        return 0.5 * p * p / mass + spec.value(q);
    }
};

// Equation of time: sign(p) sqrt(m/2) Int_q^x dq' / sqrt(H - V(q')).
// Empty when a turning point lies strictly inside the path (the would-be
// value is complex).  A turning point exactly at x is an integrable endpoint
// and yields a finite time.
std::optional<double> classical_toa(const ClassicalState& state, double x,
                                    const PotentialSpec& spec);

// Smallest q >= 0 with V(q) = E; empty for Free or when E exceeds max V.
std::optional<double> turning_point(double energy, const PotentialSpec& spec);

// Traversal time from `from` to `to` at total energy E (signed like the
// equation of time with p > 0); empty across turning points.
std::optional<double> flight_time(double from, double to, double energy,
                                  const PotentialSpec& spec, double mass);

// The straightened coordinate Int_0^x dq' / sqrt(1 - V/H) for given energy.
std::optional<double> lie_coordinate(double x, double energy, const PotentialSpec& spec);

// Canonical map to free-translation coordinates:
//   P = sign(p) sqrt(2 m H),  Q = lie_coordinate(q, H).
std::optional<std::pair<double, double>> jacobi_lie_map(const ClassicalState& state,
                                                        const PotentialSpec& spec);

// |psi~(p)|^2-weighted classical arrival time at x over the packet's momentum
// window, unreachable momenta excluded and the rest renormalized.  Throws
// coverage_error when less than 99% of the packet mass reaches x.
double classical_ensemble_mean(const GaussianPacket& packet, double x,
                               const PotentialSpec& spec);

}  // namespace toa
