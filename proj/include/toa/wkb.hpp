#pragma once

#include "toa/distribution.hpp"
#include "toa/packet.hpp"
#include "toa/potential.hpp"
#include "toa/scattering.hpp"

namespace toa {

// Quasi-classical (WKB) state for smooth potentials at energies well above
// the barrier, where reflection is negligible.  Evaluation within the
// relative guard band epsilon_turn of a turning point is refused.
class WkbState {
  public:
    static constexpr double epsilon_turn = 1e-3;

    WkbState(double energy, PotentialSpec spec, double mass);

    double energy() const { return energy_; }

    // p(q) = sqrt(2 m (E - V(q))); turning_point_error inside the guard band.
    double local_momentum(double q) const;

    // Int_0^x p(q) dq by adaptive Gauss-Legendre (1e-10 relative).
    double action(double x) const;

  private:
    double energy_;
    PotentialSpec spec_;
    double mass_;
};

// theta(-x) sqrt(m/2 pi p) e^{ipx} + theta(x) sqrt(m/2 pi p(x)) e^{i action(x)}.
cplx wkb_eigenfunction(double x, double energy, const PotentialSpec& spec, double mass);

// Engine-facing reduced wave (plane-wave normalization stripped), reflection-free.
WaveParts wkb_reduced_waves(const PotentialSpec& spec, double mass, double p, double x);

// Quasi-classical arrival distribution / mean at x.  Requires the packet's
// momentum window to clear max V on [0, x] by the guard margin.
ArrivalDistribution wkb_arrival(double x, const GaussianPacket& packet,
                                const PotentialSpec& spec);
double wkb_mean(double x, const GaussianPacket& packet, const PotentialSpec& spec);

// Throws turning_point_error unless the whole momentum window clears
// max V on [0, x]; no-op for x <= 0.
void wkb_require_window(double x, const GaussianPacket& packet, const PotentialSpec& spec);

}  // namespace toa
