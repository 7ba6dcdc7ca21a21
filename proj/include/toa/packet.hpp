#pragma once

#include <complex>

#include "toa/errors.hpp"

namespace toa {

using cplx = std::complex<double>;

// Minimum-uncertainty Gaussian wave packet, hbar = 1 throughout.
// Position width is Delta q = 2*delta; momentum spread sigma_p = 1/(2*delta).
struct GaussianPacket {
    double q0;     // center position (< 0 for the standard scenarios)
    double p0;     // mean momentum, > 0
    double delta;  // width parameter, > 0
    double mass;   // > 0

    GaussianPacket(double q0_, double p0_, double delta_, double mass_)
        : q0(q0_), p0(p0_), delta(delta_), mass(mass_) {
        if (!(delta > 0.0)) throw domain_error("GaussianPacket: delta must be > 0");
        if (!(mass > 0.0)) throw domain_error("GaussianPacket: mass must be > 0");
        if (!(p0 > 0.0)) throw domain_error("GaussianPacket: p0 must be > 0");
    }

    double sigma_p() const { return 0.5 / delta; }
    double mean_energy() const { return 0.5 * p0 * p0 / mass; }

    // False when the negative-momentum / positive-position tails are not
    // negligible, i.e. when p0*delta < 5 or |q0| < 3*delta.  Approximations
    // that drop those tails are unreliable in that regime.
    bool quality_ok() const { return p0 * delta >= 5.0 && std::abs(q0) >= 3.0 * delta; }

    // <p|psi> = (2 delta^2/pi)^(1/4) exp(-delta^2 (p-p0)^2 - i p q0)
    cplx momentum_amplitude(double p) const {
        const double dp = p - p0;
        const double mag = std::pow(2.0 * delta * delta / M_PI, 0.25) *
                           std::exp(-delta * delta * dp * dp);
        return std::polar(mag, -p * q0);
    }

    double momentum_density(double p) const {
        const double a = std::abs(momentum_amplitude(p));
        return a * a;
    }

    // <q|psi>; the two exponentials of the defining expression are combined
    // so no intermediate overflows for large p0*delta.
    cplx position_amplitude(double q) const {
        const double a = (q - q0) / (2.0 * delta);
        const double mag = std::pow(1.0 / (2.0 * M_PI * delta * delta), 0.25) * std::exp(-a * a);
        return std::polar(mag, p0 * (q - q0));
    }
};

}  // namespace toa
