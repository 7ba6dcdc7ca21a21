#include "toa/scattering.hpp"

#include <cmath>

#include "toa/airy.hpp"

namespace toa {

namespace {

constexpr cplx kI{0.0, 1.0};

// cos(sqrt(z2)) continued to negative z2 (= cosh), and sinc(sqrt(z2)) with
// the same continuation; z2 = (p' L)^2 is real for real momenta.
double cos_sqrt(double z2) {
    if (z2 >= 0.0) return std::cos(std::sqrt(z2));
    return std::cosh(std::sqrt(-z2));
}

double sinc_sqrt(double z2) {
    if (std::abs(z2) < 1e-6) return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    if (z2 > 0.0) {
        const double r = std::sqrt(z2);
        return std::sin(r) / r;
    }
    const double r = std::sqrt(-z2);
    return std::sinh(r) / r;
}

// d/dz2 of the two kernels above.
double dcos_sqrt(double z2) { return -0.5 * sinc_sqrt(z2); }

double dsinc_sqrt(double z2) {
    if (std::abs(z2) < 1e-3) return -1.0 / 6.0 + z2 / 60.0 - z2 * z2 / 1680.0;
    return (cos_sqrt(z2) - sinc_sqrt(z2)) / (2.0 * z2);
}

cplx principal_reduced_momentum(double p, double pV) {
    const double w = p * p - pV * pV;
    return w >= 0.0 ? cplx(std::sqrt(w), 0.0) : cplx(0.0, std::sqrt(-w));
}

// Shared square-barrier quantities.  With w = p^2 - pV^2, C = cos(p'a) and
// S = sinc(p'a) as functions of w a^2, the matching determinant is
//   Dhat = 2 p C - i (p^2 + w) a S,
// and T = 2 p e^{-ipa} / Dhat,  R = -i pV^2 a S / Dhat.  Everything here is
// an even function of p', hence smooth through p = pV.
struct BarrierCore {
    double p, a, w, pV2;
    double C, S;
    cplx Dhat, T, R;
    cplx dDhat, dT, dR;  // d/dp
    cplx psi0, dpsi0;

    BarrierCore(double p_, const SquareBarrier& b, double mass) : p(p_), a(b.width) {
        pV2 = 2.0 * mass * b.height;
        w = p * p - pV2;
        const double z2 = w * a * a;
        C = cos_sqrt(z2);
        S = sinc_sqrt(z2);
        Dhat = 2.0 * p * C - kI * (p * p + w) * a * S;
        const cplx phase = std::polar(1.0, -p * a);
        T = 2.0 * p * phase / Dhat;
        R = -kI * pV2 * a * S / Dhat;

        const double dz2 = 2.0 * p * a * a;  // dz2/dp
        const double dC = dcos_sqrt(z2) * dz2;
        const double dS = dsinc_sqrt(z2) * dz2;
        dDhat = 2.0 * C + 2.0 * p * dC - kI * a * (4.0 * p * S + (p * p + w) * dS);
        dT = T * (1.0 / p - kI * a - dDhat / Dhat);
        dR = -kI * pV2 * a * (dS * Dhat - S * dDhat) / (Dhat * Dhat);

        psi0 = 1.0 + R;
        dpsi0 = kI * p * (1.0 - R);
    }

    // Interior wave transported from q = 0: psi(q) = psi0 C(q) + dpsi0 q S(q).
    cplx interior_value(double q) const {
        const double z2 = w * q * q;
        return psi0 * cos_sqrt(z2) + dpsi0 * q * sinc_sqrt(z2);
    }
    cplx interior_derivative(double q) const {
        const double z2 = w * q * q;
        return -psi0 * w * q * sinc_sqrt(z2) + dpsi0 * cos_sqrt(z2);
    }
    cplx interior_dp(double q) const {
        const double z2 = w * q * q;
        const double dz2 = 2.0 * p * q * q;
        const cplx dpsi0_dp = dR;
        const cplx ddpsi0_dp = kI * (1.0 - R) - kI * p * dR;
        return dpsi0_dp * cos_sqrt(z2) + psi0 * dcos_sqrt(z2) * dz2 +
               ddpsi0_dp * q * sinc_sqrt(z2) + dpsi0 * q * dsinc_sqrt(z2) * dz2;
    }
};

// Ramp quantities reused by the phase/modulus and reduced-wave paths.
struct RampCore {
    double kf, z0, c, A0, A0p, D0, sqrtD0;
    double p, E, mass, force;
    cplx phase_factor;  // e^{-i delta}

    RampCore(double E_, double force_, double mass_)
        : p(std::sqrt(2.0 * mass_ * E_)), E(E_), mass(mass_), force(force_) {
        kf = std::cbrt(2.0 * mass * force);
        z0 = -p * p / (kf * kf);
        c = kf / p;
        AiryPair a0 = airy_pair(z0);
        A0 = a0.ai;
        A0p = a0.ai_prime;
        D0 = A0 * A0 + c * c * A0p * A0p;
        sqrtD0 = std::sqrt(D0);
        phase_factor = cplx(A0, c * A0p) / sqrtD0;  // modulus exactly 1
    }

    double z_at(double q) const { return kf * q + z0; }

    // d phi/dE at fixed q > 0 through the Airy ODE; also valid at q = 0,
    // where it is d delta/dE.
    double phase_energy_derivative_airy(double z) const {
        AiryPair az = airy_pair(z);
        const double A = az.ai, Ap = az.ai_prime;
        const double num = (kf * mass / (p * p * p)) * A * Ap +
                           (2.0 * mass / (p * kf)) * (z * A * A - Ap * Ap);
        return num / (A * A + c * c * Ap * Ap);
    }
};

double unwrapped_ramp_phase(double z, double c) {
    const AiryPair az = airy_pair(z);
    const double principal = std::atan(-c * az.ai_prime / az.ai);
    return principal - M_PI * airy_zero_count_above(z);
}

WaveParts free_waves(double p, double x) {
    WaveParts out;
    out.transmitted = std::polar(1.0, p * x);
    out.reflected = 0.0;
    out.d_dp = kI * x * out.transmitted;
    out.d_dx = kI * p * out.transmitted;
    return out;
}

WaveParts step_waves(double p, double V, double mass, double x) {
    const double pV2 = 2.0 * mass * V;
    const cplx pp = principal_reduced_momentum(p, std::sqrt(pV2));
    const cplx R = (p - pp) / (p + pp);
    const cplx T = 2.0 * p / (p + pp);
    // dR/dp = dT/dp = -2 pV^2 / (p'(p+p')^2); diverges only exactly at p = pV.
    const cplx dcommon = -2.0 * pV2 / (pp * (p + pp) * (p + pp));
    WaveParts out;
    if (x <= 0.0) {
        const cplx ein = std::polar(1.0, p * x);
        const cplx eout = std::polar(1.0, -p * x);
        out.transmitted = ein;
        out.reflected = R * eout;
        out.d_dp = kI * x * ein + (dcommon - kI * x * R) * eout;
        out.d_dx = kI * p * ein - kI * p * R * eout;
    } else {
        const cplx e = std::exp(kI * pp * x);
        out.transmitted = T * e;
        out.reflected = 0.0;
        out.d_dp = (dcommon + T * kI * x * p / pp) * e;
        out.d_dx = kI * pp * T * e;
    }
    return out;
}

WaveParts barrier_waves(double p, const SquareBarrier& b, double mass, double x) {
    const BarrierCore core(p, b, mass);
    WaveParts out;
    if (x <= 0.0) {
        const cplx ein = std::polar(1.0, p * x);
        const cplx eout = std::polar(1.0, -p * x);
        out.transmitted = ein;
        out.reflected = core.R * eout;
        out.d_dp = kI * x * ein + (core.dR - kI * x * core.R) * eout;
        out.d_dx = kI * p * (ein - core.R * eout);
    } else if (x >= b.width) {
        const cplx e = std::polar(1.0, p * x);
        out.transmitted = core.T * e;
        out.reflected = 0.0;
        out.d_dp = (core.dT + kI * x * core.T) * e;
        out.d_dx = kI * p * core.T * e;
    } else {
        // Interior: report the decomposition into p' plane waves when it is
        // well conditioned; the total and derivatives use the regular form.
        const cplx total = core.interior_value(x);
        const cplx pp = principal_reduced_momentum(p, std::sqrt(core.pV2));
        if (std::abs(pp) * b.width > 1e-6) {
            const cplx A = 0.5 * (core.psi0 + core.dpsi0 / (kI * pp));
            const cplx B = 0.5 * (core.psi0 - core.dpsi0 / (kI * pp));
            out.transmitted = A * std::exp(kI * pp * x);
            out.reflected = B * std::exp(-kI * pp * x);
        } else {
            out.transmitted = total;
            out.reflected = 0.0;
        }
        out.d_dp = core.interior_dp(x);
        out.d_dx = core.interior_derivative(x);
    }
    return out;
}

WaveParts ramp_waves(double p, const LinearRamp& r, double mass, double x) {
    const double E = 0.5 * p * p / mass;
    const RampCore core(E, r.force, mass);
    const double ddelta_dp = (p / mass) * core.phase_energy_derivative_airy(core.z0);
    WaveParts out;
    if (x <= 0.0) {
        // e^{ipx} + e^{-2i delta} e^{-ipx}: unimodular reflection.
        const cplx ein = std::polar(1.0, p * x);
        const cplx eout = std::polar(1.0, -p * x);
        const cplx R = core.phase_factor * core.phase_factor;  // e^{-2i delta}
        out.transmitted = ein;
        out.reflected = R * eout;
        out.d_dp = kI * x * ein + R * (-2.0 * kI * ddelta_dp - kI * x) * eout;
        out.d_dx = kI * p * (ein - R * eout);
    } else {
        const double z = core.z_at(x);
        const AiryPair az = airy_pair(z);
        const cplx pf = core.phase_factor;
        out.transmitted = pf * cplx(az.ai, -core.c * az.ai_prime) / core.sqrtD0;
        out.reflected = pf * cplx(az.ai, core.c * az.ai_prime) / core.sqrtD0;
        out.d_dx = 2.0 * pf * az.ai_prime * core.kf / core.sqrtD0;

        // d/dp of 2 e^{-i delta} Ai(z)/sqrt(D0).
        const double dz_dp = -2.0 * p / (core.kf * core.kf);
        const double dz0_dp = dz_dp;
        const double dc_dp = -core.kf / (p * p);
        const double dA0 = core.A0p * dz0_dp;
        const double dA0p = core.z0 * core.A0 * dz0_dp;
        const double dD0 = 2.0 * core.A0 * dA0 + 2.0 * core.c * dc_dp * core.A0p * core.A0p +
                           2.0 * core.c * core.c * core.A0p * dA0p;
        const double u = az.ai / core.sqrtD0;
        const double du = az.ai_prime * dz_dp / core.sqrtD0 -
                          0.5 * az.ai * dD0 / (core.D0 * core.sqrtD0);
        out.d_dp = 2.0 * pf * (du - kI * ddelta_dp * u);
    }
    return out;
}

}  // namespace

ScatteringSolution step_coefficients(double p, double V, double mass) {
    if (!(p > 0.0)) throw domain_error("step_coefficients: momentum must be > 0");
    if (!(V >= 0.0)) throw domain_error("step_coefficients: V must be >= 0");
    ScatteringSolution sol;
    sol.p = p;
    sol.energy = 0.5 * p * p / mass;
    sol.p_prime = principal_reduced_momentum(p, std::sqrt(2.0 * mass * V));
    sol.T = 2.0 * p / (p + sol.p_prime);
    sol.R = (p - sol.p_prime) / (p + sol.p_prime);
    sol.psi0 = sol.T;
    sol.dpsi0 = kI * sol.p_prime * sol.T;
    return sol;
}

ScatteringSolution barrier_solution(double p, const SquareBarrier& barrier, double mass) {
    if (!(p > 0.0)) throw domain_error("barrier_solution: momentum must be > 0");
    const BarrierCore core(p, barrier, mass);
    ScatteringSolution sol;
    sol.p = p;
    sol.energy = 0.5 * p * p / mass;
    sol.p_prime = principal_reduced_momentum(p, std::sqrt(core.pV2));
    sol.T = core.T;
    sol.R = core.R;
    sol.psi0 = core.psi0;
    sol.dpsi0 = core.dpsi0;
    if (std::abs(sol.p_prime) * barrier.width > 1e-6) {
        const cplx A = 0.5 * (core.psi0 + core.dpsi0 / (kI * sol.p_prime));
        const cplx B = 0.5 * (core.psi0 - core.dpsi0 / (kI * sol.p_prime));
        sol.interior = {A, B};
    }
    return sol;
}

cplx barrier_transmission_formula(double p, const SquareBarrier& barrier, double mass) {
    const cplx pp = principal_reduced_momentum(p, std::sqrt(2.0 * mass * barrier.height));
    const double a = barrier.width;
    const cplx num = 2.0 * p * pp * std::polar(1.0, -p * a);
    const cplx den = 2.0 * p * pp * std::cos(pp * a) -
                     kI * (p * p + pp * pp) * std::sin(pp * a);
    return num / den;
}

RampPoint linear_modulus_phase(double q, double E, double force, double mass) {
    if (!(E > 0.0)) throw domain_error("linear_modulus_phase: E must be > 0");
    if (!(force > 0.0)) throw domain_error("linear_modulus_phase: force must be > 0");
    const RampCore core(E, force, mass);
    if (q <= 0.0) {
        const double delta = unwrapped_ramp_phase(core.z0, core.c);
        return {1.0, core.p * q + delta};
    }
    const double z = core.z_at(q);
    const AiryPair az = airy_pair(z);
    const double M = std::sqrt((az.ai * az.ai + core.c * core.c * az.ai_prime * az.ai_prime) /
                               core.D0);
    return {M, unwrapped_ramp_phase(z, core.c)};
}

double phase_shift(double E, double force, double mass) {
    if (!(E > 0.0)) throw domain_error("phase_shift: E must be > 0");
    const RampCore core(E, force, mass);
    return unwrapped_ramp_phase(core.z0, core.c);
}

double phase_shift_energy_derivative(double E, double force, double mass) {
    const RampCore core(E, force, mass);
    return core.phase_energy_derivative_airy(core.z0);
}

double ramp_phase_energy_derivative(double q, double E, double force, double mass) {
    const RampCore core(E, force, mass);
    if (q <= 0.0)
        return (mass / core.p) * q + core.phase_energy_derivative_airy(core.z0);
    return core.phase_energy_derivative_airy(core.z_at(q));
}

WaveParts reduced_waves(const PotentialSpec& spec, double mass, double p, double x) {
    if (!(p > 0.0)) throw domain_error("reduced_waves: momentum must be > 0");
    if (spec.is<Free>()) return free_waves(p, x);
    if (const Step* s = spec.get_if<Step>()) return step_waves(p, s->height, mass, x);
    if (const SquareBarrier* b = spec.get_if<SquareBarrier>())
        return barrier_waves(p, *b, mass, x);
    if (const LinearRamp* r = spec.get_if<LinearRamp>()) return ramp_waves(p, *r, mass, x);
    throw domain_error("reduced_waves: sampled potentials are served by the wkb module");
}

WaveParts reduced_waves_left(const PotentialSpec& spec, double mass, double p, double x) {
    if (spec.is<Free>()) {
        WaveParts out;
        out.transmitted = std::polar(1.0, -p * x);
        out.reflected = 0.0;
        out.d_dp = -kI * x * out.transmitted;
        out.d_dx = -kI * p * out.transmitted;
        return out;
    }
    if (const SquareBarrier* b = spec.get_if<SquareBarrier>()) {
        // Mirror image: g_l(x) = e^{-ipa} g_r(a - x).
        const cplx phase = std::polar(1.0, -p * b->width);
        WaveParts m = barrier_waves(p, *b, mass, b->width - x);
        WaveParts out;
        out.transmitted = phase * m.transmitted;
        out.reflected = phase * m.reflected;
        out.d_dp = phase * (m.d_dp - kI * b->width * m.total());
        out.d_dx = -phase * m.d_dx;
        return out;
    }
    throw domain_error("reduced_waves_left: left channel exists only for finite-range specs");
}

cplx eigenfunction(double x, const ScatteringSolution& sol, const PotentialSpec& spec,
                   double mass) {
    if (const LinearRamp* r = spec.get_if<LinearRamp>()) {
        RampPoint mp = linear_modulus_phase(x, sol.energy, r->force, mass);
        return std::sqrt(mass / (2.0 * M_PI * sol.p)) * mp.modulus * std::cos(mp.phase);
    }
    const WaveParts parts = reduced_waves(spec, mass, sol.p, x);
    return std::sqrt(mass / (2.0 * M_PI * sol.p)) * parts.total();
}

cplx eigenfunction_derivative(double x, const ScatteringSolution& sol,
                              const PotentialSpec& spec, double mass) {
    if (spec.is<LinearRamp>()) {
        const WaveParts parts = reduced_waves(spec, mass, sol.p, x);
        // eigenfunction = sqrt(m/2 pi p)/2 * (reduced ramp wave) * e^{+i delta}
        // is real; differentiate the reduced form and undo the same factors.
        const RampCore core(sol.energy, spec.get_if<LinearRamp>()->force, mass);
        const cplx val = parts.d_dx / (2.0 * core.phase_factor);
        return std::sqrt(mass / (2.0 * M_PI * sol.p)) * val;
    }
    const WaveParts parts = reduced_waves(spec, mass, sol.p, x);
    return std::sqrt(mass / (2.0 * M_PI * sol.p)) * parts.d_dx;
}

std::pair<cplx, cplx> split_currents(double x, const ScatteringSolution& sol,
                                     const PotentialSpec& spec, double mass) {
    const WaveParts parts = reduced_waves(spec, mass, sol.p, x);
    return {parts.transmitted, parts.reflected};
}

double transmission_phase_derivative(const PotentialSpec& spec, double mass, double p) {
    if (!(p > 0.0))
        throw domain_error("transmission_phase_derivative: momentum must be > 0");
    if (spec.is<Free>()) return 0.0;
    if (const Step* s = spec.get_if<Step>()) {
        const double pV2 = 2.0 * mass * s->height;
        const double w = p * p - pV2;
        if (w > 0.0) return 0.0;  // T = 2p/(p+p') is real above the step
        if (w == 0.0)
            throw domain_error("transmission_phase_derivative: degenerate momentum p = pV");
        return 1.0 / std::sqrt(-w);  // arg T = -atan(|p'|/p)
    }
    if (const SquareBarrier* b = spec.get_if<SquareBarrier>()) {
        const BarrierCore core(p, *b, mass);
        return -b->width - std::imag(core.dDhat / core.Dhat);
    }
    throw domain_error("transmission_phase_derivative: spec has no transmission amplitude");
}

}  // namespace toa
