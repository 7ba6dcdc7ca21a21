#include "toa/wkb.hpp"

#include <cmath>

#include "toa/classical.hpp"
#include "toa/quadrature.hpp"

namespace toa {

namespace {

void require_smooth(const PotentialSpec& spec) {
    if (spec.is<Step>() && spec.get_if<Step>()->height > 0.0)
        throw domain_error("wkb: step potential is not smooth");
    if (spec.is<SquareBarrier>() && spec.get_if<SquareBarrier>()->height > 0.0)
        throw domain_error("wkb: square barrier is not smooth");
}

double max_potential_on(const PotentialSpec& spec, double lo, double hi) {
    double vmax = std::max(spec.value(lo), spec.value(hi));
    for (double b : spec.breakpoints(lo, hi)) vmax = std::max(vmax, spec.value(b));
    return vmax;
}

}  // namespace

WkbState::WkbState(double energy, PotentialSpec spec, double mass)
    : energy_(energy), spec_(std::move(spec)), mass_(mass) {
    if (!(energy > 0.0)) throw domain_error("WkbState: energy must be > 0");
    if (!(mass > 0.0)) throw domain_error("WkbState: mass must be > 0");
    require_smooth(spec_);
}

double WkbState::local_momentum(double q) const {
    const double margin = energy_ - spec_.value(q);
    if (margin < epsilon_turn * energy_)
        throw turning_point_error("WkbState: evaluation within the turning-point guard band");
    return std::sqrt(2.0 * mass_ * margin);
}

double WkbState::action(double x) const {
    if (x == 0.0) return 0.0;
    // Guard the whole path before integrating.
    local_momentum(x);
    local_momentum(0.0);
    return integrate_adaptive([this](double q) { return local_momentum(q); }, 0.0, x, 1e-10,
                              1 << 16, spec_.breakpoints(std::min(0.0, x), std::max(0.0, x)));
}

cplx wkb_eigenfunction(double x, double energy, const PotentialSpec& spec, double mass) {
    const WkbState state(energy, spec, mass);
    const double p = std::sqrt(2.0 * mass * energy);
    if (x <= 0.0) return std::sqrt(mass / (2.0 * M_PI * p)) * std::polar(1.0, p * x);
    const double px = state.local_momentum(x);
    return std::sqrt(mass / (2.0 * M_PI * px)) * std::polar(1.0, state.action(x));
}

WaveParts wkb_reduced_waves(const PotentialSpec& spec, double mass, double p, double x) {
    constexpr cplx kI{0.0, 1.0};
    WaveParts out;
    if (x <= 0.0) {
        out.transmitted = std::polar(1.0, p * x);
        out.reflected = 0.0;
        out.d_dp = kI * x * out.transmitted;
        out.d_dx = kI * p * out.transmitted;
        return out;
    }
    const double E = 0.5 * p * p / mass;
    const WkbState state(E, spec, mass);
    const double px = state.local_momentum(x);
    const double action = state.action(x);
    const cplx g = std::sqrt(p / px) * std::polar(1.0, action);
    out.transmitted = g;
    out.reflected = 0.0;
    // dS/dp = p Int_0^x dq / p(q) = flight time at this energy; the envelope
    // contributes (1/2)(1/p - p/p(x)^2).
    auto tf = flight_time(0.0, x, E, spec, mass);
    if (!tf) throw turning_point_error("wkb_reduced_waves: path crosses a turning point");
    const double dS_dp = (p / mass) * *tf;
    out.d_dp = g * cplx(0.5 * (1.0 / p - p / (px * px)), dS_dp);
    // dg/dx = g (i p(x) - p'(x)/(2 p(x))); V is piecewise linear so a small
    // central difference recovers its slope exactly away from kinks.
    const double h = 1e-6 * (1.0 + std::abs(x));
    const double dV = (spec.value(x + h) - spec.value(std::max(0.0, x - h))) / (2.0 * h);
    const double dpx = -mass * dV / px;
    out.d_dx = g * cplx(-0.5 * dpx / px, px);
    return out;
}

void wkb_require_window(double x, const GaussianPacket& packet, const PotentialSpec& spec) {
    require_smooth(spec);
    if (x <= 0.0) return;
    const double p_lo = std::max(1e-6 * packet.p0, packet.p0 - 8.0 * packet.sigma_p());
    const double e_min = 0.5 * p_lo * p_lo / packet.mass;
    const double vmax = max_potential_on(spec, 0.0, x);
    if (e_min - vmax < WkbState::epsilon_turn * e_min)
        throw turning_point_error(
            "wkb: packet momentum window does not clear the potential on [0, x]");
}

double wkb_mean(double x, const GaussianPacket& packet, const PotentialSpec& spec) {
    wkb_require_window(x, packet, spec);
    const double sp = packet.sigma_p();
    const double p_lo = std::max(1e-6 * packet.p0, packet.p0 - 8.0 * sp);
    const double p_hi = packet.p0 + 8.0 * sp;
    const GaussRule& rule = gauss_legendre(16);
    const int panels = 96;
    const double h = (p_hi - p_lo) / panels;
    KahanAccumulator num, den;
    for (int k = 0; k < panels; ++k) {
        for (std::size_t j = 0; j < rule.node.size(); ++j) {
            const double p = p_lo + (k + 0.5 * (rule.node[j] + 1.0)) * h;
            const double wq = 0.5 * h * rule.weight[j];
            const double E = 0.5 * p * p / packet.mass;
            double weight = wq * packet.momentum_density(p);
            double t;
            if (x <= 0.0) {
                t = packet.mass * (x - packet.q0) / p;
            } else {
                const double px = std::sqrt(2.0 * packet.mass * (E - spec.value(x)));
                weight *= p / px;
                auto tf = flight_time(0.0, x, E, spec, packet.mass);
                if (!tf) throw turning_point_error("wkb_mean: turning point inside [0, x]");
                t = -packet.mass * packet.q0 / p + *tf;
            }
            num.add(weight * t);
            den.add(weight);
        }
    }
    return num.value() / den.value();
}

}  // namespace toa
