#include "toa/classical.hpp"

#include <algorithm>
#include <cmath>

#include "toa/quadrature.hpp"

namespace toa {

namespace {

// Int dq / sqrt(H - V) over one piece with V linear between the endpoints.
// Empty optional: the piece is (partly) classically forbidden, or H == V on
// a flat piece (infinite dwell).
std::optional<double> piece_integral(double x1, double x2, double v1, double v2, double H) {
    const double u1 = H - v1;
    const double u2 = H - v2;
    if (u1 < 0.0 || u2 < 0.0) return std::nullopt;
    if (v1 == v2) {
        if (u1 == 0.0) return std::nullopt;
        return (x2 - x1) / std::sqrt(u1);
    }
    const double slope = (v2 - v1) / (x2 - x1);
    return 2.0 * (std::sqrt(u1) - std::sqrt(u2)) / slope;
}

// Signed Int_q^x dq' / sqrt(H - V(q')) assembled from closed-form pieces.
std::optional<double> path_integral(double q, double x, double H, const PotentialSpec& spec) {
    if (q == x) return 0.0;
    const double lo = std::min(q, x);
    const double hi = std::max(q, x);
    std::vector<double> nodes{lo};
    for (double b : spec.breakpoints(lo, hi)) nodes.push_back(b);
    nodes.push_back(hi);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double x1 = nodes[i];
        const double x2 = nodes[i + 1];
        double v1 = spec.value(x1);
        double v2 = spec.value(x2);
        if (spec.is<Step>() || spec.is<SquareBarrier>()) {
            // piecewise constant: both endpoints take the interior value
            v1 = v2 = spec.value(0.5 * (x1 + x2));
        }
        auto piece = piece_integral(x1, x2, v1, v2, H);
        if (!piece) return std::nullopt;
        total += *piece;
    }
    return (x >= q) ? total : -total;
}

}  // namespace

std::optional<double> classical_toa(const ClassicalState& state, double x,
                                    const PotentialSpec& spec) {
    if (state.p == 0.0) return (x == state.q) ? std::optional<double>(0.0) : std::nullopt;
    const double H = state.energy(spec);
    auto integral = path_integral(state.q, x, H, spec);
    if (!integral) return std::nullopt;
    const double sign = state.p > 0.0 ? 1.0 : -1.0;
    return sign * std::sqrt(0.5 * state.mass) * *integral;
}

std::optional<double> turning_point(double energy, const PotentialSpec& spec) {
    if (!(energy > 0.0)) throw domain_error("turning_point: energy must be > 0");
    if (spec.is<Free>()) return std::nullopt;
    if (const Step* s = spec.get_if<Step>())
        return energy <= s->height ? std::optional<double>(0.0) : std::nullopt;
    if (const SquareBarrier* b = spec.get_if<SquareBarrier>())
        return energy <= b->height ? std::optional<double>(0.0) : std::nullopt;
    if (const LinearRamp* r = spec.get_if<LinearRamp>()) return energy / r->force;
    const SampledSmooth& t = *spec.get_if<SampledSmooth>();
    for (std::size_t i = 0; i + 1 < t.table.size(); ++i) {
        const double v1 = t.table[i].second;
        const double v2 = t.table[i + 1].second;
        if (v1 >= energy) return t.table[i].first;
        if (v2 >= energy) {
            const double s = (energy - v1) / (v2 - v1);
            return t.table[i].first + s * (t.table[i + 1].first - t.table[i].first);
        }
    }
    return std::nullopt;
}

std::optional<double> flight_time(double from, double to, double energy,
                                  const PotentialSpec& spec, double mass) {
    auto integral = path_integral(from, to, energy, spec);
    if (!integral) return std::nullopt;
    return std::sqrt(0.5 * mass) * *integral;
}

std::optional<double> lie_coordinate(double x, double energy, const PotentialSpec& spec) {
    auto integral = path_integral(0.0, x, energy, spec);
    if (!integral) return std::nullopt;
    return std::sqrt(energy) * *integral;
}

std::optional<std::pair<double, double>> jacobi_lie_map(const ClassicalState& state,
                                                        const PotentialSpec& spec) {
    const double H = state.energy(spec);
    auto Q = lie_coordinate(state.q, H, spec);
    if (!Q) return std::nullopt;
    const double sign = state.p >= 0.0 ? 1.0 : -1.0;
    return std::make_pair(*Q, sign * std::sqrt(2.0 * state.mass * H));
}

double classical_ensemble_mean(const GaussianPacket& packet, double x,
                               const PotentialSpec& spec) {
    const double sp = packet.sigma_p();
    const double p_lo = std::max(1e-6 * packet.p0, packet.p0 - 8.0 * sp);
    const double p_hi = packet.p0 + 8.0 * sp;
    const GaussRule& rule = gauss_legendre(16);
    const int panels = 64;
    const double h = (p_hi - p_lo) / panels;

    KahanAccumulator reachable_mass, total_mass, weighted_time;
    for (int k = 0; k < panels; ++k) {
        for (std::size_t j = 0; j < rule.node.size(); ++j) {
            const double p = p_lo + (k + 0.5 * (rule.node[j] + 1.0)) * h;
            const double w = 0.5 * h * rule.weight[j] * packet.momentum_density(p);
            total_mass.add(w);
            auto t = classical_toa(ClassicalState(packet.q0, p, packet.mass), x, spec);
            if (t) {
                reachable_mass.add(w);
                weighted_time.add(w * *t);
            }
        }
    }
    if (reachable_mass.value() < 0.99 * total_mass.value())
        throw coverage_error("classical_ensemble_mean: less than 99% of the packet reaches x");
    return weighted_time.value() / reachable_mass.value();
}

}  // namespace toa
