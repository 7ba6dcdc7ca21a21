#include "toa/validate.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "toa/airy.hpp"
#include "toa/analysis.hpp"
#include "toa/classical.hpp"
#include "toa/engine.hpp"
#include "toa/quadrature.hpp"
#include "toa/scattering.hpp"

namespace toa {

namespace {

CheckResult check(const std::string& name, double worst, double bound) {
    CheckResult r;
    r.name = name;
    r.pass = worst <= bound;
    std::ostringstream os;
    os << "worst " << worst << " vs bound " << bound;
    r.detail = os.str();
    return r;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite() {
    std::vector<CheckResult> out;
    std::mt19937 rng(1234);

    {  // packet momentum-space normalization
        const GaussianPacket pk(-30.0, 2.0, 10.0, 1.0);
        const double norm = integrate_adaptive(
            [&](double p) { return pk.momentum_density(p); }, 0.0, pk.p0 + 10.0, 1e-12);
        out.push_back(check("packet momentum norm", std::abs(norm - 1.0), 1e-10));
    }
    {  // Fourier pair at a few probe momenta
        const GaussianPacket pk(-30.0, 2.0, 10.0, 1.0);
        double worst = 0.0;
        for (double p : {1.8, 2.0, 2.3}) {
            cplx ft_re(0.0, 0.0);
            const int n = 4000;
            const double lo = pk.q0 - 12.0 * pk.delta, hi = pk.q0 + 12.0 * pk.delta;
            const double h = (hi - lo) / n;
            for (int i = 0; i <= n; ++i) {
                const double q = lo + i * h;
                const double w = (i == 0 || i == n) ? 0.5 : 1.0;
                ft_re += w * h * pk.position_amplitude(q) * std::polar(1.0, -p * q);
            }
            ft_re /= std::sqrt(2.0 * M_PI);
            worst = std::max(worst, std::abs(ft_re - pk.momentum_amplitude(p)));
        }
        out.push_back(check("packet Fourier pair", worst, 1e-10));
    }
    {  // Airy ODE residual
        std::uniform_real_distribution<double> uz(-200.0, 200.0);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double z = uz(rng);
            const double h = 1e-3 / std::sqrt(1.0 + std::abs(z));
            const double second = (airy_pair(z - h).ai - 2.0 * airy_pair(z).ai +
                                   airy_pair(z + h).ai) / (h * h);
            const double rhs = z * airy_pair(z).ai;
            worst = std::max(worst, std::abs(second - rhs) / (1.0 + std::abs(rhs)));
        }
        out.push_back(check("Airy ODE residual", worst, 1e-6));
    }
    {  // barrier unitarity
        std::uniform_real_distribution<double> up(0.1, 5.0), uv(0.0, 5.0), ua(0.1, 20.0);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double p = up(rng), pV = uv(rng), a = ua(rng);
            const SquareBarrier b{0.5 * pV * pV, a};
            const ScatteringSolution sol = barrier_solution(p, b, 1.0);
            worst = std::max(worst, std::abs(std::norm(sol.T) + std::norm(sol.R) - 1.0));
        }
        out.push_back(check("barrier unitarity", worst, 1e-12));
    }
    {  // closed-form transmission vs interface matching
        double worst = 0.0;
        const SquareBarrier b{0.5 * 2.2 * 2.2, 15.0};
        for (int i = 0; i <= 200; ++i) {
            const double p = 0.3 + 4.0 * i / 200.0;
            if (std::abs(p - 2.2) < 1e-3) continue;
            worst = std::max(worst, std::abs(barrier_solution(p, b, 1.0).T -
                                             barrier_transmission_formula(p, b, 1.0)));
        }
        out.push_back(check("barrier T formula vs matching", worst, 1e-10));
    }
    {  // step flux conservation / total reflection
        double worst = 0.0;
        for (int i = 1; i <= 100; ++i) {
            const double p = 0.05 * i;
            const ScatteringSolution sol = step_coefficients(p, 2.0, 1.0);
            if (p > 2.0) {
                const double flux = std::norm(sol.R) +
                                    std::real(sol.p_prime) / p * std::norm(sol.T);
                worst = std::max(worst, std::abs(flux - 1.0));
            } else {
                worst = std::max(worst, std::abs(std::abs(sol.R) - 1.0));
            }
        }
        out.push_back(check("step flux conservation", worst, 1e-12));
    }
    {  // classical equation of time vs Jacobi-Lie route
        std::uniform_real_distribution<double> uq(-20.0, -1.0), up(1.0, 10.0);
        const PotentialSpec ramp = PotentialSpec::linear_ramp(50.0);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const ClassicalState st(uq(rng), up(rng), 1.0);
            const double H = st.energy(ramp);
            const double x = 0.8 * H / 50.0;  // inside the reachable region
            auto direct = classical_toa(st, x, ramp);
            auto map = jacobi_lie_map(st, ramp);
            auto X = lie_coordinate(x, H, ramp);
            if (!direct || !map || !X) continue;
            const double lie = st.mass * (*X - map->first) / map->second;
            worst = std::max(worst, std::abs(lie - *direct) / std::max(1.0, std::abs(*direct)));
        }
        out.push_back(check("classical time, two routes", worst, 1e-10));
    }
    {  // free-particle baseline
        const GaussianPacket pk(-30.0, 2.0, 10.0, 1.0);
        const PotentialSpec spec = PotentialSpec::free();
        const double P = arrival_probability(50.0, pk, spec);
        const double mean = mean_toa_phase(50.0, pk, spec);
        out.push_back(check("free baseline P(x)", std::abs(P - 1.0), 1e-8));
        out.push_back(check("free baseline mean", std::abs(mean - 40.0) / 40.0, 0.005));
    }
    {  // total-reflection x-invariance of t_i + t_r
        const GaussianPacket pk(-2.0, 10.0, 1.0, 1.0);
        const LinearRamp ramp{100.0};
        const double E = pk.mean_energy();
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i <= 20; ++i) {
            const double x = pk.q0 + (0.0 - pk.q0) * i / 20.0;
            auto [ti, tr] = incident_reflected_times(x, E, pk, ramp);
            lo = std::min(lo, ti + tr);
            hi = std::max(hi, ti + tr);
        }
        out.push_back(check("total reflection t_i + t_r invariance",
                            (hi - lo) / std::abs(hi), 1e-6));
    }
    return out;
}

std::vector<CheckResult> run_scenario_checks(const ScenarioConfig& cfg) {
    std::vector<CheckResult> out;
    EngineOptions opts;
    opts.rel_tol = cfg.rel_tol;
    opts.allow_poor_quality = cfg.allow_poor_quality;
    const GaussianPacket pk = cfg.packet();
    for (std::size_t i = 0; i < cfg.detectors.size(); ++i) {
        const double x = cfg.detectors[i];
        std::ostringstream tag;
        tag << "x = " << x;
        try {
            ArrivalDistribution dist = arrival_distribution(x, pk, cfg.potential, cfg.grid, opts);
            if (!dist.defined) {
                out.push_back({"density normalization (" + tag.str() + ")", true,
                               "P(x) below threshold: density undefined"});
                continue;
            }
            out.push_back(check("density normalization (" + tag.str() + ")",
                                std::abs(dist.captured_fraction - 1.0), 1e-8));
            const double mm = mean_toa_moment(dist);
            const double mp = mean_toa_phase(x, pk, cfg.potential, opts);
            out.push_back(check("moment vs phase mean (" + tag.str() + ")",
                                std::abs(mm - mp) / std::max(std::abs(mp), 1e-12), 0.005));
            const ReflectionDecomposition dec = decompose_reflection(x, pk, cfg.potential, opts);
            const double P = arrival_probability(x, pk, cfg.potential, opts);
            out.push_back(check("decomposition closure (" + tag.str() + ")",
                                std::abs(dec.total() - P) / std::max(P, 1e-300), 1e-9));
        } catch (const error& e) {
            out.push_back({"scenario check (" + tag.str() + ")", false, e.what()});
        }
    }
    return out;
}

}  // namespace toa
