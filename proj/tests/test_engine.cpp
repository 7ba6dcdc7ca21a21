#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "toa/analysis.hpp"
#include "toa/classical.hpp"
#include "toa/engine.hpp"
#include "toa/scattering.hpp"

using namespace toa;

namespace {
const GaussianPacket kStandard(-30.0, 2.0, 10.0, 1.0);
const GaussianPacket kReflect(-150.0, 2.0, 10.0, 1.0);
const GaussianPacket kRampPacket(-2.0, 10.0, 1.0, 1.0);

EngineOptions ramp_opts() {
    EngineOptions o;
    o.allow_poor_quality = true;  // |q0| = 2 delta: tails at the 2% level
    return o;
}
}  // namespace

TEST_CASE("free baseline: probability, mean and stationary-phase peak") {
    const PotentialSpec spec = PotentialSpec::free();
    const ArrivalDistribution dist = arrival_distribution(50.0, kStandard, spec);
    CHECK(std::abs(dist.total_probability - 1.0) <= 1e-8);
    CHECK(std::abs(dist.captured_fraction - 1.0) <= 1e-8);
    CHECK(std::abs(dist.mean - 40.0) / 40.0 < 0.005);
    CHECK(std::abs(mean_toa_phase(50.0, kStandard, spec) - 40.0) / 40.0 < 0.005);
    // |amplitude|^2 peaks within one grid step of t = m (x - q0) / p0
    const PeakReport peaks = find_peaks(dist, dist.grid.t_min, dist.grid.t_max);
    REQUIRE(peaks.peaks.size() == 1);
    CHECK(std::abs(peaks.peaks[0].t - 40.0) <= dist.grid.dt());
    // route agreement
    CHECK(std::abs(mean_toa_moment(dist) - mean_toa_phase(50.0, kStandard, spec)) <=
          0.005 * 40.0);
}

TEST_CASE("free-particle POVM completeness at several detector positions") {
    const PotentialSpec spec = PotentialSpec::free();
    for (double x : {-20.0, 0.0, 17.0, 50.0})
        CHECK(std::abs(arrival_probability(x, kStandard, spec) - 1.0) <= 1e-8);
}

TEST_CASE("two-channel completeness for a poor-quality packet") {
    // p0 delta = 4 trips the quality flag; both channels must then restore
    // P(x) = 1 for the free particle.
    const GaussianPacket bad(-24.0, 2.0, 2.0, 1.0);
    CHECK_FALSE(bad.quality_ok());
    const PotentialSpec spec = PotentialSpec::free();
    CHECK_THROWS_AS(arrival_probability(10.0, bad, spec), domain_error);
    EngineOptions opts;
    opts.allow_poor_quality = true;
    CHECK(std::abs(arrival_probability(10.0, bad, spec, opts) - 1.0) <= 1e-8);
}

TEST_CASE("arrival probability is x-independent beyond a finite barrier") {
    const PotentialSpec spec = PotentialSpec::square_barrier(0.5 * 1.8 * 1.8, 4.0);
    const double P50 = arrival_probability(50.0, kStandard, spec);
    const double P80 = arrival_probability(80.0, kStandard, spec);
    CHECK(std::abs(P50 - P80) <= 1e-9 * P50);
}

TEST_CASE("narrow packet: P(x) approaches |T(p0)|^2") {
    const SquareBarrier b{0.5 * 1.5 * 1.5, 4.0};
    const PotentialSpec spec = PotentialSpec::square_barrier(b.height, b.width);
    const double P = arrival_probability(50.0, kStandard, spec);
    const double T2 = std::norm(barrier_solution(2.0, b, 1.0).T);
    CHECK(std::abs(P - T2) / T2 < 0.02);
}

TEST_CASE("amplitude beyond the barrier equals an independent dense quadrature") {
    const SquareBarrier b{0.5 * 1.8 * 1.8, 4.0};
    const PotentialSpec spec = PotentialSpec::square_barrier(b.height, b.width);
    const double x = 50.0, t = 44.0;
    const cplx got = arrival_amplitude(t, x, kStandard, spec);
    // oracle: T(p) e^{ipx} integrand on a dense trapezoid grid
    cplx oracle(0.0, 0.0);
    const int n = 200000;
    const double lo = 1.6, hi = 2.4, h = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
        const double p = lo + i * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        const cplx T = barrier_solution(p, b, 1.0).T;
        oracle += w * h * std::sqrt(p) * T * std::polar(1.0, p * x) *
                  kStandard.momentum_amplitude(p) * std::polar(1.0, -0.5 * p * p * t);
    }
    oracle /= std::sqrt(2.0 * M_PI);
    CHECK(std::abs(got - oracle) <= 1e-6 * std::abs(oracle));
}

TEST_CASE("reflection decomposition: closure and region structure") {
    const PotentialSpec spec = PotentialSpec::square_barrier(0.5 * 2.2 * 2.2, 4.0);
    {
        const ReflectionDecomposition d = decompose_reflection(-100.0, kReflect, spec);
        const double P = arrival_probability(-100.0, kReflect, spec);
        CHECK(std::abs(d.total() - P) <= 1e-9 * P);
        CHECK(d.reflected > 0.5);  // mostly reflected for pV > p0
    }
    {
        // beyond the barrier: no reflected component, no interference
        const ReflectionDecomposition d = decompose_reflection(50.0, kStandard, spec);
        CHECK(d.reflected == 0.0);
        CHECK(d.interference == 0.0);
    }
    {
        // no barrier: no reflection, no interference
        const ReflectionDecomposition d = decompose_reflection(10.0, kStandard,
                                                               PotentialSpec::free());
        CHECK(d.reflected == 0.0);
        CHECK(d.interference == 0.0);
        CHECK(std::abs(d.transmitted - 1.0) <= 1e-8);
    }
    {
        // total reflection: equal transmitted/reflected weights at every x
        const PotentialSpec ramp = PotentialSpec::linear_ramp(100.0);
        for (double x : {-2.0, -1.0, 0.3}) {
            const ReflectionDecomposition d =
                decompose_reflection(x, kRampPacket, ramp, ramp_opts());
            CHECK(std::abs(d.transmitted - d.reflected) <= 1e-12 * d.transmitted);
        }
    }
}

TEST_CASE("step potential: momentum reduction and Hartman regime") {
    // low step: mean equals the classical two-segment time to 2%
    {
        const PotentialSpec step = PotentialSpec::step(0.5 * 0.8 * 0.8);
        const double mean = mean_toa_phase(50.0, kStandard, step);
        const double classical = classical_ensemble_mean(kStandard, 50.0, step);
        CHECK(std::abs(mean - classical) / classical < 0.02);
    }
    // high step: the x-dependent term is replaced by m/(p p'), so the mean
    // hardly moves while x doubles
    {
        const PotentialSpec step = PotentialSpec::step(0.5 * 8.0 * 8.0);
        const double m2 = mean_toa_phase(2.0, kStandard, step);
        const double m4 = mean_toa_phase(4.0, kStandard, step);
        CHECK(std::abs(m2 - m4) / m2 < 0.01);
        // and matches the analytic tunneling time average at p0 to leading order
        const double pbar = std::sqrt(64.0 - 4.0);
        const double hartman_like = 15.0 + 1.0 / (2.0 * pbar);  // m|q0|/p0 + m/(p0 p')
        CHECK(std::abs(m2 - hartman_like) / hartman_like < 0.01);
        // P(x) decays with the penetration depth 1/(2 p')
        const double P1 = arrival_probability(1.0, kStandard, step);
        const double P2 = arrival_probability(2.0, kStandard, step);
        CHECK(std::log(P1 / P2) == doctest::Approx(2.0 * pbar).epsilon(0.02));
    }
}

TEST_CASE("sampled smooth potentials dispatch through the quasi-classical route") {
    const PotentialSpec table = PotentialSpec::sampled(
        {{0.0, 0.0}, {0.1, 10.0}, {0.2, 15.0}, {0.3, 15.0}, {0.4, 5.0}, {0.5, 0.0}});
    const ArrivalDistribution dist = arrival_distribution(0.45, kRampPacket, table);
    CHECK(std::abs(dist.captured_fraction - 1.0) <= 1e-8);
    CHECK(dist.total_probability > 1.0);  // the 1/p(x) weight where V(x) > 0
    const double classical = classical_ensemble_mean(kRampPacket, 0.45, table);
    CHECK(std::abs(dist.mean - classical) / classical < 0.01);
    // past the end of the table there is no interpolant to evaluate
    CHECK_THROWS_AS(arrival_probability(0.7, kRampPacket, table), range_error);
}

TEST_CASE("distributions left of a barrier: incidence and reflection bumps") {
    const SquareBarrier b{0.5 * 2.2 * 2.2, 4.0};
    const PotentialSpec spec = PotentialSpec::square_barrier(b.height, b.width);
    const ArrivalDistribution dist = arrival_distribution(-100.0, kReflect, spec);
    const PeakReport peaks = find_peaks(dist, dist.grid.t_min, dist.grid.t_max);
    REQUIRE(peaks.peaks.size() == 2);
    CHECK(std::abs(peaks.peaks[0].t - 25.0) <= 1.0);
    // the reflected bump sits at the classical 125 shifted by the phase time
    // of the reflection amplitude, (m/p0) d arg R / dp
    const double h = 1e-6;
    const double dargR = (std::arg(barrier_solution(2.0 + h, b, 1.0).R) -
                          std::arg(barrier_solution(2.0 - h, b, 1.0).R)) /
                         (2.0 * h);
    const double t_pred = (100.0 + 150.0 + dargR) / 2.0;
    CHECK(std::abs(peaks.peaks[1].t - t_pred) <= 1.0);
    // moment and phase routes agree
    const double mm = mean_toa_moment(dist);
    const double mp = mean_toa_phase(-100.0, kReflect, spec);
    CHECK(std::abs(mm - mp) / std::abs(mp) < 0.005);
    // components sum to the density pointwise
    for (int j = 0; j < dist.grid.n_points; j += 37) {
        const double sum = dist.density_tr[j] + dist.density_ref[j] + dist.density_int[j];
        CHECK(std::abs(sum - dist.density[j]) <= 1e-10);
    }
}

TEST_CASE("total reflection: invariance, classical round trip, merging peaks") {
    const LinearRamp ramp{100.0};
    const double E0 = kRampPacket.mean_energy();
    // t_i + t_r is independent of x
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 32; ++i) {
        const double x = -2.0 + 2.0 * i / 32.0;
        auto [ti, tr] = incident_reflected_times(x, E0, kRampPacket, ramp);
        lo = std::min(lo, ti + tr);
        hi = std::max(hi, ti + tr);
    }
    CHECK((hi - lo) / std::abs(hi) <= 1e-6);
    // packet average of the round trip is the classical 0.6 to 2%
    const TotalReflectionSplit split =
        split_mean_toa_total_reflection(-2.0, kRampPacket, ramp, ramp_opts());
    CHECK(std::abs(split.mean_incident + split.mean_reflected - 0.6) / 0.6 < 0.02);
    // at x = q0 the packet is born at its own center
    CHECK(std::abs(split.mean_incident) <= split.distribution.grid.dt());
    // bimodal with equal masses; the peaks track t_i and t_r
    const PeakReport peaks = find_peaks(split.distribution, split.distribution.grid.t_min,
                                        split.distribution.grid.t_max);
    REQUIRE(peaks.peaks.size() == 2);
    CHECK(std::abs(peaks.peaks[0].t - split.mean_incident) <= peaks.peaks[0].half_width);
    CHECK(std::abs(peaks.peaks[1].t - split.mean_reflected) <= peaks.peaks[1].half_width);
    // peak separation shrinks toward the classical turning point x = E/f
    double prev_sep = 1e300;
    for (double x : {-2.0, -1.0, 0.5}) {
        const ArrivalDistribution d =
            arrival_distribution(x, kRampPacket, PotentialSpec::linear_ramp(100.0),
                                 std::nullopt, ramp_opts());
        const PeakReport pr = find_peaks(d, d.grid.t_min, d.grid.t_max);
        const double sep = pr.peaks.size() >= 2 ? pr.peaks.back().t - pr.peaks.front().t : 0.0;
        CHECK(sep < prev_sep);
        prev_sep = sep;
    }
}

TEST_CASE("total-reflection means follow the classical times within the widths") {
    const LinearRamp ramp{100.0};
    for (double x : {-1.5, -0.8}) {
        const TotalReflectionSplit split =
            split_mean_toa_total_reflection(x, kRampPacket, ramp, ramp_opts());
        const double t_cl_in = (x + 2.0) / 10.0;          // m (x - q0) / p0
        const double t_cl_out = 0.6 - t_cl_in;            // classical return
        const PeakReport pr = find_peaks(split.distribution, split.distribution.grid.t_min,
                                         split.distribution.grid.t_max);
        REQUIRE(pr.peaks.size() == 2);
        CHECK(std::abs(split.mean_incident - t_cl_in) <= pr.peaks[0].half_width);
        CHECK(std::abs(split.mean_reflected - t_cl_out) <= pr.peaks[1].half_width);
    }
}

TEST_CASE("undefined density when nothing arrives") {
    // deep tunneling: P ~ 1e-21 is below the 1e-12 gate
    const PotentialSpec spec = PotentialSpec::square_barrier(0.5 * 2.6 * 2.6, 15.0);
    const ArrivalDistribution dist = arrival_distribution(50.0, kStandard, spec);
    CHECK_FALSE(dist.defined);
    CHECK(dist.density.empty());
    CHECK_THROWS_AS(mean_toa_moment(dist), domain_error);
    // the phase-route mean remains available
    CHECK(std::isfinite(mean_toa_phase(50.0, kStandard, spec)));
}

TEST_CASE("grid tail check raises on a too-small explicit grid") {
    const PotentialSpec spec = PotentialSpec::free();
    const ArrivalDistribution dist =
        arrival_distribution(50.0, kStandard, spec, TimeGrid(38.0, 42.0, 64));
    CHECK(dist.captured_fraction < 0.999999);
    CHECK_THROWS_AS(mean_toa_moment(dist), grid_error);
}

TEST_CASE("hartman_time values") {
    CHECK(hartman_time(40.0, 15.0, 2.0, 1.0) == 32.5);
    CHECK(hartman_time(40.0, 0.0, 2.0, 1.0) == 40.0);
    CHECK(hartman_time(40.0, 10.0, 2.0, 1.0) == 35.0);
}

TEST_CASE("wigner phase time: free, Hartman saturation, vanishing barrier") {
    CHECK(wigner_phase_time(2.0, 50.0, -30.0, PotentialSpec::free(), 1.0) ==
          doctest::Approx(40.0).epsilon(1e-14));
    // deep tunneling saturates toward t0 - m a / p
    const PotentialSpec deep = PotentialSpec::square_barrier(0.5 * 400.0, 30.0);
    CHECK(wigner_phase_time(2.0, 50.0, -30.0, deep, 1.0) ==
          doctest::Approx(40.0 - 15.0).epsilon(0.005));
    // pV -> 0 removes every a-dependence
    const PotentialSpec tiny = PotentialSpec::square_barrier(0.5 * 1e-12, 15.0);
    CHECK(wigner_phase_time(2.0, 50.0, -30.0, tiny, 1.0) ==
          doctest::Approx(40.0).epsilon(1e-9));
}

TEST_CASE("fft fast path agrees with the reference kernel") {
    EngineOptions fast;
    fast.use_fft = true;
    {
        const PotentialSpec spec = PotentialSpec::square_barrier(0.5 * 1.9 * 1.9, 4.0);
        const TimeGrid grid(-50.0, 250.0, 1024);
        const ArrivalDistribution ref = arrival_distribution(-100.0, kReflect, spec, grid);
        const ArrivalDistribution fft = arrival_distribution(-100.0, kReflect, spec, grid, fast);
        double scale = 0.0, worst = 0.0;
        for (int j = 0; j < grid.n_points; ++j) {
            scale = std::max(scale, ref.density[j]);
            worst = std::max(worst, std::abs(ref.density[j] - fft.density[j]));
        }
        CHECK(worst / scale <= 1e-6);
    }
    {
        const TimeGrid grid(10.0, 70.0, 512);
        const ArrivalDistribution ref =
            arrival_distribution(50.0, kStandard, PotentialSpec::free(), grid);
        const ArrivalDistribution fft =
            arrival_distribution(50.0, kStandard, PotentialSpec::free(), grid, fast);
        double scale = 0.0, worst = 0.0;
        for (int j = 0; j < grid.n_points; ++j) {
            scale = std::max(scale, ref.density[j]);
            worst = std::max(worst, std::abs(ref.density[j] - fft.density[j]));
        }
        CHECK(worst / scale <= 1e-6);
    }
}

TEST_CASE("auto grid respects the minimum point count") {
    const ArrivalDistribution dist =
        arrival_distribution(50.0, kStandard, PotentialSpec::free());
    CHECK(dist.grid.n_points >= 16);
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 8), domain_error);
    CHECK_THROWS_AS(TimeGrid(1.0, 0.0, 64), domain_error);
}
