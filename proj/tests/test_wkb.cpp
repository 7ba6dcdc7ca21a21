#include <doctest.h>

#include <cmath>

#include "toa/classical.hpp"
#include "toa/engine.hpp"
#include "toa/wkb.hpp"

using namespace toa;

TEST_CASE("wkb reduces to the free plane wave when V = 0") {
    const PotentialSpec table = PotentialSpec::sampled({{0.0, 0.0}, {5.0, 0.0}});
    for (double x : {-3.0, 1.0, 4.0}) {
        const cplx v = wkb_eigenfunction(x, 2.0, table, 1.0);
        const double p = 2.0;
        const cplx expected = std::sqrt(1.0 / (2.0 * M_PI * p)) * std::polar(1.0, p * x);
        CHECK(std::abs(v - expected) < 1e-11);
    }
}

TEST_CASE("wkb modulus scales like 1/sqrt(p(x))") {
    // V(x) = E/2 at x = 1: |psi| relative to free = (p/p(x))^(1/2) = 2^(1/4)
    const double E = 2.0;
    const PotentialSpec table = PotentialSpec::sampled({{0.0, 0.0}, {1.0, E / 2.0}});
    const cplx v = wkb_eigenfunction(1.0, E, table, 1.0);
    const double p = std::sqrt(2.0 * E);
    const double free_mod = std::sqrt(1.0 / (2.0 * M_PI * p));
    CHECK(std::abs(v) / free_mod == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-10));
}

TEST_CASE("wkb action against the closed-form antiderivative") {
    // linear ramp: Int_0^x p(q) dq = (p^3 - p(x)^3) / (3 m f)
    const double f = 100.0, m = 1.0, E = 50.0, x = 0.25;
    const WkbState state(E, PotentialSpec::linear_ramp(f), m);
    const long double p3 = std::pow(std::sqrt(2.0L * E), 3.0L);
    const long double px3 = std::pow(std::sqrt(2.0L * (E - f * x)), 3.0L);
    const long double oracle = (p3 - px3) / (3.0L * m * f);
    CHECK(state.action(x) == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-9));
    CHECK(static_cast<double>(oracle) == doctest::Approx(2.154822).epsilon(1e-6));
}

TEST_CASE("wkb refuses the turning-point guard band") {
    const WkbState state(50.0, PotentialSpec::linear_ramp(100.0), 1.0);
    CHECK_THROWS_AS(state.local_momentum(0.4999), turning_point_error);
    CHECK_THROWS_AS(state.local_momentum(0.7), turning_point_error);
    CHECK_NOTHROW(state.local_momentum(0.45));
    const GaussianPacket pk(-2.0, 10.0, 1.0, 1.0);
    CHECK_THROWS_AS(wkb_require_window(0.4, pk, PotentialSpec::linear_ramp(100.0)),
                    turning_point_error);
    CHECK_NOTHROW(wkb_require_window(0.1, pk, PotentialSpec::linear_ramp(100.0)));
}

TEST_CASE("wkb arrival left of the origin equals the free distribution") {
    const GaussianPacket pk(-30.0, 2.0, 10.0, 1.0);
    const ArrivalDistribution wkb = wkb_arrival(-5.0, pk, PotentialSpec::linear_ramp(100.0));
    const ArrivalDistribution free_dist = wkb_arrival(-5.0, pk, PotentialSpec::free());
    REQUIRE(wkb.grid.n_points == free_dist.grid.n_points);
    REQUIRE(wkb.grid.t_min == free_dist.grid.t_min);
    for (int j = 0; j < wkb.grid.n_points; ++j)
        CHECK(std::abs(wkb.density[j] - free_dist.density[j]) <= 1e-10);
    CHECK(std::abs(wkb.total_probability - 1.0) <= 1e-8);
}

TEST_CASE("wkb arrival and mean for a fully transmitted ramp window") {
    const GaussianPacket pk(-2.0, 10.0, 1.0, 1.0);
    const PotentialSpec ramp = PotentialSpec::linear_ramp(100.0);
    const double x = 0.1;
    const ArrivalDistribution dist = wkb_arrival(x, pk, ramp);
    CHECK(std::abs(dist.captured_fraction - 1.0) <= 1e-8);
    // the 1/p(x) weight only increases the arrival probability
    CHECK(dist.total_probability >= 1.0);
    const double mean = wkb_mean(x, pk, ramp);
    CHECK(std::abs(mean - dist.mean) / mean < 0.005);
    const double classical = classical_ensemble_mean(pk, x, ramp);
    CHECK(std::abs(mean - classical) / classical < 0.01);
}

TEST_CASE("wkb mean left of the origin is the free mean") {
    const GaussianPacket pk(-30.0, 2.0, 10.0, 1.0);
    const double wkb = wkb_mean(-4.0, pk, PotentialSpec::linear_ramp(100.0));
    const double free_mean = wkb_mean(-4.0, pk, PotentialSpec::free());
    CHECK(wkb == doctest::Approx(free_mean).epsilon(1e-12));
    CHECK(free_mean == doctest::Approx(1.0 * (-4.0 + 30.0) / 2.0).epsilon(2e-3));
}

TEST_CASE("wkb free mean matches the reference value at x = 50") {
    const GaussianPacket pk(-30.0, 2.0, 10.0, 1.0);
    const double mean = wkb_mean(50.0, pk, PotentialSpec::free());
    CHECK(std::abs(mean - 40.0) / 40.0 < 0.005);
}

TEST_CASE("wkb rejects discontinuous potentials") {
    const GaussianPacket pk(-30.0, 2.0, 10.0, 1.0);
    CHECK_THROWS_AS(wkb_require_window(3.0, pk, PotentialSpec::step(0.5)), domain_error);
    CHECK_THROWS_AS(WkbState(1.0, PotentialSpec::square_barrier(0.5, 2.0), 1.0), domain_error);
}
