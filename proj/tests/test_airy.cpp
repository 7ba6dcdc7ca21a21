#include <doctest.h>

#include <cmath>
#include <random>

#include "toa/airy.hpp"
#include "toa/errors.hpp"

using namespace toa;

namespace {

// Independent oracle: 40-term Maclaurin series in extended precision with
// gamma-function constants and explicit Pochhammer/factorial terms.
struct OracleAiry {
    long double ai, aip;
};

OracleAiry oracle_maclaurin(long double z) {
    const long double c1 = std::pow(3.0L, -2.0L / 3.0L) / std::tgammal(2.0L / 3.0L);
    const long double c2 = std::pow(3.0L, -1.0L / 3.0L) / std::tgammal(1.0L / 3.0L);
    long double f = 0.0L, g = 0.0L, fp = 0.0L, gp = 0.0L;
    for (int k = 0; k < 40; ++k) {
        long double poch13 = 1.0L, poch23 = 1.0L;
        for (int j = 0; j < k; ++j) {
            poch13 *= (1.0L / 3.0L + j);
            poch23 *= (2.0L / 3.0L + j);
        }
        long double fact3k = 1.0L, fact3k1 = 1.0L;
        for (int j = 2; j <= 3 * k; ++j) fact3k *= j;
        for (int j = 2; j <= 3 * k + 1; ++j) fact3k1 *= j;
        const long double p3k = std::pow(3.0L, static_cast<long double>(k));
        const long double zf = std::pow(z, 3.0L * k);
        f += p3k * poch13 * zf / fact3k;
        g += p3k * poch23 * std::pow(z, 3.0L * k + 1.0L) / fact3k1;
        if (k >= 1) fp += p3k * poch13 * (3.0L * k) * std::pow(z, 3.0L * k - 1.0L) / fact3k;
        gp += p3k * poch23 * (3.0L * k + 1.0L) * zf / fact3k1;
    }
    return {c1 * f - c2 * g, c1 * fp - c2 * gp};
}

double envelope(double z) {
    return std::abs(z) > 1.0 ? 1.0 / (std::sqrt(M_PI) * std::pow(std::abs(z), 0.25)) : 0.6;
}

}  // namespace

TEST_CASE("airy matches the extended-precision Maclaurin oracle") {
    for (double z : {0.0, 0.5, -0.5, 2.0, -2.0, 4.0, -5.0, -7.0, 3.9}) {
        const OracleAiry ref = oracle_maclaurin(z);
        const AiryPair got = airy_pair(z);
        const double scale = std::abs(static_cast<double>(ref.ai)) + 1e-3;
        CHECK(std::abs(got.ai - static_cast<double>(ref.ai)) / scale < 1e-12);
        const double scale_p = std::abs(static_cast<double>(ref.aip)) + 1e-3;
        CHECK(std::abs(got.ai_prime - static_cast<double>(ref.aip)) / scale_p < 1e-12);
    }
}

TEST_CASE("airy at zero matches the frozen constants") {
    const AiryPair a = airy_pair(0.0);
    CHECK(a.ai == doctest::Approx(0.355028053887817).epsilon(1e-14));
    CHECK(a.ai_prime == doctest::Approx(-0.258819403792807).epsilon(1e-14));
}

TEST_CASE("airy decaying regime obeys the asymptotic envelope") {
    const AiryPair a = airy_pair(20.0);
    CHECK(a.ai > 0.0);
    CHECK(a.ai < 1e-25);
    const double zeta = 2.0 / 3.0 * std::pow(20.0, 1.5);
    const double env = std::exp(-zeta) / (2.0 * std::sqrt(M_PI) * std::pow(20.0, 0.25));
    CHECK(a.ai == doctest::Approx(env).epsilon(0.05));
}

TEST_CASE("airy oscillatory regime: sign and magnitude at z = -5") {
    const AiryPair a = airy_pair(-5.0);
    CHECK(std::abs(a.ai) <= envelope(-5.0) * 1.01);
    const double zeta = 2.0 / 3.0 * std::pow(5.0, 1.5);
    CHECK(a.ai * std::cos(zeta - 0.25 * M_PI) > 0.0);  // sign from the asymptotic oracle
}

TEST_CASE("airy ODE residual on random probe points") {
    std::mt19937 rng(20260809);
    std::uniform_real_distribution<double> uz(-200.0, 200.0);
    for (int i = 0; i < 1000; ++i) {
        const double z = uz(rng);
        const double h = 1e-3 / std::sqrt(1.0 + std::abs(z));
        const double second =
            (airy_pair(z - h).ai - 2.0 * airy_pair(z).ai + airy_pair(z + h).ai) / (h * h);
        const double rhs = z * airy_pair(z).ai;
        CHECK(std::abs(second - rhs) <= 1e-6 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("airy regimes agree at the switch points") {
    using namespace airy_detail;
    {
        const AiryPair a = maclaurin(series_hi);
        const AiryPair b = taylor_bridge(series_hi);
        CHECK(std::abs(a.ai - b.ai) <= 1e-10 * std::abs(a.ai));
        CHECK(std::abs(a.ai_prime - b.ai_prime) <= 1e-10 * std::abs(a.ai_prime));
    }
    {
        const AiryPair a = taylor_bridge(bridge_hi);
        const AiryPair b = asymptotic_positive(bridge_hi);
        CHECK(std::abs(a.ai - b.ai) <= 1e-10 * std::abs(a.ai));
        CHECK(std::abs(a.ai_prime - b.ai_prime) <= 1e-10 * std::abs(a.ai_prime));
    }
    {
        const AiryPair a = maclaurin(series_lo);
        const AiryPair b = asymptotic_negative(series_lo);
        const double env = envelope(series_lo);
        CHECK(std::abs(a.ai - b.ai) <= 1e-10 * env);
        CHECK(std::abs(a.ai_prime - b.ai_prime) <= 1e-10);
    }
}

TEST_CASE("airy positive axis is positive and strictly decreasing") {
    double prev = airy_pair(0.0).ai;
    for (int i = 1; i <= 400; ++i) {
        const double v = airy_pair(0.25 * i).ai;
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("airy range gate") {
    CHECK_THROWS_AS(airy_pair(1.5e4), range_error);
    CHECK_THROWS_AS(airy_pair(-1.5e4), range_error);
    CHECK_NOTHROW(airy_pair(9.9e3));
    CHECK_NOTHROW(airy_pair(-9.9e3));
}

TEST_CASE("airy zeros and zero counting") {
    for (int k : {1, 2, 3, 7, 20, 50}) {
        const double a = airy_zero(k);
        CHECK(std::abs(airy_pair(a).ai) < 1e-12);
        if (k > 1) CHECK(airy_zero(k) < airy_zero(k - 1));
    }
    CHECK(airy_zero_count_above(-1.0) == 0);
    CHECK(airy_zero_count_above(-2.4) == 1);
    CHECK(airy_zero_count_above(-4.1) == 2);
    for (int k : {1, 4, 9}) {
        const double a = airy_zero(k);
        CHECK(airy_zero_count_above(a - 1e-9) == k);
        CHECK(airy_zero_count_above(a + 1e-9) == k - 1);
    }
}
