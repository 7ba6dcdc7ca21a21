#include "toa/airy.hpp"

#include <cmath>
#include <vector>

#include "toa/errors.hpp"

namespace toa {

namespace {

// Ai(0) = 3^(-2/3)/Gamma(2/3),  Ai'(0) = -3^(-1/3)/Gamma(1/3).
constexpr long double kAi0 = 0.35502805388781723926006318600418317640L;
constexpr long double kAip0 = -0.25881940379280679840518356018920396348L;
constexpr long double kSqrtPi = 1.77245385090551602729816748334114518280L;
constexpr long double kPi = 3.14159265358979323846264338327950288420L;

// Coefficients of the large-|z| expansions:
//   u_0 = 1, u_{k+1} = u_k (6k+1)(6k+5) / (72(k+1)),  v_k = -(6k+1)/(6k-1) u_k for k>=1.
struct AsymptoticTables {
    std::vector<long double> u, v;
    AsymptoticTables() : u(64), v(64) {
        u[0] = 1.0L;
        v[0] = 1.0L;
        for (int k = 0; k + 1 < 64; ++k) {
            u[k + 1] = u[k] * (6.0L * k + 1.0L) * (6.0L * k + 5.0L) / (72.0L * (k + 1));
            v[k + 1] = -u[k + 1] * (6.0L * (k + 1) + 1.0L) / (6.0L * (k + 1) - 1.0L);
        }
    }
};

const AsymptoticTables& tables() {
    static const AsymptoticTables t;
    return t;
}

struct PairL {
    long double ai, aip;
};

// Maclaurin series; f and g are the entire solutions of y'' = z y with
// f(0)=1, f'(0)=0 and g(0)=0, g'(0)=1, so Ai = Ai(0) f + Ai'(0) g.
PairL maclaurin_l(long double z) {
    const long double z3 = z * z * z;
    long double cf = 1.0L;           // f term, k = 0
    long double cg = z;              // g term, k = 0
    long double cfp = 0.5L * z * z;  // f' term, k = 1
    long double cgp = 1.0L;          // g' term, k = 0
    long double f = cf, g = cg, fp = cfp, gp = cgp;
    for (int k = 0; k < 200; ++k) {
        cf *= z3 / ((3.0L * k + 2.0L) * (3.0L * k + 3.0L));
        cg *= z3 / ((3.0L * k + 3.0L) * (3.0L * k + 4.0L));
        cgp *= z3 / ((3.0L * k + 1.0L) * (3.0L * k + 3.0L));
        f += cf;
        g += cg;
        gp += cgp;
        if (k >= 1) {
            cfp *= z3 * (k + 1.0L) / (k * (3.0L * k + 2.0L) * (3.0L * k + 3.0L));
            fp += cfp;
        }
        const long double scale = std::fabs(f) + std::fabs(g) + 1.0L;
        if (std::fabs(cf) < 1e-25L * scale && std::fabs(cg) < 1e-25L * scale && k >= 2) break;
    }
    return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
}

PairL asymptotic_positive_l(long double z) {
    const AsymptoticTables& t = tables();
    const long double zeta = 2.0L / 3.0L * z * std::sqrt(z);
    long double su = 0.0L, sv = 0.0L;
    long double pw = 1.0L;  // (-1/zeta)^k
    long double prev = 1e30L;
    for (std::size_t k = 0; k < t.u.size(); ++k) {
        const long double term = t.u[k] * pw;
        if (std::fabs(term) > prev) break;  // optimal truncation
        su += term;
        sv += t.v[k] * pw;
        prev = std::fabs(term);
        pw *= -1.0L / zeta;
    }
    const long double z14 = std::pow(z, 0.25L);
    const long double e = std::exp(-zeta);
    return {e * su / (2.0L * kSqrtPi * z14), -z14 * e * sv / (2.0L * kSqrtPi)};
}

PairL asymptotic_negative_l(long double z) {
    const AsymptoticTables& t = tables();
    const long double x = -z;
    const long double zeta = 2.0L / 3.0L * x * std::sqrt(x);
    const long double phi = zeta - 0.25L * kPi;
    long double ue = 0.0L, uo = 0.0L;  // even/odd u sums
    long double ve = 0.0L, vo = 0.0L;
    long double pw = 1.0L;  // zeta^(-2k) with alternating sign folded in
    long double prev = 1e30L;
    for (std::size_t k = 0; 2 * k + 1 < t.u.size(); ++k) {
        const long double sgn = (k % 2 == 0) ? 1.0L : -1.0L;
        const long double term = sgn * t.u[2 * k] * pw;
        if (std::fabs(term) > prev) break;
        ue += term;
        uo += sgn * t.u[2 * k + 1] * pw / zeta;
        ve += sgn * t.v[2 * k] * pw;
        vo += sgn * t.v[2 * k + 1] * pw / zeta;
        prev = std::fabs(term);
        pw /= zeta * zeta;
    }
    const long double c = std::cos(phi), s = std::sin(phi);
    const long double x14 = std::pow(x, 0.25L);
    return {(c * ue + s * uo) / (kSqrtPi * x14), x14 * (s * ve - c * vo) / kSqrtPi};
}

// Taylor steps of y'' = z y.  Marching from the anchor at z = 12 toward
// smaller z keeps the decaying solution dominant, so the anchor accuracy
// is preserved through the gap where neither the Maclaurin series nor the
// asymptotic expansion reaches 1e-10.
PairL taylor_march(PairL y, long double z_from, long double z_to) {
    const int nsteps = static_cast<int>(std::ceil(std::fabs(z_to - z_from) / 0.5L));
    const long double h = (z_to - z_from) / nsteps;
    long double z = z_from;
    std::vector<long double> a;
    for (int s = 0; s < nsteps; ++s) {
        a.assign({y.ai, y.aip});
        a.reserve(34);
        // a_{n+2} = (z a_n + a_{n-1}) / ((n+1)(n+2)), with a_{-1} = 0.
        for (int n = 0; n + 2 < 34; ++n) {
            const long double prev = (n >= 1) ? a[n - 1] : 0.0L;
            a.push_back((z * a[n] + prev) / ((n + 1.0L) * (n + 2.0L)));
        }
        long double sum = 0.0L, dsum = 0.0L;
        for (std::size_t n = a.size(); n-- > 1;) {
            sum = (sum + a[n]) * h;
            dsum = (dsum + n * a[n]) * h;
        }
        sum += a[0];
        dsum /= h;
        y = {sum, dsum};
        z += h;
    }
    return y;
}

}  // namespace

namespace airy_detail {

AiryPair maclaurin(double z) {
    PairL p = maclaurin_l(z);
    return {static_cast<double>(p.ai), static_cast<double>(p.aip), z};
}

AiryPair asymptotic_positive(double z) {
    PairL p = asymptotic_positive_l(z);
    return {static_cast<double>(p.ai), static_cast<double>(p.aip), z};
}

AiryPair asymptotic_negative(double z) {
    PairL p = asymptotic_negative_l(z);
    return {static_cast<double>(p.ai), static_cast<double>(p.aip), z};
}

AiryPair taylor_bridge(double z) {
    PairL anchor = asymptotic_positive_l(bridge_hi);
    PairL p = taylor_march(anchor, bridge_hi, z);
    return {static_cast<double>(p.ai), static_cast<double>(p.aip), z};
}

}  // namespace airy_detail

AiryPair airy_pair(double z) {
    if (!(std::abs(z) <= 1e4))
        throw range_error("airy_pair: |z| exceeds the supported range 1e4");
    using namespace airy_detail;
    if (z >= bridge_hi) return asymptotic_positive(z);
    if (z >= series_hi) return taylor_bridge(z);
    if (z > series_lo) return maclaurin(z);
    return asymptotic_negative(z);
}

double airy_zero(int k) {
    if (k < 1) throw domain_error("airy_zero: k must be >= 1");
    // McMahon-style expansion, then Newton refinement.
    const double t = 3.0 * M_PI * (4.0 * k - 1.0) / 8.0;
    const double t2 = t * t;
    double a = -std::pow(t, 2.0 / 3.0) *
               (1.0 + 5.0 / 48.0 / t2 - 5.0 / 36.0 / (t2 * t2) +
                77125.0 / 82944.0 / (t2 * t2 * t2));
    for (int it = 0; it < 4; ++it) {
        AiryPair p = airy_pair(a);
        const double step = p.ai / p.ai_prime;
        a -= step;
        if (std::abs(step) < 1e-14 * std::abs(a)) break;
    }
    return a;
}

int airy_zero_count_above(double z) {
    if (z >= -2.33) return 0;
    const double x = -z;
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    int k = std::max(0, static_cast<int>(std::floor((zeta + 0.25 * M_PI) / M_PI)));
    while (k >= 1 && airy_zero(k) <= z) --k;
    while (airy_zero(k + 1) > z) ++k;
    return k;
}

}  // namespace toa
