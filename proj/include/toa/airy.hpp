#pragma once

namespace toa {

// Ai and Ai' evaluated at the same real argument.
struct AiryPair {
    double ai = 0.0;
    double ai_prime = 0.0;
    double argument = 0.0;
};

// Real-argument Airy function of the first kind and its derivative.
// Supported range |z| <= 1e4 (range_error beyond).  Relative accuracy is
// ~1e-12 against the oscillatory envelope, comfortably inside the 1e-10
// target for |z| <= 200.
AiryPair airy_pair(double z);

// k-th negative zero of Ai (k >= 1, a_1 ~ -2.3381).
double airy_zero(int k);

// Number of zeros of Ai in the open interval (z, 0); 0 for z >= a_1.
int airy_zero_count_above(double z);

namespace airy_detail {
// Individual regimes, exposed so the switchover continuity can be tested.
AiryPair maclaurin(double z);            // |z| small to moderate
AiryPair taylor_bridge(double z);        // positive gap, propagated from z=12
AiryPair asymptotic_positive(double z);  // decaying regime
AiryPair asymptotic_negative(double z);  // oscillatory regime
inline constexpr double series_hi = 4.5;
inline constexpr double bridge_hi = 12.0;
inline constexpr double series_lo = -7.5;
}  // namespace airy_detail

}  // namespace toa
