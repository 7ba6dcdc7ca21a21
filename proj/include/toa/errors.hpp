#pragma once

#include <stdexcept>
#include <string>

namespace toa {

// Base class for every recoverable failure raised by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A physically invalid argument (nonpositive momentum, mass, ...).
struct domain_error : error {
    using error::error;
};

// Argument outside the documented supported range of an algorithm.
struct range_error : error {
    using error::error;
};

// A quadrature or series failed to reach the requested tolerance.
// `achieved` carries the best relative-error estimate obtained.
struct accuracy_error : error {
    double achieved;
    accuracy_error(const std::string& what, double achieved_estimate)
        : error(what), achieved(achieved_estimate) {}
};

// Evaluation inside the guard band around a classical turning point.
struct turning_point_error : domain_error {
    using domain_error::domain_error;
};

// A time grid that misses too much arrival mass.
struct grid_error : error {
    using error::error;
};

// Phase unwrapping failed (jump larger than pi between adjacent nodes).
struct phase_error : error {
    using error::error;
};

// An ensemble average could not reach the required reachable mass.
struct coverage_error : error {
    using error::error;
};

}  // namespace toa
