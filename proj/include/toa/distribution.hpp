#pragma once

#include <cmath>
#include <vector>

#include "toa/errors.hpp"

namespace toa {

// Uniform time grid.
struct TimeGrid {
    double t_min = 0.0;
    double t_max = 1.0;
    int n_points = 16;

    TimeGrid() = default;
    TimeGrid(double t_min_, double t_max_, int n) : t_min(t_min_), t_max(t_max_), n_points(n) {
        if (!(t_min < t_max)) throw domain_error("TimeGrid: t_min must be < t_max");
        if (n_points < 16) throw domain_error("TimeGrid: need at least 16 points");
    }

    double dt() const { return (t_max - t_min) / (n_points - 1); }
    double at(int i) const { return t_min + i * dt(); }
};

// Normalized time-of-arrival density at one detector position.
struct ArrivalDistribution {
    double x = 0.0;
    TimeGrid grid;
    std::vector<double> density;  // integrates to 1 over the grid (trapezoid)
    // Component densities, same normalization; interference may be negative.
    // Empty when the potential has no transmitted/reflected decomposition.
    std::vector<double> density_tr;
    std::vector<double> density_ref;
    std::vector<double> density_int;
    double total_probability = 0.0;  // P(x), probability of ever arriving
    double mean = std::nan("");      // trapezoid first moment of density
    double captured_fraction = 0.0;  // grid mass / P(x) (tail check)
    bool defined = true;             // false when P(x) <= 1e-12: no arrivals

    bool has_components() const { return !density_tr.empty(); }
};

}  // namespace toa
