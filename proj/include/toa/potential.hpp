#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "toa/errors.hpp"

namespace toa {

// All potentials vanish for q < 0 and are nonnegative everywhere.

struct Free {};

struct Step {
    double height = 0.0;  // V, jumps at q = 0
};

struct SquareBarrier {
    double height = 0.0;  // V on [0, width]
    double width = 0.0;   // a > 0
};

struct LinearRamp {
    double force = 0.0;  // V(q) = force * q for q > 0
};

// Piecewise-linear table on a strictly increasing grid starting at q = 0.
// V = 0 for q < first node; evaluation past the last node is a range error.
struct SampledSmooth {
    std::vector<std::pair<double, double>> table;
};

class PotentialSpec {
  public:
    using Variant = std::variant<Free, Step, SquareBarrier, LinearRamp, SampledSmooth>;

    PotentialSpec() : v_(Free{}) {}
    PotentialSpec(Variant v) : v_(std::move(v)) { validate(); }

    static PotentialSpec free() { return PotentialSpec(Free{}); }
    static PotentialSpec step(double height) { return PotentialSpec(Step{height}); }
    static PotentialSpec square_barrier(double height, double width) {
        return PotentialSpec(SquareBarrier{height, width});
    }
    static PotentialSpec linear_ramp(double force) { return PotentialSpec(LinearRamp{force}); }
    static PotentialSpec sampled(std::vector<std::pair<double, double>> table) {
        return PotentialSpec(SampledSmooth{std::move(table)});
    }

    const Variant& variant() const { return v_; }
    template <class T>
    const T* get_if() const {
        return std::get_if<T>(&v_);
    }
    template <class T>
    bool is() const {
        return std::holds_alternative<T>(v_);
    }

    // Potential energy at q.
    double value(double q) const;

    // Barrier momentum sqrt(2 m V) of the step/barrier height; 0 otherwise.
    double barrier_momentum(double mass) const;

    // Interior breakpoints of V between q_from and q_to (kinks and jumps).
    std::vector<double> breakpoints(double q_from, double q_to) const;

    // True for potentials of finite spatial range (Free, Step is excluded;
    // the step extends to +infinity but has a sharp edge at 0).
    bool finite_range() const { return is<Free>() || is<SquareBarrier>(); }

    std::string kind_name() const;

  private:
    void validate() const;
    Variant v_;
};

}  // namespace toa
