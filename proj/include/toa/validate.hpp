#pragma once

#include <string>
#include <vector>

#include "toa/scenario.hpp"

namespace toa {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Module invariants that hold on any build: packet normalization and Fourier
// pairing, Airy ODE residuals, scattering unitarity, the closed-form barrier
// transmission against interface matching, the two classical time routes, and
// the free-particle baseline.
std::vector<CheckResult> run_invariant_suite();

// Scenario-specific invariants: density normalization, moment-route versus
// phase-route means, reflection decomposition closure.
std::vector<CheckResult> run_scenario_checks(const ScenarioConfig& config);

}  // namespace toa
