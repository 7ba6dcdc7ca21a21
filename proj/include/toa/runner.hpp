#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toa/scenario.hpp"

namespace toa {

struct RunReport {
    int exit_code = 0;
    std::vector<std::string> artifacts;  // files written
    std::vector<std::string> messages;   // human-readable log lines
};

struct RunOptions {
    std::string out_dir = ".";
    bool svg = false;
    std::optional<double> tol_override;
    std::optional<TimeGrid> grid_override;
};

RunReport run_distribution(const ScenarioConfig& cfg, const RunOptions& opts);
RunReport run_sweep(const ScenarioConfig& cfg, const RunOptions& opts);
RunReport run_classical(const ScenarioConfig& cfg, const RunOptions& opts);
// config may be absent: then only the module invariant suite runs.
RunReport run_validate(const std::optional<ScenarioConfig>& cfg);

}  // namespace toa
