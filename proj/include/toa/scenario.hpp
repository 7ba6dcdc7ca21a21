#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toa/distribution.hpp"
#include "toa/packet.hpp"
#include "toa/potential.hpp"

namespace toa {

struct SweepSpec {
    std::string parameter;  // "pV" or "a"
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;

    bool operator==(const SweepSpec&) const = default;
};

// Declarative run description, parsed from the line-oriented
// `[section]` / `key = value` scenario format.
struct ScenarioConfig {
    double q0 = 0.0, p0 = 0.0, delta = 0.0, mass = 1.0;
    PotentialSpec potential;
    std::vector<double> detectors;
    std::optional<TimeGrid> grid;  // empty: automatic grid
    std::optional<SweepSpec> sweep;
    double rel_tol = 1e-9;
    bool allow_poor_quality = false;
    std::string prefix = "scenario";

    GaussianPacket packet() const { return GaussianPacket(q0, p0, delta, mass); }
    bool operator==(const ScenarioConfig& o) const;
};

struct ScenarioParse {
    std::optional<ScenarioConfig> config;     // set iff errors is empty
    std::vector<std::string> errors;          // all problems, with line numbers
    bool ok() const { return errors.empty(); }
};

ScenarioParse parse_scenario(const std::string& text);
ScenarioParse parse_scenario_file(const std::string& path);

// Canonical rendering; parse(render(config)) == config.
std::string render_scenario(const ScenarioConfig& config);

// Locale-independent shortest-faithful float formatting (17 significant digits).
std::string format_double(double v);

}  // namespace toa
