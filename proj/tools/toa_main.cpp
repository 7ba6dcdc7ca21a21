#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "toa/runner.hpp"
#include "toa/scenario.hpp"

namespace {

struct CommonArgs {
    std::string scenario_path;
    std::string out_dir = ".";
    bool svg = false;
    double tol = 0.0;
    std::string grid_spec;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool scenario_required) {
    auto* opt = cmd->add_option("--scenario", args.scenario_path, "scenario file path");
    if (scenario_required) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory (default: .)");
    cmd->add_flag("--svg", args.svg, "also render SVG line plots");
    cmd->add_option("--tol", args.tol, "override the quadrature relative tolerance");
    cmd->add_option("--grid", args.grid_spec, "explicit time grid: t_min,t_max,n");
}

int finish(const toa::RunReport& report) {
    for (const std::string& line : report.messages) std::fprintf(stderr, "%s\n", line.c_str());
    for (const std::string& path : report.artifacts) std::printf("wrote %s\n", path.c_str());
    return report.exit_code;
}

std::optional<toa::ScenarioConfig> load(const std::string& path, int& rc) {
    toa::ScenarioParse parsed = toa::parse_scenario_file(path);
    if (!parsed.ok()) {
        std::fprintf(stderr, "scenario errors in %s:\n", path.c_str());
        for (const std::string& e : parsed.errors) std::fprintf(stderr, "  %s\n", e.c_str());
        rc = 2;
        return std::nullopt;
    }
    return parsed.config;
}

toa::RunOptions make_run_options(const CommonArgs& args, int& rc) {
    toa::RunOptions opts;
    opts.out_dir = args.out_dir;
    opts.svg = args.svg;
    if (args.tol > 0.0) opts.tol_override = args.tol;
    if (!args.grid_spec.empty()) {
        double tmin = 0.0, tmax = 0.0;
        int n = 0;
        if (std::sscanf(args.grid_spec.c_str(), "%lf,%lf,%d", &tmin, &tmax, &n) == 3 &&
            tmin < tmax && n >= 16) {
            opts.grid_override = toa::TimeGrid(tmin, tmax, n);
        } else {
            std::fprintf(stderr, "--grid expects t_min,t_max,n with t_min < t_max, n >= 16\n");
            rc = 2;
        }
    }
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-of-arrival distributions for 1-D wave packets"};
    app.require_subcommand(1);

    CommonArgs dist_args, sweep_args, classical_args, validate_args;
    CLI::App* dist = app.add_subcommand("distribution", "arrival-time densities per detector");
    add_common(dist, dist_args, true);
    CLI::App* sweep = app.add_subcommand("sweep", "mean arrival time over a barrier sweep");
    add_common(sweep, sweep_args, true);
    CLI::App* classical = app.add_subcommand("classical", "classical arrival-time tables");
    add_common(classical, classical_args, true);
    CLI::App* validate = app.add_subcommand("validate", "run the invariant suites");
    add_common(validate, validate_args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        int rc = 0;
        if (dist->parsed()) {
            auto cfg = load(dist_args.scenario_path, rc);
            if (!cfg) return rc;
            toa::RunOptions opts = make_run_options(dist_args, rc);
            if (rc != 0) return rc;
            return finish(toa::run_distribution(*cfg, opts));
        }
        if (sweep->parsed()) {
            auto cfg = load(sweep_args.scenario_path, rc);
            if (!cfg) return rc;
            toa::RunOptions opts = make_run_options(sweep_args, rc);
            if (rc != 0) return rc;
            return finish(toa::run_sweep(*cfg, opts));
        }
        if (classical->parsed()) {
            auto cfg = load(classical_args.scenario_path, rc);
            if (!cfg) return rc;
            toa::RunOptions opts = make_run_options(classical_args, rc);
            if (rc != 0) return rc;
            return finish(toa::run_classical(*cfg, opts));
        }
        if (validate->parsed()) {
            std::optional<toa::ScenarioConfig> cfg;
            if (!validate_args.scenario_path.empty()) {
                cfg = load(validate_args.scenario_path, rc);
                if (rc != 0) return rc;
            }
            return finish(toa::run_validate(cfg));
        }
    } catch (const toa::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
