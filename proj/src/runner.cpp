#include "toa/runner.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "toa/analysis.hpp"
#include "toa/classical.hpp"
#include "toa/engine.hpp"
#include "toa/output.hpp"
#include "toa/validate.hpp"

namespace toa {

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

ScenarioConfig apply_overrides(ScenarioConfig cfg, const RunOptions& opts) {
    if (opts.tol_override) cfg.rel_tol = *opts.tol_override;
    if (opts.grid_override) cfg.grid = *opts.grid_override;
    return cfg;
}

std::string peak_lines(const PeakReport& report) {
    std::ostringstream os;
    os << "peak_count = " << report.peaks.size() << "\n";
    for (std::size_t i = 0; i < report.peaks.size(); ++i) {
        os << "peak_" << i << " = t:" << format_double(report.peaks[i].t)
           << " height:" << format_double(report.peaks[i].height)
           << " half_width:" << format_double(report.peaks[i].half_width) << "\n";
    }
    return os.str();
}

}  // namespace

RunReport run_distribution(const ScenarioConfig& raw_cfg, const RunOptions& run_opts) {
    RunReport report;
    const ScenarioConfig cfg = apply_overrides(raw_cfg, run_opts);
    const GaussianPacket pk = cfg.packet();
    EngineOptions opts;
    opts.rel_tol = cfg.rel_tol;
    opts.allow_poor_quality = cfg.allow_poor_quality;

    for (std::size_t i = 0; i < cfg.detectors.size(); ++i) {
        const double x = cfg.detectors[i];
        std::ostringstream stem;
        stem << cfg.prefix << "_det" << i;
        try {
            ArrivalDistribution dist = arrival_distribution(x, pk, cfg.potential, cfg.grid, opts);
            std::ostringstream summary;
            summary << "x = " << format_double(x) << "\n";
            summary << "arrival_probability = " << format_double(dist.total_probability) << "\n";
            if (!dist.defined) {
                summary << "defined = false\n";
                summary << "note = no arrivals: P(x) below 1e-12, density undefined\n";
                const std::string spath = join_path(run_opts.out_dir, stem.str() + "_summary.txt");
                write_file_atomic(spath, summary.str());
                report.artifacts.push_back(spath);
                continue;
            }
            CsvTable table;
            table.header = {"t", "density", "density_tr", "density_ref", "density_int"};
            table.rows.reserve(dist.grid.n_points);
            for (int j = 0; j < dist.grid.n_points; ++j)
                table.rows.push_back({dist.grid.at(j), dist.density[j], dist.density_tr[j],
                                      dist.density_ref[j], dist.density_int[j]});
            const std::string cpath = join_path(run_opts.out_dir, stem.str() + ".csv");
            write_file_atomic(cpath, render_csv(table));
            report.artifacts.push_back(cpath);

            const PeakReport peaks = find_peaks(dist, dist.grid.t_min, dist.grid.t_max);
            summary << "defined = true\n";
            summary << "mean_moment = " << format_double(dist.mean) << "\n";
            summary << "mean_phase = "
                    << format_double(mean_toa_phase(x, pk, cfg.potential, opts)) << "\n";
            summary << "captured_fraction = " << format_double(dist.captured_fraction) << "\n";
            summary << "grid = " << format_double(dist.grid.t_min) << " "
                    << format_double(dist.grid.t_max) << " " << dist.grid.n_points << "\n";
            summary << peak_lines(peaks);
            const std::string spath = join_path(run_opts.out_dir, stem.str() + "_summary.txt");
            write_file_atomic(spath, summary.str());
            report.artifacts.push_back(spath);

            if (run_opts.svg) {
                std::vector<double> t(dist.grid.n_points);
                for (int j = 0; j < dist.grid.n_points; ++j) t[j] = dist.grid.at(j);
                std::vector<SvgSeries> series;
                series.push_back({"density", "#1f3b99", t, dist.density});
                series.push_back({"transmitted", "#0c7a33", t, dist.density_tr});
                series.push_back({"reflected", "#b41f1f", t, dist.density_ref});
                series.push_back({"interference", "#8a6d00", t, dist.density_int});
                const std::string vpath = join_path(run_opts.out_dir, stem.str() + ".svg");
                write_file_atomic(vpath, render_svg_plot("arrival-time density, " + stem.str(),
                                                         "t", "P(t,x)", series));
                report.artifacts.push_back(vpath);
            }
        } catch (const error& e) {
            report.exit_code = 1;
            report.messages.push_back(stem.str() + ": " + e.what());
        }
    }
    return report;
}

RunReport run_sweep(const ScenarioConfig& raw_cfg, const RunOptions& run_opts) {
    RunReport report;
    const ScenarioConfig cfg = apply_overrides(raw_cfg, run_opts);
    if (!cfg.sweep) {
        report.exit_code = 1;
        report.messages.push_back("sweep: scenario has no [sweep] section");
        return report;
    }
    const SquareBarrier* barrier = cfg.potential.get_if<SquareBarrier>();
    if (barrier == nullptr) {
        report.exit_code = 1;
        report.messages.push_back("sweep: potential must be a square barrier");
        return report;
    }
    const GaussianPacket pk = cfg.packet();
    EngineOptions opts;
    opts.rel_tol = cfg.rel_tol;
    opts.allow_poor_quality = cfg.allow_poor_quality;
    const double x = cfg.detectors.front();
    try {
        SweepResult sweep;
        if (cfg.sweep->parameter == "pV") {
            sweep = sweep_barrier_height(pk, barrier->width, x, cfg.sweep->lo, cfg.sweep->hi,
                                         cfg.sweep->count, opts);
        } else {
            const double pV = std::sqrt(2.0 * pk.mass * barrier->height);
            sweep = sweep_barrier_width(pk, pV, x, cfg.sweep->lo, cfg.sweep->hi,
                                        cfg.sweep->count, opts);
        }
        CsvTable table;
        table.header = {sweep.parameter, "mean_toa", "phase_time_p0", "hartman_time",
                        "arrival_probability"};
        table.note_header = "error";
        for (const SweepRow& row : sweep.rows) {
            table.rows.push_back({row.value, row.mean_toa, row.phase_time_p0, row.hartman,
                                  row.arrival_prob});
            table.notes.push_back(row.error);
        }
        const std::string cpath = join_path(run_opts.out_dir, cfg.prefix + "_sweep.csv");
        write_file_atomic(cpath, render_csv(table));
        report.artifacts.push_back(cpath);
        if (run_opts.svg) {
            std::vector<double> v, mean, phase, hart;
            for (const SweepRow& row : sweep.rows) {
                v.push_back(row.value);
                mean.push_back(row.mean_toa);
                phase.push_back(row.phase_time_p0);
                hart.push_back(row.hartman);
            }
            std::vector<SvgSeries> series{{"mean arrival time", "#1f3b99", v, mean},
                                          {"phase time at p0", "#b41f1f", v, phase},
                                          {"Hartman time", "#0c7a33", v, hart}};
            const std::string vpath = join_path(run_opts.out_dir, cfg.prefix + "_sweep.svg");
            write_file_atomic(vpath, render_svg_plot("mean arrival time sweep",
                                                     sweep.parameter, "time", series));
            report.artifacts.push_back(vpath);
        }
    } catch (const error& e) {
        report.exit_code = 1;
        report.messages.push_back(std::string("sweep: ") + e.what());
    }
    return report;
}

RunReport run_classical(const ScenarioConfig& raw_cfg, const RunOptions& run_opts) {
    RunReport report;
    const ScenarioConfig cfg = apply_overrides(raw_cfg, run_opts);
    const GaussianPacket pk = cfg.packet();
    CsvTable table;
    table.header = {"x", "toa_p0", "ensemble_mean"};
    table.note_header = "note";
    for (double x : cfg.detectors) {
        std::vector<double> row{x, std::nan(""), std::nan("")};
        std::string note;
        auto t = classical_toa(ClassicalState(pk.q0, pk.p0, pk.mass), x, cfg.potential);
        if (t)
            row[1] = *t;
        else
            note = "unreachable at p0";
        try {
            row[2] = classical_ensemble_mean(pk, x, cfg.potential);
        } catch (const error& e) {
            note = note.empty() ? e.what() : note + "; " + e.what();
        }
        table.rows.push_back(row);
        table.notes.push_back(note);
    }
    try {
        const std::string cpath = join_path(run_opts.out_dir, cfg.prefix + "_classical.csv");
        write_file_atomic(cpath, render_csv(table));
        report.artifacts.push_back(cpath);

        std::ostringstream summary;
        auto tp = turning_point(pk.mean_energy(), cfg.potential);
        summary << "mean_energy = " << format_double(pk.mean_energy()) << "\n";
        summary << "turning_point = " << (tp ? format_double(*tp) : std::string("none")) << "\n";
        const std::string spath = join_path(run_opts.out_dir, cfg.prefix + "_classical_summary.txt");
        write_file_atomic(spath, summary.str());
        report.artifacts.push_back(spath);
    } catch (const error& e) {
        report.exit_code = 1;
        report.messages.push_back(std::string("classical: ") + e.what());
    }
    return report;
}

RunReport run_validate(const std::optional<ScenarioConfig>& cfg) {
    RunReport report;
    std::vector<CheckResult> checks = run_invariant_suite();
    if (cfg) {
        std::vector<CheckResult> scenario = run_scenario_checks(*cfg);
        checks.insert(checks.end(), scenario.begin(), scenario.end());
    }
    for (const CheckResult& c : checks) {
        report.messages.push_back(std::string(c.pass ? "[PASS] " : "[FAIL] ") + c.name +
                                  " (" + c.detail + ")");
        if (!c.pass) report.exit_code = 1;
    }
    return report;
}

}  // namespace toa
