#include "toa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "toa/parallel.hpp"

namespace toa {

namespace {

SweepResult run_sweep(const GaussianPacket& packet, double x, const std::string& name,
                      double lo, double hi, int n, const EngineOptions& opts,
                      const std::function<PotentialSpec(double)>& make_spec,
                      const std::function<double(double)>& hartman_of) {
    if (n < 2) throw domain_error("sweep: need at least two rows");
    SweepResult sweep;
    sweep.parameter = name;
    sweep.x = x;
    sweep.t0 = packet.mass * (x - packet.q0) / packet.p0;
    sweep.rows.resize(n);
    EngineOptions row_opts = opts;
    row_opts.parallel = false;  // rows are the parallel unit
    parallel_for(n, [&](std::ptrdiff_t i) {
        SweepRow& row = sweep.rows[i];
        row.value = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        row.hartman = hartman_of(row.value);
        try {
            const PotentialSpec spec = make_spec(row.value);
            row.mean_toa = mean_toa_phase(x, packet, spec, row_opts);
            row.phase_time_p0 = wigner_phase_time(packet.p0, x, packet.q0, spec, packet.mass);
            row.arrival_prob = arrival_probability(x, packet, spec, row_opts);
        } catch (const error& e) {
            row.mean_toa = std::nan("");
            row.phase_time_p0 = std::nan("");
            row.arrival_prob = std::nan("");
            row.error = e.what();
        }
    });
    return sweep;
}

}  // namespace

SweepResult sweep_barrier_height(const GaussianPacket& packet, double width, double x,
                                 double pV_lo, double pV_hi, int n,
                                 const EngineOptions& opts) {
    const double m = packet.mass;
    auto make_spec = [width, m](double pV) {
        if (pV <= 0.0) return PotentialSpec::free();
        return PotentialSpec::square_barrier(0.5 * pV * pV / m, width);
    };
    const double t0 = packet.mass * (x - packet.q0) / packet.p0;
    auto hartman_of = [&](double) { return hartman_time(t0, width, packet.p0, m); };
    return run_sweep(packet, x, "pV", pV_lo, pV_hi, n, opts, make_spec, hartman_of);
}

SweepResult sweep_barrier_width(const GaussianPacket& packet, double pV, double x,
                                double a_lo, double a_hi, int n, const EngineOptions& opts) {
    const double m = packet.mass;
    const double height = 0.5 * pV * pV / m;
    auto make_spec = [height, m](double a) {
        if (a <= 0.0 || height <= 0.0) return PotentialSpec::free();
        return PotentialSpec::square_barrier(height, a);
    };
    const double t0 = packet.mass * (x - packet.q0) / packet.p0;
    auto hartman_of = [&](double a) { return hartman_time(t0, std::max(a, 0.0), packet.p0, m); };
    return run_sweep(packet, x, "a", a_lo, a_hi, n, opts, make_spec, hartman_of);
}

std::size_t largest_step_index(const SweepResult& sweep) {
    std::size_t best = 1;
    double largest = -1.0;
    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        const double a = sweep.rows[i - 1].mean_toa;
        const double b = sweep.rows[i].mean_toa;
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        const double step = std::abs(b - a);
        if (step > largest) {
            largest = step;
            best = i;
        }
    }
    return best;
}

PeakReport find_peaks(const ArrivalDistribution& dist, double t1, double t2,
                      double prominence) {
    PeakReport report;
    report.window_lo = t1;
    report.window_hi = t2;
    if (!dist.defined || dist.density.empty() || !(t2 > t1)) return report;

    const TimeGrid& grid = dist.grid;
    const int n = grid.n_points;
    int j_lo = static_cast<int>(std::ceil((t1 - grid.t_min) / grid.dt()));
    int j_hi = static_cast<int>(std::floor((t2 - grid.t_min) / grid.dt()));
    j_lo = std::clamp(j_lo, 0, n - 1);
    j_hi = std::clamp(j_hi, 0, n - 1);
    if (j_hi <= j_lo) return report;

    double dmax = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) dmax = std::max(dmax, dist.density[j]);
    if (dmax <= 0.0) return report;
    const double threshold = prominence * dmax;

    for (int j = std::max(1, j_lo); j <= std::min(n - 2, j_hi); ++j) {
        const double dm = dist.density[j - 1];
        const double d0 = dist.density[j];
        const double dp = dist.density[j + 1];
        if (!(d0 > dm && d0 >= dp)) continue;
        if (d0 < threshold) continue;
        Peak peak;
        const double curv = dm - 2.0 * d0 + dp;
        double shift = 0.0;
        if (curv < 0.0) shift = 0.5 * (dm - dp) / curv;
        peak.t = grid.at(j) + shift * grid.dt();
        peak.height = d0 - 0.25 * (dm - dp) * shift;
        // half width at half height by linear interpolation on each side
        const double half = 0.5 * peak.height;
        double left = grid.at(j_lo), right = grid.at(j_hi);
        for (int k = j; k > j_lo; --k) {
            if (dist.density[k - 1] <= half) {
                const double f = (dist.density[k] - half) /
                                 (dist.density[k] - dist.density[k - 1]);
                left = grid.at(k) - f * grid.dt();
                break;
            }
        }
        for (int k = j; k < j_hi; ++k) {
            if (dist.density[k + 1] <= half) {
                const double f = (dist.density[k] - half) /
                                 (dist.density[k] - dist.density[k + 1]);
                right = grid.at(k) + f * grid.dt();
                break;
            }
        }
        peak.half_width = 0.5 * (right - left);
        report.peaks.push_back(peak);
    }
    return report;
}

}  // namespace toa
