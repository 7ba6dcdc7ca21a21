#include "toa/engine.hpp"

#include <algorithm>
#include <cmath>

#include "kernels.hpp"
#include "toa/classical.hpp"
#include "toa/parallel.hpp"
#include "toa/quadrature.hpp"
#include "toa/scattering.hpp"
#include "toa/wkb.hpp"

namespace toa {

namespace {

constexpr double kUndefinedProbability = 1e-12;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

struct Context {
    const GaussianPacket& packet;
    const PotentialSpec& spec;
    EngineOptions opts;
    bool wkb = false;  // serve the eigenstates through the quasi-classical module

    double mass() const { return packet.mass; }
};

WaveParts waves_at(const Context& ctx, double p, double x) {
    if (ctx.wkb) return wkb_reduced_waves(ctx.spec, ctx.mass(), p, x);
    return reduced_waves(ctx.spec, ctx.mass(), p, x);
}

struct Window {
    double lo = 0.0, hi = 0.0;
    double pV = 0.0;
    bool split = false;     // pV strictly inside the window
    bool sqrt_map = false;  // absorb the sqrt branch point (step potential)
    double energy_span(double mass) const {
        return 0.5 * (hi * hi - lo * lo) / mass;
    }
};

// Momentum window [max(p_floor, p0-8 sp), p0+8 sp].  When the barrier
// momentum lies above the upper edge but the over-barrier tail is still
// representable in double precision, the window is extended past pV: that
// tail carries the retarded components which control the crossover away
// from the Hartman regime.
Window momentum_window(const GaussianPacket& packet, const PotentialSpec& spec) {
    const double sp = packet.sigma_p();
    Window w;
    w.lo = std::max(1e-6 * packet.p0, packet.p0 - 8.0 * sp);
    w.hi = packet.p0 + 8.0 * sp;
    w.pV = spec.barrier_momentum(packet.mass);
    w.sqrt_map = spec.is<Step>();
    if ((spec.is<Step>() || spec.is<SquareBarrier>()) && w.pV > 0.0) {
        if (w.pV >= w.hi && w.pV < packet.p0 + 24.0 * sp) w.hi = w.pV + 8.0 * sp;
    }
    w.split = (w.pV > w.lo && w.pV < w.hi);
    return w;
}

// Oscillation budget of the momentum integrands, in radians.
double phase_budget(const Window& w, const Context& ctx, double x, double time_extent) {
    const double dp = w.hi - w.lo;
    double budget = w.energy_span(ctx.mass()) * std::abs(time_extent);
    budget += dp * (std::abs(x) + std::abs(ctx.packet.q0));
    if (const SquareBarrier* b = ctx.spec.get_if<SquareBarrier>()) {
        budget += w.hi * b->width;                      // interior oscillation
        budget += 0.25 * w.pV * b->width;               // tunneling decay scale
    }
    if (const LinearRamp* r = ctx.spec.get_if<LinearRamp>()) {
        // phase shift varies like the classical action p^3/(3 m f)
        budget += w.hi * w.hi * w.hi / (3.0 * ctx.mass() * r->force);
    } else if (ctx.spec.is<SampledSmooth>()) {
        budget += w.hi * w.hi * w.hi / (3.0 * ctx.mass());
    }
    return budget;
}

std::vector<Segment> build_segments(const Window& w, double budget) {
    const int total_seed = std::clamp(static_cast<int>(std::ceil(budget / (0.5 * M_PI))), 8, 8192);
    std::vector<Segment> segs;
    auto add = [&](double lo, double hi, Segment::Map map, double pivot) {
        if (!(hi > lo)) return;
        Segment s;
        s.lo = lo;
        s.hi = hi;
        s.map = map;
        s.pivot = pivot;
        segs.push_back(s);
    };
    if (w.split && w.sqrt_map) {
        add(0.0, std::sqrt(w.pV * w.pV - w.lo * w.lo), Segment::Map::sqrt_below, w.pV);
        add(0.0, std::sqrt(w.hi * w.hi - w.pV * w.pV), Segment::Map::sqrt_above, w.pV);
    } else if (w.split) {
        add(w.lo, w.pV, Segment::Map::identity, 0.0);
        add(w.pV, w.hi, Segment::Map::identity, 0.0);
    } else {
        add(w.lo, w.hi, Segment::Map::identity, 0.0);
    }
    double width_sum = 0.0;
    for (const Segment& s : segs) width_sum += s.hi - s.lo;
    for (Segment& s : segs)
        s.seed_panels = std::max(2, static_cast<int>(std::ceil(total_seed * (s.hi - s.lo) /
                                                               width_sum)));
    return segs;
}

struct NodeData {
    std::vector<double> p, wq, E;
    std::vector<cplx> psi;       // right-channel state weight
    std::vector<cplx> psi_left;  // left-channel state weight (two-channel runs)
    bool two_channel = false;
    std::size_t size() const { return p.size(); }
};

NodeData make_nodes(const Context& ctx, const std::vector<Segment>& segs, int level,
                    bool two_channel) {
    PointSet ps = sample_segments(segs, level);
    NodeData nd;
    nd.two_channel = two_channel;
    const std::size_t n = ps.size();
    nd.p = std::move(ps.p);
    nd.wq = std::move(ps.w);
    nd.E.resize(n);
    nd.psi.resize(n);
    if (two_channel) nd.psi_left.resize(n);
    const double m = ctx.mass();
    for (std::size_t i = 0; i < n; ++i) {
        const double p = nd.p[i];
        nd.E[i] = 0.5 * p * p / m;
        nd.psi[i] = ctx.packet.momentum_amplitude(p);
        if (two_channel) {
            cplx T(1.0, 0.0), R(0.0, 0.0);
            if (const SquareBarrier* b = ctx.spec.get_if<SquareBarrier>()) {
                ScatteringSolution sol = barrier_solution(p, *b, m);
                T = sol.T;
                R = sol.R;
            }
            const cplx mirror = ctx.packet.momentum_amplitude(-p);
            nd.psi[i] += std::conj(R) * mirror;
            nd.psi_left[i] = std::conj(T) * mirror;
        }
    }
    return nd;
}

struct WaveTable {
    std::vector<cplx> g, gtr, gref, dg, gl;
};

WaveTable make_waves(const Context& ctx, const NodeData& nd, double x) {
    WaveTable wt;
    const std::size_t n = nd.size();
    wt.g.resize(n);
    wt.gtr.resize(n);
    wt.gref.resize(n);
    wt.dg.resize(n);
    if (nd.two_channel) wt.gl.resize(n);
    auto body = [&](std::ptrdiff_t i) {
        const WaveParts wp = waves_at(ctx, nd.p[i], x);
        wt.g[i] = wp.total();
        wt.gtr[i] = wp.transmitted;
        wt.gref[i] = wp.reflected;
        wt.dg[i] = wp.d_dp;
        if (nd.two_channel)
            wt.gl[i] = reduced_waves_left(ctx.spec, ctx.mass(), nd.p[i], x).total();
    };
    if (ctx.opts.parallel)
        parallel_for(static_cast<std::ptrdiff_t>(n), body);
    else
        for (std::size_t i = 0; i < n; ++i) body(static_cast<std::ptrdiff_t>(i));
    return wt;
}

struct Moments {
    double prob = 0.0;       // P(x)
    double moment = 0.0;     // numerator of the phase-route mean
    double p_tr = 0.0;       // transmitted (positive-current) probability
    double p_ref = 0.0;      // reflected probability
    double interf = 0.0;     // interference term
    double amp_scale = 0.0;  // sum |c_i|, scale for amplitude floors
};

Moments compute_moments(const Context& ctx, const NodeData& nd, const WaveTable& wt) {
    KahanAccumulator prob, moment, ptr_, pref, interf, scale;
    const double m = ctx.mass();
    const double q0 = ctx.packet.q0;
    for (std::size_t i = 0; i < nd.size(); ++i) {
        const double w = nd.wq[i];
        const double pd = std::norm(nd.psi[i]);
        const double gg = std::norm(wt.g[i]);
        double dprob = w * pd * gg;
        if (nd.two_channel) dprob += w * std::norm(nd.psi_left[i]) * std::norm(wt.gl[i]);
        prob.add(dprob);
        const double im = std::imag(std::conj(wt.g[i]) * wt.dg[i]);
        moment.add(w * pd * (m / nd.p[i]) * (im - q0 * gg));
        ptr_.add(w * pd * std::norm(wt.gtr[i]));
        pref.add(w * pd * std::norm(wt.gref[i]));
        interf.add(2.0 * w * pd * std::real(wt.gtr[i] * std::conj(wt.gref[i])));
        scale.add(w * std::abs(nd.psi[i]) * std::abs(wt.g[i]) * std::sqrt(nd.p[i] / m));
    }
    Moments out;
    out.prob = prob.value();
    out.moment = moment.value();
    out.p_tr = ptr_.value();
    out.p_ref = pref.value();
    out.interf = interf.value();
    out.amp_scale = scale.value();
    return out;
}

std::vector<cplx> amplitude_weights(const Context& ctx, const NodeData& nd,
                                    const std::vector<cplx>& g) {
    const double m = ctx.mass();
    std::vector<cplx> c(nd.size());
    for (std::size_t i = 0; i < nd.size(); ++i)
        c[i] = kInvSqrt2Pi * nd.wq[i] * std::sqrt(nd.p[i] / m) * g[i] * nd.psi[i];
    return c;
}

std::vector<cplx> left_amplitude_weights(const Context& ctx, const NodeData& nd,
                                         const WaveTable& wt) {
    const double m = ctx.mass();
    std::vector<cplx> c(nd.size());
    for (std::size_t i = 0; i < nd.size(); ++i)
        c[i] = kInvSqrt2Pi * nd.wq[i] * std::sqrt(nd.p[i] / m) * wt.gl[i] * nd.psi_left[i];
    return c;
}

cplx probe_amplitude(const NodeData& nd, const std::vector<cplx>& c, double t) {
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < nd.size(); ++i)
        acc += c[i] * std::polar(1.0, -nd.E[i] * t);
    return acc;
}

struct Frozen {
    NodeData nodes;
    WaveTable waves;
    Moments mom;
    int level = 0;
    double budget_extent = 0.0;
};

// Doubles the panel count until P(x), the phase moment, the decomposition and
// the probe amplitudes are all stable to the requested relative tolerance.
Frozen converge(const Context& ctx, double x, double time_extent,
                const std::vector<double>& probe_times) {
    if (!ctx.packet.quality_ok() && !ctx.opts.allow_poor_quality && !ctx.wkb)
        throw domain_error(
            "engine: packet quality flag is set; pass allow_poor_quality to override");

    const bool two_channel = !ctx.packet.quality_ok() &&
                             (ctx.spec.is<Free>() || ctx.spec.is<SquareBarrier>());
    if (ctx.wkb) wkb_require_window(x, ctx.packet, ctx.spec);

    const Window w = momentum_window(ctx.packet, ctx.spec);
    const double budget = phase_budget(w, ctx, x, time_extent);
    const std::vector<Segment> segs = build_segments(w, budget);

    const double tol = ctx.opts.rel_tol;
    const double tscale = (ctx.mass() / ctx.packet.p0) *
                              (std::abs(x - ctx.packet.q0) + std::abs(x) + 1.0) +
                          std::abs(time_extent);

    Frozen prev;
    bool have_prev = false;
    std::vector<cplx> prev_probes;
    for (int level = 0; level <= 6; ++level) {
        Frozen cur;
        cur.level = level;
        cur.budget_extent = time_extent;
        cur.nodes = make_nodes(ctx, segs, level, two_channel);
        if (cur.nodes.size() > (1u << 20))
            throw accuracy_error("engine: momentum quadrature grew past the node cap", 0.0);
        cur.waves = make_waves(ctx, cur.nodes, x);
        cur.mom = compute_moments(ctx, cur.nodes, cur.waves);
        std::vector<cplx> probes;
        if (!probe_times.empty()) {
            const std::vector<cplx> c = amplitude_weights(ctx, cur.nodes, cur.waves.g);
            probes.reserve(probe_times.size());
            for (double t : probe_times) probes.push_back(probe_amplitude(cur.nodes, c, t));
        }
        if (have_prev) {
            const Moments& a = prev.mom;
            const Moments& b = cur.mom;
            const double pfloor = 1e-320;
            bool ok = std::abs(b.prob - a.prob) <= tol * std::max({std::abs(b.prob),
                                                                   std::abs(a.prob), pfloor});
            ok = ok && std::abs(b.moment - a.moment) <=
                           tol * std::max(std::abs(b.moment), std::abs(a.moment)) +
                               tol * b.prob * tscale;
            const double dfloor = tol * (std::abs(b.p_tr) + std::abs(b.p_ref) + b.prob);
            ok = ok && std::abs(b.p_tr - a.p_tr) <= dfloor + tol * std::abs(b.p_tr);
            ok = ok && std::abs(b.p_ref - a.p_ref) <= dfloor + tol * std::abs(b.p_ref);
            ok = ok && std::abs(b.interf - a.interf) <= dfloor + tol * std::abs(b.interf);
            for (std::size_t k = 0; ok && k < probes.size(); ++k)
                ok = std::abs(probes[k] - prev_probes[k]) <=
                     tol * std::max(std::abs(probes[k]), 1e-3 * b.amp_scale);
            if (ok) return cur;
        }
        prev = std::move(cur);
        prev_probes = std::move(probes);
        have_prev = true;
    }
    throw accuracy_error("engine: momentum quadrature did not converge", 0.0);
}

std::vector<double> spread_probes(double lo, double hi, int count) {
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i) t[i] = lo + (hi - lo) * i / (count - 1);
    return t;
}

double trapezoid(const std::vector<double>& y, double dt) {
    KahanAccumulator acc;
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double w = (j == 0 || j + 1 == y.size()) ? 0.5 : 1.0;
        acc.add(w * y[j] * dt);
    }
    return acc.value();
}

struct Maps {
    std::vector<cplx> a, a_tr, a_ref, a_left;
};

void run_map(const Context& ctx, const NodeData& nd, const std::vector<cplx>& c,
             const TimeGrid& grid, std::vector<cplx>& out) {
    detail::time_map_blocked(nd.E, c, grid, out, ctx.opts.parallel);
}

// Uniform-grid Fourier evaluation of the time map (optional fast path):
// Simpson resampling of the energy integrand, one FFT, cubic interpolation
// onto the requested grid.  Agrees with the reference kernel to ~1e-6.
std::vector<cplx> fft_time_map(const Context& ctx, double x, const Window& w,
                               const TimeGrid& grid, int component) {
    const double m = ctx.mass();
    const double e_lo = 0.5 * w.lo * w.lo / m;
    const double e_hi = 0.5 * w.hi * w.hi / m;
    const double span = e_hi - e_lo;
    const double t_abs = std::max(std::abs(grid.t_min), std::abs(grid.t_max));
    std::size_t n_samples = static_cast<std::size_t>(std::ceil(span * std::max(t_abs, 1.0) /
                                                               0.08)) |
                            1u;
    n_samples = std::max<std::size_t>(n_samples, 513);
    const double de = span / static_cast<double>(n_samples - 1);

    std::vector<cplx> h(n_samples);
    auto body = [&](std::ptrdiff_t k) {
        const double E = e_lo + de * static_cast<double>(k);
        const double p = std::sqrt(2.0 * m * E);
        const WaveParts wp = waves_at(ctx, p, x);
        const cplx g = component == 0 ? wp.total() : (component == 1 ? wp.transmitted
                                                                     : wp.reflected);
        double simpson = (k == 0 || k + 1 == static_cast<std::ptrdiff_t>(n_samples))
                             ? 1.0
                             : (k % 2 == 1 ? 4.0 : 2.0);
        h[k] = kInvSqrt2Pi * (de * simpson / 3.0) * std::sqrt(m / p) * g *
               ctx.packet.momentum_amplitude(p);
    };
    if (ctx.opts.parallel)
        parallel_for(static_cast<std::ptrdiff_t>(n_samples), body);
    else
        for (std::size_t k = 0; k < n_samples; ++k) body(static_cast<std::ptrdiff_t>(k));

    std::size_t nfft = 1;
    while (nfft < 64 * n_samples) nfft <<= 1;  // dense comb so the cubic interpolant holds 1e-6
    const double t_comb = 2.0 * M_PI / (nfft * de);  // comb spacing
    // Comb must cover the grid after shifting by multiples of the period.
    std::vector<cplx> a(nfft, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n_samples; ++k) a[k] = h[k];
    detail::fft_pow2(a, -1);
    // a[j] = sum_k h_k exp(-2 pi i j k / nfft) = A_rel(t_j) with
    // t_j = j * t_comb relative to the e_lo phase reference.
    auto comb_value = [&](double t) -> cplx {
        double tr = std::fmod(t, nfft * t_comb);
        if (tr < 0.0) tr += nfft * t_comb;
        const double jr = tr / t_comb;
        const std::size_t j1 = static_cast<std::size_t>(jr) % nfft;
        const std::size_t j0 = (j1 + nfft - 1) % nfft;
        const std::size_t j2 = (j1 + 1) % nfft;
        const std::size_t j3 = (j1 + 2) % nfft;
        const double s = jr - std::floor(jr);
        // Catmull-Rom in the two quadrature components.
        auto cr = [s](double y0, double y1, double y2, double y3) {
            return y1 + 0.5 * s * (y2 - y0 +
                                   s * (2.0 * y0 - 5.0 * y1 + 4.0 * y2 - y3 +
                                        s * (3.0 * (y1 - y2) + y3 - y0)));
        };
        return {cr(a[j0].real(), a[j1].real(), a[j2].real(), a[j3].real()),
                cr(a[j0].imag(), a[j1].imag(), a[j2].imag(), a[j3].imag())};
    };
    std::vector<cplx> out(grid.n_points);
    for (int j = 0; j < grid.n_points; ++j) {
        const double t = grid.at(j);
        out[j] = comb_value(t) * std::polar(1.0, -e_lo * t);
    }
    return out;
}

Maps build_maps(const Context& ctx, const Frozen& f, double x, const TimeGrid& grid) {
    Maps maps;
    if (ctx.opts.use_fft) {
        const Window w = momentum_window(ctx.packet, ctx.spec);
        maps.a = fft_time_map(ctx, x, w, grid, 0);
        maps.a_tr = fft_time_map(ctx, x, w, grid, 1);
        maps.a_ref = fft_time_map(ctx, x, w, grid, 2);
    } else {
        run_map(ctx, f.nodes, amplitude_weights(ctx, f.nodes, f.waves.g), grid, maps.a);
        run_map(ctx, f.nodes, amplitude_weights(ctx, f.nodes, f.waves.gtr), grid, maps.a_tr);
        run_map(ctx, f.nodes, amplitude_weights(ctx, f.nodes, f.waves.gref), grid, maps.a_ref);
    }
    if (f.nodes.two_channel)
        run_map(ctx, f.nodes, left_amplitude_weights(ctx, f.nodes, f.waves), grid, maps.a_left);
    return maps;
}

ArrivalDistribution assemble(const Context& ctx, const Frozen& f, double x,
                             const TimeGrid& grid) {
    const Maps maps = build_maps(ctx, f, x, grid);
    const double P = f.mom.prob;
    ArrivalDistribution dist;
    dist.x = x;
    dist.grid = grid;
    dist.total_probability = P;
    const int n = grid.n_points;
    dist.density.resize(n);
    dist.density_tr.resize(n);
    dist.density_ref.resize(n);
    dist.density_int.resize(n);
    for (int j = 0; j < n; ++j) {
        double d = std::norm(maps.a[j]);
        if (!maps.a_left.empty()) d += std::norm(maps.a_left[j]);
        dist.density[j] = d / P;
        dist.density_tr[j] = std::norm(maps.a_tr[j]) / P;
        dist.density_ref[j] = std::norm(maps.a_ref[j]) / P;
        dist.density_int[j] = 2.0 * std::real(maps.a_tr[j] * std::conj(maps.a_ref[j])) / P;
    }
    dist.captured_fraction = trapezoid(dist.density, grid.dt());
    std::vector<double> tmoment(n);
    for (int j = 0; j < n; ++j) tmoment[j] = grid.at(j) * dist.density[j];
    dist.mean = trapezoid(tmoment, grid.dt()) / dist.captured_fraction;
    return dist;
}

TimeGrid initial_grid(const Context& ctx, const Frozen& f, double x) {
    const GaussianPacket& pk = ctx.packet;
    const double m = pk.mass;
    std::vector<double> centers;
    if (f.mom.prob > 0.0 && std::isfinite(f.mom.moment))
        centers.push_back(f.mom.moment / f.mom.prob);
    centers.push_back(m * (x - pk.q0) / pk.p0);
    if (const LinearRamp* r = ctx.spec.get_if<LinearRamp>(); r != nullptr && !ctx.wkb) {
        auto [ti, tr] = incident_reflected_times(x, pk.mean_energy(), pk, *r);
        centers.push_back(ti);
        centers.push_back(tr);
    } else if (x < 0.0 && f.mom.p_ref > 1e-9 * f.mom.prob) {
        centers.push_back(m * (-x - pk.q0) / pk.p0);
    }
    const double sigma_t0 = 2.0 * m * pk.delta / pk.p0;
    double t_far = 0.0;
    for (double c : centers) t_far = std::max(t_far, std::abs(c));
    const double sigma_t = std::hypot(sigma_t0, t_far * pk.sigma_p() / pk.p0);
    double lo = *std::min_element(centers.begin(), centers.end()) - 8.0 * sigma_t;
    double hi = *std::max_element(centers.begin(), centers.end()) + 8.0 * sigma_t;
    const Window w = momentum_window(pk, ctx.spec);
    const double dt = std::min(sigma_t0 / 8.0, M_PI / (6.0 * w.energy_span(m)));
    int n = static_cast<int>(std::ceil((hi - lo) / dt)) + 1;
    n = std::clamp(n, 16, 1 << 17);
    return TimeGrid(lo, hi, n);
}

ArrivalDistribution distribution_impl(const Context& ctx, double x,
                                      std::optional<TimeGrid> grid_opt) {
    Frozen scalars = converge(ctx, x, 0.0, {});
    ArrivalDistribution dist;
    if (!(scalars.mom.prob > kUndefinedProbability)) {
        dist.x = x;
        dist.defined = false;
        dist.total_probability = scalars.mom.prob;
        dist.grid = grid_opt.value_or(TimeGrid(0.0, 1.0, 16));
        dist.density_tr.clear();
        dist.density_ref.clear();
        dist.density_int.clear();
        return dist;
    }

    const bool auto_grid = !grid_opt.has_value();
    TimeGrid grid = grid_opt.value_or(TimeGrid(0.0, 1.0, 16));
    if (auto_grid) grid = initial_grid(ctx, scalars, x);

    double extent = std::max(std::abs(grid.t_min), std::abs(grid.t_max));
    Frozen f = converge(ctx, x, extent, spread_probes(grid.t_min, grid.t_max, 9));
    dist = assemble(ctx, f, x, grid);

    const double tail_target = std::max(3e-9, 3.0 * ctx.opts.rel_tol);
    if (auto_grid) {
        for (int iter = 0; iter < 16; ++iter) {
            const double tail = 1.0 - dist.captured_fraction;
            if (tail <= tail_target) break;
            const double span = grid.t_max - grid.t_min;
            const double dt = grid.dt();
            const double edge_lo = dist.density.front();
            const double edge_hi = dist.density.back();
            double lo = grid.t_min, hi = grid.t_max;
            if (edge_lo >= 0.25 * edge_hi) lo -= 0.5 * span;
            if (edge_hi >= 0.25 * edge_lo) hi += 0.5 * span;
            const int n = std::clamp(static_cast<int>(std::ceil((hi - lo) / dt)) + 1, 16,
                                     1 << 17);
            grid = TimeGrid(lo, hi, n);
            const double new_extent = std::max(std::abs(lo), std::abs(hi));
            if (new_extent > 1.25 * f.budget_extent) {
                extent = new_extent;
                f = converge(ctx, x, extent, spread_probes(lo, hi, 9));
            }
            const double prev_tail = tail;
            dist = assemble(ctx, f, x, grid);
            if (1.0 - dist.captured_fraction > 0.9 * prev_tail) break;  // tolerance floor
        }
    }
    return dist;
}

}  // namespace

cplx arrival_amplitude(double t, double x, const GaussianPacket& packet,
                       const PotentialSpec& spec, const EngineOptions& opts) {
    Context ctx{packet, spec, opts, spec.is<SampledSmooth>()};
    Frozen f = converge(ctx, x, std::abs(t), {t});
    const std::vector<cplx> c = amplitude_weights(ctx, f.nodes, f.waves.g);
    return probe_amplitude(f.nodes, c, t);
}

ArrivalDistribution arrival_distribution(double x, const GaussianPacket& packet,
                                         const PotentialSpec& spec,
                                         std::optional<TimeGrid> grid,
                                         const EngineOptions& opts) {
    Context ctx{packet, spec, opts, spec.is<SampledSmooth>()};
    return distribution_impl(ctx, x, grid);
}

double arrival_probability(double x, const GaussianPacket& packet, const PotentialSpec& spec,
                           const EngineOptions& opts) {
    Context ctx{packet, spec, opts, spec.is<SampledSmooth>()};
    return converge(ctx, x, 0.0, {}).mom.prob;
}

double mean_toa_moment(const ArrivalDistribution& dist) {
    if (!dist.defined) throw domain_error("mean_toa_moment: distribution is undefined");
    if (!(dist.captured_fraction >= 1.0 - 1e-6))
        throw grid_error("mean_toa_moment: grid misses more than 1e-6 of the arrival mass");
    return dist.mean;
}

double mean_toa_phase(double x, const GaussianPacket& packet, const PotentialSpec& spec,
                      const EngineOptions& opts) {
    Context ctx{packet, spec, opts, spec.is<SampledSmooth>()};
    const Moments mom = converge(ctx, x, 0.0, {}).mom;
    if (!(mom.prob > 0.0))
        throw accuracy_error("mean_toa_phase: vanishing arrival probability", 0.0);
    return mom.moment / mom.prob;
}

ReflectionDecomposition decompose_reflection(double x, const GaussianPacket& packet,
                                             const PotentialSpec& spec,
                                             const EngineOptions& opts) {
    Context ctx{packet, spec, opts, spec.is<SampledSmooth>()};
    const Moments mom = converge(ctx, x, 0.0, {}).mom;
    return {mom.p_tr, mom.p_ref, mom.interf};
}

std::pair<double, double> incident_reflected_times(double x, double energy,
                                                   const GaussianPacket& packet,
                                                   const LinearRamp& ramp) {
    const double m = packet.mass;
    const double p = std::sqrt(2.0 * m * energy);
    const double dphi = ramp_phase_energy_derivative(x, energy, ramp.force, m);
    const double ddelta = phase_shift_energy_derivative(energy, ramp.force, m);
    const double dpsi_arg = -ddelta - packet.q0 * m / p;
    return {dphi + dpsi_arg, -dphi + dpsi_arg};
}

TotalReflectionSplit split_mean_toa_total_reflection(double x, const GaussianPacket& packet,
                                                     const LinearRamp& ramp,
                                                     const EngineOptions& opts) {
    PotentialSpec spec = PotentialSpec::linear_ramp(ramp.force);
    Context ctx{packet, spec, opts, false};
    const Frozen f = converge(ctx, x, 0.0, {});
    KahanAccumulator wsum, ti_sum, tr_sum;
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        const double w = f.nodes.wq[i] * std::norm(f.nodes.psi[i]) * std::norm(f.waves.g[i]);
        auto [ti, tr] = incident_reflected_times(x, f.nodes.E[i], packet, ramp);
        wsum.add(w);
        ti_sum.add(w * ti);
        tr_sum.add(w * tr);
    }
    TotalReflectionSplit out;
    out.mean_incident = ti_sum.value() / wsum.value();
    out.mean_reflected = tr_sum.value() / wsum.value();
    out.distribution = distribution_impl(ctx, x, std::nullopt);
    return out;
}

double wigner_phase_time(double p, double x, double q0, const PotentialSpec& spec,
                         double mass) {
    if (!(p > 0.0)) throw domain_error("wigner_phase_time: momentum must be > 0");
    const double darg = transmission_phase_derivative(spec, mass, p);
    return (mass / p) * (x - q0 + darg);
}

double hartman_time(double t0, double a, double p0, double mass) {
    if (!(p0 > 0.0)) throw domain_error("hartman_time: p0 must be > 0");
    return t0 - mass * a / p0;
}

// Quasi-classical arrival distribution: same plumbing, eigenstates served by
// the wkb module (declared in wkb.hpp).
ArrivalDistribution wkb_arrival(double x, const GaussianPacket& packet,
                                const PotentialSpec& spec) {
    EngineOptions opts;
    Context ctx{packet, spec, opts, true};
    wkb_require_window(x, packet, spec);
    ArrivalDistribution dist = distribution_impl(ctx, x, std::nullopt);
    // reflection-free construction: drop the trivial decomposition
    dist.density_tr.clear();
    dist.density_ref.clear();
    dist.density_int.clear();
    return dist;
}

}  // namespace toa
