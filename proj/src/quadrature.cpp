#include "toa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "toa/errors.hpp"

namespace toa {

namespace {

GaussRule make_rule(int n) {
    GaussRule r;
    r.node.resize(n);
    r.weight.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        r.node[i] = -z;
        r.node[n - 1 - i] = z;
        r.weight[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weight[n - 1 - i] = r.weight[i];
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    static std::mutex mtx;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
    return it->second;
}

double stable_sum(const std::vector<double>& terms) {
    KahanAccumulator acc;
    for (double t : terms) acc.add(t);
    return acc.value();
}

PointSet sample_segments(const std::vector<Segment>& segments, int level, int order) {
    const GaussRule& rule = gauss_legendre(order);
    PointSet out;
    std::size_t total = 0;
    for (const Segment& s : segments)
        total += static_cast<std::size_t>(std::max(1, s.seed_panels) << level) * order;
    out.p.reserve(total);
    out.w.reserve(total);
    for (const Segment& s : segments) {
        const int panels = std::max(1, s.seed_panels) << level;
        const double h = (s.hi - s.lo) / panels;
        for (int k = 0; k < panels; ++k) {
            const double a = s.lo + k * h;
            for (int j = 0; j < order; ++j) {
                const double u = a + 0.5 * h * (rule.node[j] + 1.0);
                const double wu = 0.5 * h * rule.weight[j];
                switch (s.map) {
                    case Segment::Map::identity:
                        out.p.push_back(u);
                        out.w.push_back(wu);
                        break;
                    case Segment::Map::sqrt_below: {
                        const double p = std::sqrt(std::max(0.0, s.pivot * s.pivot - u * u));
                        out.p.push_back(p);
                        out.w.push_back(wu * u / p);
                        break;
                    }
                    case Segment::Map::sqrt_above: {
                        const double p = std::sqrt(s.pivot * s.pivot + u * u);
                        out.p.push_back(p);
                        out.w.push_back(wu * u / p);
                        break;
                    }
                }
            }
        }
    }
    return out;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_panels,
                          const std::vector<double>& interior_breaks) {
    if (!(b > a)) return b == a ? 0.0 : -integrate_adaptive(f, b, a, rel_tol, max_panels);
    std::vector<double> edges{a};
    for (double x : interior_breaks)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    const GaussRule& rule = gauss_legendre(16);
    auto eval = [&](int panels_per_piece) {
        KahanAccumulator acc;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            const double h = (edges[e + 1] - edges[e]) / panels_per_piece;
            for (int k = 0; k < panels_per_piece; ++k) {
                const double lo = edges[e] + k * h;
                for (std::size_t j = 0; j < rule.node.size(); ++j)
                    acc.add(0.5 * h * rule.weight[j] * f(lo + 0.5 * h * (rule.node[j] + 1.0)));
            }
        }
        return acc.value();
    };

    double prev = eval(1);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        double cur = eval(panels);
        double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
        if (std::abs(cur - prev) <= rel_tol * scale) return cur;
        prev = cur;
    }
    throw accuracy_error("integrate_adaptive: no convergence to requested tolerance",
                         std::abs(prev));
}

}  // namespace toa
