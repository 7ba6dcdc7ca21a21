#include "toa/potential.hpp"

#include <algorithm>

namespace toa {

void PotentialSpec::validate() const {
    if (const Step* s = get_if<Step>()) {
        if (!(s->height >= 0.0)) throw domain_error("Step: height must be >= 0");
    } else if (const SquareBarrier* b = get_if<SquareBarrier>()) {
        if (!(b->height >= 0.0)) throw domain_error("SquareBarrier: height must be >= 0");
        if (!(b->width > 0.0)) throw domain_error("SquareBarrier: width must be > 0");
    } else if (const LinearRamp* r = get_if<LinearRamp>()) {
        if (!(r->force > 0.0)) throw domain_error("LinearRamp: force must be > 0");
    } else if (const SampledSmooth* t = get_if<SampledSmooth>()) {
        if (t->table.size() < 2) throw domain_error("SampledSmooth: need at least two nodes");
        if (t->table.front().first != 0.0)
            throw domain_error("SampledSmooth: grid must start at q = 0");
        for (std::size_t i = 0; i < t->table.size(); ++i) {
            if (!(t->table[i].second >= 0.0))
                throw domain_error("SampledSmooth: V must be >= 0 everywhere");
            if (i > 0 && !(t->table[i].first > t->table[i - 1].first))
                throw domain_error("SampledSmooth: grid must be strictly increasing");
        }
    }
}

double PotentialSpec::value(double q) const {
    if (is<Free>()) return 0.0;
    if (q < 0.0) return 0.0;
    if (const Step* s = get_if<Step>()) return s->height;
    if (const SquareBarrier* b = get_if<SquareBarrier>()) return q <= b->width ? b->height : 0.0;
    if (const LinearRamp* r = get_if<LinearRamp>()) return r->force * q;
    const SampledSmooth& t = *get_if<SampledSmooth>();
    if (q > t.table.back().first)
        throw range_error("SampledSmooth: position beyond the sampled grid");
    auto it = std::upper_bound(t.table.begin(), t.table.end(), q,
                               [](double x, const auto& n) { return x < n.first; });
    if (it == t.table.begin()) return t.table.front().second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double s = (q - lo.first) / (hi.first - lo.first);
    return lo.second + s * (hi.second - lo.second);
}

double PotentialSpec::barrier_momentum(double mass) const {
    double v = 0.0;
    if (const Step* s = get_if<Step>()) v = s->height;
    if (const SquareBarrier* b = get_if<SquareBarrier>()) v = b->height;
    return std::sqrt(2.0 * mass * v);
}

std::vector<double> PotentialSpec::breakpoints(double q_from, double q_to) const {
    std::vector<double> pts;
    auto keep = [&](double q) {
        if (q > std::min(q_from, q_to) && q < std::max(q_from, q_to)) pts.push_back(q);
    };
    if (is<Step>() || is<LinearRamp>()) {
        keep(0.0);
    } else if (const SquareBarrier* b = get_if<SquareBarrier>()) {
        keep(0.0);
        keep(b->width);
    } else if (const SampledSmooth* t = get_if<SampledSmooth>()) {
        for (const auto& n : t->table) keep(n.first);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::string PotentialSpec::kind_name() const {
    if (is<Free>()) return "free";
    if (is<Step>()) return "step";
    if (is<SquareBarrier>()) return "square_barrier";
    if (is<LinearRamp>()) return "linear_ramp";
    return "sampled_smooth";
}

}  // namespace toa
