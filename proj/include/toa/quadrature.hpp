#pragma once

#include <functional>
#include <vector>

namespace toa {

// Gauss-Legendre rule on [-1, 1]; nodes ascending, weights positive.
struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};

const GaussRule& gauss_legendre(int order);

// Deterministic compensated (Neumaier) summation.
double stable_sum(const std::vector<double>& terms);

class KahanAccumulator {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// One smooth piece of an integration domain.  The sqrt maps absorb an
// inverse-square-root branch point at `pivot` (used at the step potential's
// barrier momentum): below, p = sqrt(pivot^2 - u^2); above, p = sqrt(pivot^2 + u^2).
// Weights returned by sample() already include the Jacobian dp/du.
struct Segment {
    enum class Map { identity, sqrt_below, sqrt_above };
    double lo = 0.0;
    double hi = 0.0;
    Map map = Map::identity;
    double pivot = 0.0;
    // Suggested minimum panel count (phase budget); sample() scales it.
    int seed_panels = 1;
};

struct PointSet {
    std::vector<double> p;
    std::vector<double> w;
    std::size_t size() const { return p.size(); }
};

// Composite Gauss-Legendre sampling of the segments with every seed panel
// count multiplied by 2^level.
PointSet sample_segments(const std::vector<Segment>& segments, int level, int order = 16);

// Integral of f over [a, b] by adaptive composite Gauss-Legendre: panel count
// doubles until two consecutive estimates agree to rel_tol.  Throws
// accuracy_error when max_panels is exceeded.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, int max_panels = 1 << 16,
                          const std::vector<double>& interior_breaks = {});

}  // namespace toa
