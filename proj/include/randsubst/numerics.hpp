#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace randsubst {

// Compensated accumulation; keeps long positive sums near machine precision.
struct KahanAccumulator {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// sum_{j=0}^{i-1} x^j with the removable singularity at x=1 handled by
// direct summation (the quotient form is 0/0 there and ill-conditioned
// nearby). Returns +inf when x^i overflows.
double geom_sum(double x, int i);

// Root of f on [lo, hi] with f(lo), f(hi) of opposite sign. Plain bisection:
// every function we invert here is cheap and smooth, so the guaranteed
// bracket beats fancier steps.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-13, int max_iter = 200);

// Maximum of a unimodal f on [lo, hi] by golden-section search.
double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double xtol = 1e-10);

struct SimplexResult {
    double x = 0.0;
    double y = 0.0;
    double value = std::numeric_limits<double>::infinity();
    long evaluations = 0;
    bool converged = false;
};

// Two-dimensional Nelder–Mead descent. Stops when the simplex collapses
// below size_tol or the evaluation budget runs out.
SimplexResult nelder_mead_2d(const std::function<double(double, double)>& f,
                             double x0, double y0, double step = 0.1,
                             double size_tol = 1e-10, long max_evals = 20000);

}  // namespace randsubst
