#include "randsubst/extrema.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "randsubst/numerics.hpp"

namespace randsubst {

namespace {

void check_poly_args(int i, int k) {
    if (i < 1) throw std::invalid_argument("variance derivative: iteration must be >= 1");
    if (k < 2) throw std::invalid_argument("variance derivative: k must be >= 2");
}

// Horner evaluation of r_{k,i} divided through by k, written in u = k p so
// the coefficients stay O(i k) instead of O(i k^i):
//   r/k = i/k + ((k-1)/k) sum_{j=1}^{i-1} (i+j) u^j / k ... regrouped as
//   r = i + ((k-1)/k) sum (i+j) u^j - (2 i / k) u^i.
// `value` carries the (possibly rescaled) polynomial, `magnitude` the same
// recursion over absolute terms; both share one power-of-two rescale, so
// their ratio and the sign of `value` survive any overflow.
struct ScaledPoly {
    double value = 0.0;
    double magnitude = 0.0;
};

ScaledPoly eval_scaled(int i, int k, double p) {
    const double u = static_cast<double>(k) * p;
    const double top = 2.0 * static_cast<double>(i) / static_cast<double>(k);
    double r = -top;
    double a = top;
    double scale = 1.0;
    for (int j = i - 1; j >= 0; --j) {
        const double c = j == 0 ? static_cast<double>(i)
                                : (static_cast<double>(k) - 1.0) *
                                      static_cast<double>(i + j) /
                                      static_cast<double>(k);
        r = r * u + c * scale;
        a = a * u + c * scale;
        if (a > 1e280) {
            r *= 0x1p-512;
            a *= 0x1p-512;
            scale *= 0x1p-512;
        }
    }
    return {r, a};
}

// Sign of d log VAR_i / dp, free of term growth:
//   d log VAR/dp = -1/(1-p) + i/p + k d log geom_sum(u, i)/du,  u = k p.
double log_variance_slope(int i, double k, double p) {
    const double u = k * p;
    double geom_term;
    if (std::abs(u - 1.0) < 1e-8) {
        geom_term = (static_cast<double>(i) - 1.0) / 2.0;
    } else if (u < 1.0) {
        const double ui = std::pow(u, i);
        geom_term = -static_cast<double>(i) * std::pow(u, i - 1) / (1.0 - ui) +
                    1.0 / (1.0 - u);
    } else {
        const double ui_inv = std::exp(-static_cast<double>(i) * std::log(u));
        geom_term = (static_cast<double>(i) / u) / (1.0 - ui_inv) - 1.0 / (u - 1.0);
    }
    return -1.0 / (1.0 - p) + static_cast<double>(i) / p + k * geom_term;
}

}  // namespace

double variance_derivative_poly(int i, int k, double p) {
    check_poly_args(i, k);
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("variance derivative: p must lie in [0,1]");
    return eval_scaled(i, k, p).value;
}

double variance_derivative_residual(int i, int k, double p) {
    check_poly_args(i, k);
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("variance derivative: p must lie in [0,1]");
    const ScaledPoly e = eval_scaled(i, k, p);
    return std::abs(e.value) / e.magnitude;
}

double variance_argmax(int i, int k) {
    check_poly_args(i, k);
    if (i > 60) {
        auto slope = [&](double p) { return log_variance_slope(i, k, p); };
        return bisect(slope, 1e-9, 1.0 - 1e-12, 1e-12);
    }
    auto poly = [&](double p) { return variance_derivative_poly(i, k, p); };
    return bisect(poly, 0.0, 1.0, 1e-12);
}

double root_curve_model(double i, double alpha, double beta) {
    const double shifted = std::pow(i - 1.0, beta);
    return 1.0 / (1.0 + alpha / (alpha + shifted));
}

FitResult fit_root_curve(int k, int i_lo, int i_hi) {
    if (k < 2) throw std::invalid_argument("fit_root_curve: k must be >= 2");
    if (i_lo < 2 || i_hi - i_lo + 1 < 4)
        throw std::invalid_argument(
            "fit_root_curve: need i_lo >= 2 and at least 4 iterations, a "
            "two-parameter model is underdetermined on fewer points");

    FitResult fit;
    fit.k = k;
    fit.i_lo = i_lo;
    fit.i_hi = i_hi;
    fit.roots.reserve(static_cast<std::size_t>(i_hi - i_lo + 1));
    for (int i = i_lo; i <= i_hi; ++i)
        fit.roots.emplace_back(i, variance_argmax(i, k));

    auto rss = [&](double alpha, double beta) {
        if (!(alpha > 1e-12) || !(beta > 1e-12) || alpha > 1e6 || beta > 1e3)
            return std::numeric_limits<double>::infinity();
        double s = 0.0;
        for (const auto& [i, root] : fit.roots) {
            const double d = root_curve_model(static_cast<double>(i), alpha, beta) - root;
            s += d * d;
        }
        return s;
    };

    const long total_budget = 100000;
    long used = 0;
    SimplexResult best;
    bool any_converged = false;
    const double alpha_starts[] = {0.5, 0.2, 0.8, 1.5};
    const double beta_starts[] = {1.0, 0.7, 1.4};
    for (double a0 : alpha_starts) {
        for (double b0 : beta_starts) {
            if (used >= total_budget) break;
            SimplexResult r = nelder_mead_2d(rss, a0, b0, 0.1, 1e-12,
                                             total_budget - used);
            used += r.evaluations;
            any_converged = any_converged || r.converged;
            if (r.value < best.value) best = r;
        }
    }
    if (!any_converged)
        throw convergence_error("fit_root_curve: simplex never collapsed for k=" +
                                std::to_string(k));

    fit.alpha = best.x;
    fit.beta = best.y;
    fit.rss = best.value;
    return fit;
}

}  // namespace randsubst
