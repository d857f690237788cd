#pragma once

#include <utility>
#include <vector>

#include "randsubst/params.hpp"

namespace randsubst {

// Scaled derivative of the closed-form variance: with u = k p,
//   d VAR_i / dp = k^i p^(i-1) * r_{k,i}(p),
//   r_{k,i}(p) = i + (k-1) sum_{j=1}^{i-1} (i+j) k^(j-1) p^j - 2 i k^(i-1) p^i.
// r has a single sign change on (0,1) (coefficients are +,...,+,-), so its
// unique root there is the variance argmax. When the terms outgrow double
// range the value is returned positively rescaled (sign and roots intact).
double variance_derivative_poly(int i, int k, double p);

// |r_{k,i}(p)| divided by the sum of absolute term magnitudes at p; a
// backward-error style residual that stays meaningful when the terms are
// huge.
double variance_derivative_residual(int i, int k, double p);

// Root of variance_derivative_poly in (0,1) by bracketed bisection to
// 1e-12; p_m(i) increases with i toward 1. For i > 60 the bisection runs
// on the sign of d log VAR / dp instead (same root, no term growth).
double variance_argmax(int i, int k);

// Fitted model for the argmax as a function of the iteration:
//   r(i) = 1 / (1 + alpha / (alpha + (i-1)^beta));
// r(1) = 1/2 and r(i) -> 1.
double root_curve_model(double i, double alpha, double beta);

struct FitResult {
    int k = 2;
    int i_lo = 2;
    int i_hi = 40;
    double alpha = 0.0;
    double beta = 0.0;
    double rss = 0.0;
    std::vector<std::pair<int, double>> roots;  // (i, p_m(i))
};

// Least-squares fit of root_curve_model to the variance argmax locations
// over the iteration range: simplex descent seeded at (0.5, 1.0) with a
// coarse multi-start grid; at most 1e5 evaluations in total.
FitResult fit_root_curve(int k, int i_lo = 2, int i_hi = 40);

}  // namespace randsubst
