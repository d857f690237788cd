#pragma once

#include "randsubst/dist_core.hpp"
#include "randsubst/params.hpp"

namespace randsubst {

struct MomentSummary {
    int iteration = 0;
    RuleParams params;
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double std_dev = 0.0;
    double dispersion = 0.0;        // variance/mean, extended continuously
                                    // to 1 at p = 0; NaN only when computed
                                    // from an empirical/exact distribution
                                    // whose mean is 0
    double zeros_mean = 0.0;        // expected number of zeros
    double ones_zeros_ratio = 0.0;  // +inf at p = 1
};

enum class SecondMomentMethod { closed_form, recurrence };

// E[X_i] = (k p)^i, built by repeated multiplication so that
// mean(i+1) == k p * mean(i) holds exactly in floating point.
double mean(int i, const RuleParams& params);

// E[X_i^2]; closed form (k p)^i (1 + (k-1) p geom_sum(k p, i)) or the
// recurrence E_i = k p (1-p) E_{i-1}[X] + (k p)^2 E_{i-1}[X^2].
double second_moment(int i, const RuleParams& params,
                     SecondMomentMethod method = SecondMomentMethod::closed_form);

// VAR_i = (1-p) (k p)^i geom_sum(k p, i); the removable singularity at
// p = 1/k evaluates to (1 - 1/k) i, and overflowing values come back +inf.
double variance(int i, const RuleParams& params);

// Variance-to-mean ratio D_i = (1-p) geom_sum(k p, i); D_i(0) = 1 by the
// continuous extension, D_i(1) = 0.
double dispersion_index(int i, const RuleParams& params);

// Largest p in (0,1) where D_i crosses 1 (from above); moves toward 1 as
// i grows. Bisection to 1e-12.
double dispersion_unity_crossing(int i, int k);

// Expected number of zeros: k^i (1 - p^i).
double zeros_mean(int i, const RuleParams& params);

// Expected ones/zeros ratio p^i / (1 - p^i); +inf at p = 1.
double ones_zeros_ratio(int i, const RuleParams& params);

// All closed-form moments for (i, k, p).
MomentSummary moments(int i, const RuleParams& params);

// Brute-force moments of an exact distribution (compensated sums; the
// variance is accumulated as sum (x-mean)^2 P(x) to dodge cancellation).
MomentSummary moments_from_distribution(const CountDistribution& dist);

// Independent-positions baseline: length-L sequence, each position 1 with
// probability p. mean = L p, E[X^2] = L p (1 + (L-1) p), variance = L p (1-p).
MomentSummary bernoulli_moments(long long L, double p);

}  // namespace randsubst
