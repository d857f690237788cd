#pragma once

#include <Eigen/Dense>

#include "randsubst/params.hpp"

namespace randsubst {

// Exact distribution of the number of ones after `iteration` substitutions,
// starting from the single-symbol seed (1). probs[x] = P(X = x), x = 0..k^i.
struct CountDistribution {
    int iteration = 0;
    int k = 2;
    Eigen::VectorXd probs;
};

// One substitution step:
//   new[x] = sum_m prev[m] * C(k m, x) p^x (1-p)^(k m - x).
// Equivalent to multiplying by the banded transition matrix, but evaluated
// as a Horner scheme in the convolution algebra: with B = Bin(k,p) pmf,
//   S = [prev[M-1]];  for m = M-2..0:  S = S (*) B;  S[0] += prev[m];
// which is exact term regrouping (the x-column of the matrix for source m
// is the (k m)-fold Bernoulli convolution) and runs in O(k M^2) instead of
// the O(M^2 k ...) matvec with per-entry binomial evaluations.
CountDistribution step_distribution(const CountDistribution& prev,
                                    const RuleParams& params,
                                    std::size_t support_cap = default_support_cap());

// i-fold application of step_distribution from the point mass at one 1.
CountDistribution distribution(int i, const RuleParams& params,
                               std::size_t support_cap = default_support_cap());

// P_i(X = 0) through the scalar recurrence
//   P_1(0) = (1-p)^k,  P_{i+1}(0) = (P_i(0) p + (1-p))^k.
double null_sequence_prob(int i, const RuleParams& params);

// Limit of the all-zero probability: smallest fixed point of
// x = (x p + 1 - p)^k in [0,1]. Exactly 1 for p <= 1/k; otherwise located
// by fixed-point iteration from 0, which increases monotonically to the
// lowest solution.
double null_sequence_limit(const RuleParams& params);

// Fill probability below which extinction is certain: 1/k.
double critical_probability(int k);

}  // namespace randsubst
