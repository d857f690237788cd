#pragma once

#include <Eigen/Dense>
#include <vector>

#include "randsubst/dist_core.hpp"
#include "randsubst/params.hpp"

namespace randsubst {

// Frequency entropy of a binary sequence of length n holding j ones:
//   H(j, n) = -(j/n) log2(j/n) - (1 - j/n) log2(1 - j/n),
// with 0 log2 0 = 0, so H(0) = H(n) = 0 and H(n/2) = 1.
double sequence_entropy(long long j, long long n);

// Vector of H(j, k^i) for j = 0..k^i; symmetric with zero endpoints.
Eigen::VectorXd entropy_vector(int i, int k,
                               std::size_t support_cap = default_support_cap());

// Ensemble mean entropy H_i(p): dot product of the entropy vector with the
// exact count distribution.
double mean_entropy(int i, const RuleParams& params,
                    std::size_t support_cap = default_support_cap());

// Mean entropy of the independent-positions baseline of length L:
// sum_j C(L,j) p^j (1-p)^(L-j) H(j, L).
double bernoulli_mean_entropy(int L, double p);

// h_i(p) = H_{i+1}(p) - H_i(p).
double differential_entropy(int i, const RuleParams& params,
                            std::size_t support_cap = default_support_cap());

struct SignChange {
    double p = 0.0;  // largest sign-change location found
    int count = 0;   // how many grid-resolution sign changes were seen
};

// Location p_ch(i) where h_i turns from negative to positive: grid scan at
// `grid_res` plus bisection refinement to 1e-9. Reports how many changes
// the grid saw; throws convergence_error when there is none.
SignChange differential_sign_change(int i, int k, double grid_res = 1e-3,
                                    std::size_t support_cap = default_support_cap());

// H_i(p) / k^i.
double entropy_per_digit(int i, const RuleParams& params,
                         std::size_t support_cap = default_support_cap());

struct HVarPoint {
    double p = 0.0;
    double variance = 0.0;
    double mean_entropy = 0.0;
};

// Parametric curve p -> (VAR_i(p), H_i(p)). Both endpoints sit at the
// origin, so the curve is closed.
struct HVarCurve {
    int iteration = 0;
    int k = 2;
    std::vector<HVarPoint> points;
    double p_r = 0.0;  // parameter of the point farthest from the origin
};

HVarCurve hvar_curve(int i, int k, const std::vector<double>& p_grid,
                     std::size_t support_cap = default_support_cap());

enum class DistanceAxes { raw, normalized };

// Parameter of the curve point maximizing VAR^2 + H^2 (raw axes by default;
// the variance dominates, so p_r lands near the variance maximum). Grid
// argmax refined by golden-section between the neighbouring samples.
double farthest_point(const HVarCurve& curve,
                      DistanceAxes axes = DistanceAxes::raw,
                      std::size_t support_cap = default_support_cap());

// The partner fill probability on the other side of the variance maximum
// with the same variance: VAR_i(p_alt) = VAR_i(p_ref). Throws
// invalid_argument when p_ref sits at the maximum (no distinct partner).
double match_variance(int i, int k, double p_ref);

// Same-entropy partner across the entropy maximum.
double match_entropy(int i, int k, double p_ref,
                     std::size_t support_cap = default_support_cap());

}  // namespace randsubst
