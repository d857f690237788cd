#include "randsubst/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "randsubst/binomial.hpp"
#include "randsubst/extrema.hpp"
#include "randsubst/moments.hpp"
#include "randsubst/numerics.hpp"

namespace randsubst {

namespace {

// k^i, guarded against the support cap (the entropy vector needs k^i + 1
// entries just like the distribution it pairs with).
std::size_t checked_length(int i, int k, std::size_t support_cap) {
    std::size_t n = 1;
    for (int j = 0; j < i; ++j) {
        if (n > (std::numeric_limits<std::size_t>::max() - 1) / static_cast<std::size_t>(k))
            throw resource_limit_error("sequence length k^i overflows");
        n *= static_cast<std::size_t>(k);
    }
    if (n + 1 > support_cap)
        throw resource_limit_error("entropy vector for i=" + std::to_string(i) +
                                   ", k=" + std::to_string(k) + " exceeds support cap " +
                                   std::to_string(support_cap));
    return n;
}

}  // namespace

double sequence_entropy(long long j, long long n) {
    if (n < 1) throw std::invalid_argument("sequence_entropy: length must be >= 1");
    if (j < 0 || j > n)
        throw std::invalid_argument("sequence_entropy: ones count outside [0, n]");
    if (j == 0 || j == n) return 0.0;
    const double r = static_cast<double>(j) / static_cast<double>(n);
    return -(r * std::log2(r) + (1.0 - r) * std::log2(1.0 - r));
}

Eigen::VectorXd entropy_vector(int i, int k, std::size_t support_cap) {
    if (k < 2) throw std::invalid_argument("entropy_vector: k must be >= 2");
    if (i < 0) throw std::invalid_argument("entropy_vector: iteration must be >= 0");
    const std::size_t n = checked_length(i, k, support_cap);
    const long long nll = static_cast<long long>(n);
    Eigen::VectorXd h(static_cast<Eigen::Index>(n + 1));
    for (long long j = 0; 2 * j <= nll; ++j) {
        const double v = sequence_entropy(j, nll);
        h[static_cast<Eigen::Index>(j)] = v;
        h[static_cast<Eigen::Index>(nll - j)] = v;
    }
    return h;
}

double mean_entropy(int i, const RuleParams& params, std::size_t support_cap) {
    const Eigen::VectorXd h = entropy_vector(i, params.k, support_cap);
    const CountDistribution dist = distribution(i, params, support_cap);
    return h.dot(dist.probs);
}

double bernoulli_mean_entropy(int L, double p) {
    if (L < 1) throw std::invalid_argument("bernoulli_mean_entropy: length must be >= 1");
    const Eigen::VectorXd b = binomial_pmf(L, p);
    KahanAccumulator acc;
    for (long long j = 0; j <= L; ++j)
        acc.add(b[static_cast<Eigen::Index>(j)] * sequence_entropy(j, L));
    return acc.value();
}

double differential_entropy(int i, const RuleParams& params, std::size_t support_cap) {
    const Eigen::VectorXd h_here = entropy_vector(i, params.k, support_cap);
    const Eigen::VectorXd h_next = entropy_vector(i + 1, params.k, support_cap);
    const CountDistribution here = distribution(i, params, support_cap);
    const CountDistribution next = step_distribution(here, params, support_cap);
    return h_next.dot(next.probs) - h_here.dot(here.probs);
}

SignChange differential_sign_change(int i, int k, double grid_res,
                                    std::size_t support_cap) {
    if (i < 1)
        throw std::invalid_argument("differential_sign_change: needs iteration >= 1");
    if (!(grid_res > 0.0 && grid_res < 0.5))
        throw std::invalid_argument("differential_sign_change: grid_res must be in (0, 0.5)");

    const Eigen::VectorXd h_here = entropy_vector(i, k, support_cap);
    const Eigen::VectorXd h_next = entropy_vector(i + 1, k, support_cap);
    auto h = [&](double p) {
        RuleParams params{k, p};
        const CountDistribution here = distribution(i, params, support_cap);
        const CountDistribution next = step_distribution(here, params, support_cap);
        return h_next.dot(next.probs) - h_here.dot(here.probs);
    };

    SignChange result;
    double prev_p = grid_res;
    double prev_v = h(prev_p);
    double lo = 0.0, hi = 0.0;
    for (double p = 2.0 * grid_res; p < 1.0 - 0.5 * grid_res; p += grid_res) {
        const double v = h(p);
        if ((prev_v < 0.0 && v >= 0.0) || (prev_v >= 0.0 && v < 0.0)) {
            ++result.count;
            lo = prev_p;
            hi = p;
        }
        prev_p = p;
        prev_v = v;
    }
    if (result.count == 0)
        throw convergence_error("differential_sign_change: no sign change on the grid for i=" +
                                std::to_string(i) + ", k=" + std::to_string(k));
    result.p = bisect(h, lo, hi, 1e-9);
    return result;
}

double entropy_per_digit(int i, const RuleParams& params, std::size_t support_cap) {
    double length = 1.0;
    for (int step = 0; step < i; ++step) length *= params.k;
    return mean_entropy(i, params, support_cap) / length;
}

HVarCurve hvar_curve(int i, int k, const std::vector<double>& p_grid,
                     std::size_t support_cap) {
    if (p_grid.empty()) throw std::invalid_argument("hvar_curve: empty grid");
    HVarCurve curve;
    curve.iteration = i;
    curve.k = k;
    const Eigen::VectorXd h = entropy_vector(i, k, support_cap);
    curve.points.reserve(p_grid.size());
    for (double p : p_grid) {
        RuleParams params{k, p};
        validate(params);
        const CountDistribution dist = distribution(i, params, support_cap);
        curve.points.push_back({p, variance(i, params), h.dot(dist.probs)});
    }
    curve.p_r = farthest_point(curve, DistanceAxes::raw, support_cap);
    return curve;
}

double farthest_point(const HVarCurve& curve, DistanceAxes axes,
                      std::size_t support_cap) {
    if (curve.points.empty()) throw std::invalid_argument("farthest_point: empty curve");

    double v_scale = 1.0, h_scale = 1.0;
    if (axes == DistanceAxes::normalized) {
        v_scale = h_scale = 0.0;
        for (const HVarPoint& pt : curve.points) {
            v_scale = std::max(v_scale, std::abs(pt.variance));
            h_scale = std::max(h_scale, std::abs(pt.mean_entropy));
        }
        if (v_scale == 0.0) v_scale = 1.0;
        if (h_scale == 0.0) h_scale = 1.0;
    }

    std::vector<HVarPoint> pts = curve.points;
    std::sort(pts.begin(), pts.end(),
              [](const HVarPoint& a, const HVarPoint& b) { return a.p < b.p; });

    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t idx = 0; idx < pts.size(); ++idx) {
        const double dv = pts[idx].variance / v_scale;
        const double dh = pts[idx].mean_entropy / h_scale;
        const double d = dv * dv + dh * dh;
        if (d > best_d) {
            best_d = d;
            best = idx;
        }
    }

    const int i = curve.iteration;
    const int k = curve.k;
    const Eigen::VectorXd h = entropy_vector(i, k, support_cap);
    auto dist2 = [&](double p) {
        RuleParams params{k, p};
        const double dv = variance(i, params) / v_scale;
        const double dh = h.dot(distribution(i, params, support_cap).probs) / h_scale;
        return dv * dv + dh * dh;
    };
    const double lo = best == 0 ? pts.front().p : pts[best - 1].p;
    const double hi = best + 1 == pts.size() ? pts.back().p : pts[best + 1].p;
    if (lo == hi) return lo;
    return golden_section_max(dist2, lo, hi, 1e-10);
}

double match_variance(int i, int k, double p_ref) {
    if (i < 1) throw std::invalid_argument("match_variance: needs iteration >= 1");
    if (!(p_ref > 0.0 && p_ref < 1.0))
        throw std::invalid_argument("match_variance: p_ref must lie in (0,1)");
    const double p_m = variance_argmax(i, k);
    if (std::abs(p_ref - p_m) < 1e-6)
        throw std::invalid_argument(
            "match_variance: p_ref is at the variance maximum, no distinct partner");
    const double v_ref = variance(i, RuleParams{k, p_ref});
    auto g = [&](double p) { return variance(i, RuleParams{k, p}) - v_ref; };
    return p_ref < p_m ? bisect(g, p_m, 1.0, 1e-13) : bisect(g, 0.0, p_m, 1e-13);
}

double match_entropy(int i, int k, double p_ref, std::size_t support_cap) {
    if (i < 1) throw std::invalid_argument("match_entropy: needs iteration >= 1");
    if (!(p_ref > 0.0 && p_ref < 1.0))
        throw std::invalid_argument("match_entropy: p_ref must lie in (0,1)");
    const Eigen::VectorXd h = entropy_vector(i, k, support_cap);
    auto H = [&](double p) {
        return h.dot(distribution(i, RuleParams{k, p}, support_cap).probs);
    };
    const double p_h = golden_section_max(H, 0.0, 1.0, 1e-10);
    if (std::abs(p_ref - p_h) < 1e-6)
        throw std::invalid_argument(
            "match_entropy: p_ref is at the entropy maximum, no distinct partner");
    const double h_ref = H(p_ref);
    auto g = [&](double p) { return H(p) - h_ref; };
    return p_ref < p_h ? bisect(g, p_h, 1.0, 1e-12) : bisect(g, 0.0, p_h, 1e-12);
}

}  // namespace randsubst
