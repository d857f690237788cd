#include "randsubst/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "randsubst/numerics.hpp"

namespace randsubst {

double mean(int i, const RuleParams& params) {
    validate(params);
    if (i < 0) throw std::invalid_argument("mean: iteration must be >= 0");
    const double u = params.k * params.p;
    double m = 1.0;
    for (int step = 0; step < i; ++step) m *= u;
    return m;
}

double second_moment(int i, const RuleParams& params, SecondMomentMethod method) {
    validate(params);
    if (i < 0) throw std::invalid_argument("second_moment: iteration must be >= 0");
    const double u = params.k * params.p;
    if (method == SecondMomentMethod::recurrence) {
        double m = 1.0;
        double s = 1.0;
        for (int step = 0; step < i; ++step) {
            s = u * (1.0 - params.p) * m + u * u * s;
            m *= u;
        }
        return s;
    }
    const double g = geom_sum(u, i);
    return mean(i, params) * (1.0 + (params.k - 1) * params.p * g);
}

double variance(int i, const RuleParams& params) {
    validate(params);
    if (i < 0) throw std::invalid_argument("variance: iteration must be >= 0");
    const double u = params.k * params.p;
    return (1.0 - params.p) * mean(i, params) * geom_sum(u, i);
}

double dispersion_index(int i, const RuleParams& params) {
    validate(params);
    if (i < 0) throw std::invalid_argument("dispersion_index: iteration must be >= 0");
    return (1.0 - params.p) * geom_sum(params.k * params.p, i);
}

double dispersion_unity_crossing(int i, int k) {
    if (i < 2) throw std::invalid_argument(
        "dispersion_unity_crossing: needs iteration >= 2, the ratio only dips below 1 "
        "once the support spans more than one substitution");
    RuleParams params{k, 0.5};
    validate(params);
    auto excess = [&](double p) {
        return (1.0 - p) * geom_sum(k * p, i) - 1.0;
    };
    // The ratio starts at 1 (p = 0), rises, and decays to 0 at p = 1; walk
    // down from 1 to bracket the descending crossing.
    const double step = 1e-4;
    double hi = 1.0;
    for (double lo = 1.0 - step; lo > 0.0; lo -= step) {
        if (excess(lo) >= 0.0) return bisect(excess, lo, hi, 1e-12);
        hi = lo;
    }
    throw convergence_error("dispersion_unity_crossing: no crossing in (0,1) for i=" +
                            std::to_string(i) + ", k=" + std::to_string(k));
}

double zeros_mean(int i, const RuleParams& params) {
    validate(params);
    if (i < 0) throw std::invalid_argument("zeros_mean: iteration must be >= 0");
    double length = 1.0;
    for (int step = 0; step < i; ++step) length *= params.k;
    return length * (1.0 - std::pow(params.p, i));
}

double ones_zeros_ratio(int i, const RuleParams& params) {
    validate(params);
    if (i < 0) throw std::invalid_argument("ones_zeros_ratio: iteration must be >= 0");
    const double pi = std::pow(params.p, i);
    if (pi == 1.0) return std::numeric_limits<double>::infinity();
    return pi / (1.0 - pi);
}

MomentSummary moments(int i, const RuleParams& params) {
    MomentSummary s;
    s.iteration = i;
    s.params = params;
    s.mean = mean(i, params);
    s.second_moment = second_moment(i, params);
    s.variance = variance(i, params);
    s.std_dev = std::sqrt(s.variance);
    s.dispersion = dispersion_index(i, params);
    s.zeros_mean = zeros_mean(i, params);
    s.ones_zeros_ratio = ones_zeros_ratio(i, params);
    return s;
}

MomentSummary moments_from_distribution(const CountDistribution& dist) {
    MomentSummary s;
    s.iteration = dist.iteration;
    s.params.k = dist.k;
    s.params.p = std::numeric_limits<double>::quiet_NaN();

    KahanAccumulator mean_acc;
    KahanAccumulator second_acc;
    for (Eigen::Index x = 0; x < dist.probs.size(); ++x) {
        const double w = dist.probs[x];
        mean_acc.add(static_cast<double>(x) * w);
        second_acc.add(static_cast<double>(x) * static_cast<double>(x) * w);
    }
    s.mean = mean_acc.value();
    s.second_moment = second_acc.value();

    KahanAccumulator var_acc;
    for (Eigen::Index x = 0; x < dist.probs.size(); ++x) {
        const double d = static_cast<double>(x) - s.mean;
        var_acc.add(d * d * dist.probs[x]);
    }
    s.variance = var_acc.value();
    s.std_dev = std::sqrt(s.variance);
    s.dispersion = s.mean == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                 : s.variance / s.mean;

    double length = 1.0;
    for (int step = 0; step < dist.iteration; ++step) length *= dist.k;
    s.zeros_mean = length - s.mean;
    s.ones_zeros_ratio = s.zeros_mean == 0.0
                             ? std::numeric_limits<double>::infinity()
                             : s.mean / s.zeros_mean;
    return s;
}

MomentSummary bernoulli_moments(long long L, double p) {
    if (L < 0) throw std::invalid_argument("bernoulli_moments: length must be >= 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("bernoulli_moments: p must lie in [0,1]");
    MomentSummary s;
    s.iteration = 0;
    s.params.k = 2;
    s.params.p = p;
    const double Ld = static_cast<double>(L);
    s.mean = Ld * p;
    s.second_moment = Ld * p * (1.0 + (Ld - 1.0) * p);
    s.variance = Ld * p * (1.0 - p);
    s.std_dev = std::sqrt(s.variance);
    s.dispersion = s.mean == 0.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0 - p;
    s.zeros_mean = Ld * (1.0 - p);
    s.ones_zeros_ratio = s.zeros_mean == 0.0
                             ? std::numeric_limits<double>::infinity()
                             : s.mean / s.zeros_mean;
    return s;
}

}  // namespace randsubst
