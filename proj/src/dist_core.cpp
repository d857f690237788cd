#include "randsubst/dist_core.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "randsubst/binomial.hpp"

namespace randsubst {

namespace {

std::size_t env_size(const char* name, std::size_t fallback) {
    const char* raw = std::getenv(name);
    if (!raw || !*raw) return fallback;
    char* end = nullptr;
    unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0) return fallback;
    return static_cast<std::size_t>(v);
}

// k^i + 1 saturated at SIZE_MAX, so cap comparisons never overflow.
std::size_t support_length(int i, int k) {
    std::size_t n = 1;
    for (int j = 0; j < i; ++j) {
        if (n > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(k))
            return std::numeric_limits<std::size_t>::max();
        n *= static_cast<std::size_t>(k);
    }
    return n == std::numeric_limits<std::size_t>::max() ? n : n + 1;
}

// One Horner stage of the convolution scheme:
//   out[x] = sum_t b[t] * s[x - t],  x = 0 .. len + K - 1.
// The interior loop carries no edge branches so it vectorizes; typical k
// get a compile-time tap count.
template <int K>
void conv_stage_fixed(const double* __restrict s, std::ptrdiff_t len,
                      const double* __restrict b, double* __restrict out) {
    std::ptrdiff_t head_end = std::min<std::ptrdiff_t>(K, len + K);
    for (std::ptrdiff_t x = 0; x < head_end; ++x) {
        double acc = 0.0;
        std::ptrdiff_t t_lo = std::max<std::ptrdiff_t>(0, x - len + 1);
        for (std::ptrdiff_t t = t_lo; t <= x; ++t) acc += b[t] * s[x - t];
        out[x] = acc;
    }
    for (std::ptrdiff_t x = K; x < len; ++x) {
        double acc = b[0] * s[x];
        for (int t = 1; t <= K; ++t) acc += b[t] * s[x - t];
        out[x] = acc;
    }
    for (std::ptrdiff_t x = std::max<std::ptrdiff_t>(K, len); x < len + K; ++x) {
        double acc = 0.0;
        for (std::ptrdiff_t t = x - len + 1; t <= K; ++t) acc += b[t] * s[x - t];
        out[x] = acc;
    }
}

void conv_stage_generic(const double* __restrict s, std::ptrdiff_t len,
                        const double* __restrict b, int k,
                        double* __restrict out) {
    for (std::ptrdiff_t x = 0; x < len + k; ++x) {
        double acc = 0.0;
        std::ptrdiff_t t_lo = std::max<std::ptrdiff_t>(0, x - len + 1);
        std::ptrdiff_t t_hi = std::min<std::ptrdiff_t>(k, x);
        for (std::ptrdiff_t t = t_lo; t <= t_hi; ++t) acc += b[t] * s[x - t];
        out[x] = acc;
    }
}

void conv_stage(const double* s, std::ptrdiff_t len, const double* b, int k,
                double* out) {
    switch (k) {
        case 2: conv_stage_fixed<2>(s, len, b, out); break;
        case 3: conv_stage_fixed<3>(s, len, b, out); break;
        case 4: conv_stage_fixed<4>(s, len, b, out); break;
        case 5: conv_stage_fixed<5>(s, len, b, out); break;
        default: conv_stage_generic(s, len, b, k, out); break;
    }
}

}  // namespace

std::size_t default_support_cap() {
    static const std::size_t cap = env_size("RANDSUBST_SUPPORT_CAP", std::size_t{1} << 20);
    return cap;
}

std::size_t default_length_cap() { return std::size_t{1} << 24; }

std::uint64_t default_seed() {
    return static_cast<std::uint64_t>(env_size("RANDSUBST_SEED", 0));
}

CountDistribution step_distribution(const CountDistribution& prev,
                                    const RuleParams& params,
                                    std::size_t support_cap) {
    validate(params);
    if (prev.k != params.k)
        throw std::invalid_argument("step_distribution: distribution built for k=" +
                                    std::to_string(prev.k) + ", rule has k=" +
                                    std::to_string(params.k));
    if (prev.probs.size() == 0)
        throw std::invalid_argument("step_distribution: empty distribution");

    const int k = params.k;
    const Eigen::Index m_count = prev.probs.size();
    const std::size_t out_len =
        static_cast<std::size_t>(k) * static_cast<std::size_t>(m_count - 1) + 1;
    if (out_len > support_cap)
        throw resource_limit_error("distribution support " + std::to_string(out_len) +
                                   " exceeds cap " + std::to_string(support_cap));

    const Eigen::VectorXd b = binomial_pmf(k, params.p);

    CountDistribution next;
    next.iteration = prev.iteration + 1;
    next.k = k;
    Eigen::VectorXd cur = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_len));
    Eigen::VectorXd tmp = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_len));

    cur[0] = prev.probs[m_count - 1];
    std::ptrdiff_t len = 1;
    for (Eigen::Index m = m_count - 2; m >= 0; --m) {
        conv_stage(cur.data(), len, b.data(), k, tmp.data());
        len += k;
        tmp[0] += prev.probs[m];
        cur.swap(tmp);
    }
    next.probs = std::move(cur);
    return next;
}

CountDistribution distribution(int i, const RuleParams& params,
                               std::size_t support_cap) {
    validate(params);
    if (i < 0) throw std::invalid_argument("distribution: iteration must be >= 0");
    if (support_length(i, params.k) > support_cap)
        throw resource_limit_error("iteration " + std::to_string(i) + " with k=" +
                                   std::to_string(params.k) + " exceeds support cap " +
                                   std::to_string(support_cap));
    CountDistribution dist;
    dist.iteration = 0;
    dist.k = params.k;
    dist.probs = Eigen::Vector2d(0.0, 1.0);
    for (int step = 0; step < i; ++step)
        dist = step_distribution(dist, params, support_cap);
    return dist;
}

double null_sequence_prob(int i, const RuleParams& params) {
    validate(params);
    if (i < 1) throw std::invalid_argument("null_sequence_prob: iteration must be >= 1");
    const double q = 1.0 - params.p;
    double x = std::pow(q, params.k);
    for (int step = 1; step < i; ++step)
        x = std::pow(x * params.p + q, params.k);
    return x;
}

double null_sequence_limit(const RuleParams& params) {
    validate(params);
    if (params.p <= critical_probability(params.k)) return 1.0;
    const double q = 1.0 - params.p;
    double x = 0.0;
    for (long it = 0; it < 1000000; ++it) {
        double next = std::pow(x * params.p + q, params.k);
        if (std::abs(next - x) < 1e-14) return next;
        x = next;
    }
    throw convergence_error("null_sequence_limit: fixed-point iteration stalled at p=" +
                            std::to_string(params.p) + ", k=" + std::to_string(params.k));
}

double critical_probability(int k) {
    if (k < 2) throw std::invalid_argument("critical_probability: k must be >= 2");
    return 1.0 / static_cast<double>(k);
}

}  // namespace randsubst
