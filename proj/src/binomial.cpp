#include "randsubst/binomial.hpp"

#include <cmath>
#include <stdexcept>

namespace randsubst {

double binomial_log_pmf(int n, int x, double p) {
    if (n < 0 || x < 0 || x > n)
        throw std::invalid_argument("binomial_log_pmf: need 0 <= x <= n");
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (p == 0.0) return x == 0 ? 0.0 : neg_inf;
    if (p == 1.0) return x == n ? 0.0 : neg_inf;
    double log_choose = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                        std::lgamma(n - x + 1.0);
    return log_choose + x * std::log(p) + (n - x) * std::log1p(-p);
}

Eigen::VectorXd binomial_pmf(int n, double p) {
    if (n < 0) throw std::invalid_argument("binomial_pmf: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("binomial_pmf: p must lie in [0,1]");
    Eigen::VectorXd pmf = Eigen::VectorXd::Zero(n + 1);
    if (p == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p == 1.0) {
        pmf[n] = 1.0;
        return pmf;
    }
    for (int x = 0; x <= n; ++x) pmf[x] = std::exp(binomial_log_pmf(n, x, p));
    return pmf;
}

}  // namespace randsubst
