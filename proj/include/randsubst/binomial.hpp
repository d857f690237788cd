#pragma once

#include <Eigen/Dense>

namespace randsubst {

// PMF of Bin(n, p) as a dense vector of length n+1; entry x is
// C(n,x) p^x (1-p)^(n-x). Evaluated through log-gamma so large n stays
// stable; sums to 1 within ~1e-13 for n up to 2^14.
Eigen::VectorXd binomial_pmf(int n, double p);

// log C(n,x) + x log p + (n-x) log(1-p); -inf where the mass is zero.
double binomial_log_pmf(int n, int x, double p);

}  // namespace randsubst
