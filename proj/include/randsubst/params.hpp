#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace randsubst {

// Rule of constant length k: a 0 becomes k zeros, a 1 becomes k positions
// each independently filled with a 1 at probability p.
struct RuleParams {
    int k = 2;
    double p = 0.5;
};

inline void validate(const RuleParams& params) {
    if (params.k < 2)
        throw std::invalid_argument("substitution length k must be >= 2, got " +
                                    std::to_string(params.k));
    if (!(params.p >= 0.0 && params.p <= 1.0))
        throw std::invalid_argument("fill probability p must lie in [0,1], got " +
                                    std::to_string(params.p));
}

// Thrown when a computation would exceed a configured size limit.
class resource_limit_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Thrown when an iterative solver exhausts its budget.
class convergence_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Maximum number of support entries (k^i + 1) an exact distribution may hold.
// Overridable through the RANDSUBST_SUPPORT_CAP environment variable.
std::size_t default_support_cap();

// Maximum number of symbols a generated sequence may hold.
std::size_t default_length_cap();

// Default RNG seed for the CLI; RANDSUBST_SEED overrides it.
std::uint64_t default_seed();

}  // namespace randsubst
