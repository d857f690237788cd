#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "randsubst/dist_core.hpp"
#include "randsubst/params.hpp"

namespace randsubst {

// General two-symbol substitution: each symbol is replaced by a word whose
// entries are per-position fill probabilities. Words may differ in length
// (Fibonacci needs that). The constant-length random rule is word0 = k
// zeros, word1 = k copies of p.
struct SubstitutionRule {
    std::vector<double> word0;
    std::vector<double> word1;
};

// Named rules: cantor (1 -> 101, 0 -> 000), morse_thue (0 -> 01, 1 -> 10),
// fibonacci (0 -> 1, 1 -> 10), mandelbrot (the random rule with the given
// k and p). Throws invalid_argument for unknown names.
SubstitutionRule preset(const std::string& name, int k = 2, double p = 0.5);

// True when every word entry is 0 or 1, i.e. the rule needs no randomness.
bool is_deterministic(const SubstitutionRule& rule);

// Applies the rule i times to the one-symbol seed, sampling probabilistic
// positions independently with the counter-based generator; deterministic
// given rng_seed. Constant-length rules give exactly k^i symbols.
std::vector<std::uint8_t> iterate_sequence(const SubstitutionRule& rule,
                                           int seed_symbol, int i,
                                           std::uint64_t rng_seed,
                                           std::size_t length_cap = default_length_cap());

// Sequence for a named preset. Cantor, Morse-Thue and mandelbrot count rule
// applications (index 0 is the seed); Fibonacci is conventionally numbered
// by generation with the seed 0 as generation 1, so index g applies the
// rule g-1 times.
std::vector<std::uint8_t> preset_sequence(const std::string& name, int index,
                                          int k = 2, double p = 0.5,
                                          std::uint64_t rng_seed = 0,
                                          std::size_t length_cap = default_length_cap());

// One substitution step of a deterministic 1 -> g, 0 -> zeros rule written
// as the Kronecker-style product: (v_1 g, v_2 g, ..., v_m g).
std::vector<std::uint8_t> kronecker_expand(const std::vector<std::uint8_t>& generator,
                                           const std::vector<std::uint8_t>& v);

struct EnsembleHistogram {
    int iteration = 0;
    RuleParams params;
    long long runs = 0;
    std::map<long long, long long> counts;  // ones-count -> occurrences
    std::uint64_t seed = 0;
};

enum class SimulationMode {
    count_only,     // track only the number of ones per realization
    full_sequence,  // materialize each sequence
};

// `runs` independent realizations of the random rule from the seed (1);
// per-run draws are keyed by (seed, run, iteration, symbol), so the
// histogram is identical under any execution order.
EnsembleHistogram ensemble_counts(const RuleParams& params, int i, long long runs,
                                  std::uint64_t rng_seed,
                                  SimulationMode mode = SimulationMode::count_only,
                                  std::size_t length_cap = default_length_cap());

struct EmpiricalStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double mean_entropy = 0.0;
};

EmpiricalStats empirical_stats(const EnsembleHistogram& hist);

// Total-variation distance between the normalized histogram and an exact
// distribution over the same support: half the L1 difference.
double total_variation(const EnsembleHistogram& hist, const CountDistribution& dist);

}  // namespace randsubst
