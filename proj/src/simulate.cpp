#include "randsubst/simulate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "randsubst/binomial.hpp"
#include "randsubst/entropy.hpp"
#include "randsubst/numerics.hpp"
#include "randsubst/rng.hpp"

namespace randsubst {

namespace {

void check_rule(const SubstitutionRule& rule) {
    if (rule.word0.empty() || rule.word1.empty())
        throw std::invalid_argument("substitution words must be non-empty");
    for (double w : rule.word0)
        if (!(w >= 0.0 && w <= 1.0))
            throw std::invalid_argument("word probabilities must lie in [0,1]");
    for (double w : rule.word1)
        if (!(w >= 0.0 && w <= 1.0))
            throw std::invalid_argument("word probabilities must lie in [0,1]");
}

std::vector<std::uint8_t> grow(const SubstitutionRule& rule, int seed_symbol,
                               int iterations, std::uint64_t seed,
                               std::uint64_t run, std::size_t length_cap) {
    if (seed_symbol != 0 && seed_symbol != 1)
        throw std::invalid_argument("seed symbol must be 0 or 1");
    if (iterations < 0)
        throw std::invalid_argument("iteration count must be >= 0");
    if (length_cap < 1)
        throw resource_limit_error("length cap admits no sequence at all");

    std::vector<std::uint8_t> seq{static_cast<std::uint8_t>(seed_symbol)};
    std::vector<std::uint8_t> next;
    for (int iter = 1; iter <= iterations; ++iter) {
        next.clear();
        for (std::uint8_t s : seq) {
            const std::vector<double>& word = s ? rule.word1 : rule.word0;
            if (next.size() + word.size() > length_cap)
                throw resource_limit_error(
                    "sequence at iteration " + std::to_string(iter) +
                    " exceeds length cap " + std::to_string(length_cap));
            for (double w : word) {
                const double u = rng::uniform(seed, run, static_cast<std::uint64_t>(iter),
                                              static_cast<std::uint64_t>(next.size()));
                next.push_back(u < w ? 1 : 0);
            }
        }
        seq.swap(next);
    }
    return seq;
}

// Modeled sequence length k^i, saturated so cap checks cannot overflow.
std::size_t modeled_length(int i, int k) {
    std::size_t n = 1;
    for (int j = 0; j < i; ++j) {
        if (n > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(k))
            return std::numeric_limits<std::size_t>::max();
        n *= static_cast<std::size_t>(k);
    }
    return n;
}

}  // namespace

SubstitutionRule preset(const std::string& name, int k, double p) {
    if (name == "cantor") return {{0.0, 0.0, 0.0}, {1.0, 0.0, 1.0}};
    if (name == "morse_thue") return {{0.0, 1.0}, {1.0, 0.0}};
    if (name == "fibonacci") return {{1.0}, {1.0, 0.0}};
    if (name == "mandelbrot") {
        RuleParams params{k, p};
        validate(params);
        return {std::vector<double>(static_cast<std::size_t>(k), 0.0),
                std::vector<double>(static_cast<std::size_t>(k), p)};
    }
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected cantor, morse_thue, fibonacci or mandelbrot)");
}

bool is_deterministic(const SubstitutionRule& rule) {
    check_rule(rule);
    for (double w : rule.word0)
        if (w != 0.0 && w != 1.0) return false;
    for (double w : rule.word1)
        if (w != 0.0 && w != 1.0) return false;
    return true;
}

std::vector<std::uint8_t> iterate_sequence(const SubstitutionRule& rule,
                                           int seed_symbol, int i,
                                           std::uint64_t rng_seed,
                                           std::size_t length_cap) {
    check_rule(rule);
    return grow(rule, seed_symbol, i, rng_seed, 0, length_cap);
}

std::vector<std::uint8_t> preset_sequence(const std::string& name, int index,
                                          int k, double p, std::uint64_t rng_seed,
                                          std::size_t length_cap) {
    const SubstitutionRule rule = preset(name, k, p);
    int applications = index;
    int seed_symbol = 1;
    if (name == "fibonacci") {
        if (index < 1)
            throw std::invalid_argument("fibonacci generations are numbered from 1");
        applications = index - 1;
        seed_symbol = 0;
    } else if (name == "morse_thue") {
        seed_symbol = 0;
    }
    return grow(rule, seed_symbol, applications, rng_seed, 0, length_cap);
}

std::vector<std::uint8_t> kronecker_expand(const std::vector<std::uint8_t>& generator,
                                           const std::vector<std::uint8_t>& v) {
    if (generator.empty()) throw std::invalid_argument("empty generator");
    for (std::uint8_t s : generator)
        if (s > 1) throw std::invalid_argument("generator symbols must be 0 or 1");
    std::vector<std::uint8_t> out;
    out.reserve(generator.size() * v.size());
    for (std::uint8_t s : v) {
        if (s > 1) throw std::invalid_argument("sequence symbols must be 0 or 1");
        if (s)
            out.insert(out.end(), generator.begin(), generator.end());
        else
            out.insert(out.end(), generator.size(), 0);
    }
    return out;
}

EnsembleHistogram ensemble_counts(const RuleParams& params, int i, long long runs,
                                  std::uint64_t rng_seed, SimulationMode mode,
                                  std::size_t length_cap) {
    validate(params);
    if (i < 0) throw std::invalid_argument("ensemble_counts: iteration must be >= 0");
    if (runs < 1) throw std::invalid_argument("ensemble_counts: needs at least one run");
    if (modeled_length(i, params.k) > length_cap)
        throw resource_limit_error("ensemble_counts: k^i exceeds length cap " +
                                   std::to_string(length_cap));

    EnsembleHistogram hist;
    hist.iteration = i;
    hist.params = params;
    hist.runs = runs;
    hist.seed = rng_seed;

    if (mode == SimulationMode::full_sequence) {
        const SubstitutionRule rule = preset("mandelbrot", params.k, params.p);
        for (long long run = 0; run < runs; ++run) {
            const std::vector<std::uint8_t> seq =
                grow(rule, 1, i, rng_seed, static_cast<std::uint64_t>(run), length_cap);
            long long ones = 0;
            for (std::uint8_t s : seq) ones += s;
            ++hist.counts[ones];
        }
        return hist;
    }

    // Count-only: zeros stay zero, so per iteration only the ones of the
    // previous sequence draw offspring, each a Bin(k, p) via inverse CDF.
    const Eigen::VectorXd pmf = binomial_pmf(params.k, params.p);
    std::vector<double> cdf(static_cast<std::size_t>(params.k) + 1);
    double acc = 0.0;
    for (int x = 0; x <= params.k; ++x) {
        acc += pmf[x];
        cdf[static_cast<std::size_t>(x)] = acc;
    }

    for (long long run = 0; run < runs; ++run) {
        long long ones = 1;
        for (int iter = 1; iter <= i; ++iter) {
            long long next = 0;
            for (long long s = 0; s < ones; ++s) {
                const double u = rng::uniform(rng_seed, static_cast<std::uint64_t>(run),
                                              static_cast<std::uint64_t>(iter),
                                              static_cast<std::uint64_t>(s));
                int x = 0;
                while (x < params.k && u >= cdf[static_cast<std::size_t>(x)]) ++x;
                next += x;
            }
            ones = next;
            if (ones == 0) break;
        }
        ++hist.counts[ones];
    }
    return hist;
}

EmpiricalStats empirical_stats(const EnsembleHistogram& hist) {
    if (hist.runs < 1) throw std::invalid_argument("empirical_stats: empty histogram");
    long long total = 0;
    for (const auto& [x, c] : hist.counts) total += c;
    if (total != hist.runs)
        throw std::invalid_argument("empirical_stats: histogram counts do not sum to runs");

    EmpiricalStats stats;
    KahanAccumulator mean_acc;
    for (const auto& [x, c] : hist.counts)
        mean_acc.add(static_cast<double>(x) * static_cast<double>(c));
    stats.mean = mean_acc.value() / static_cast<double>(total);

    if (total > 1) {
        KahanAccumulator var_acc;
        for (const auto& [x, c] : hist.counts) {
            const double d = static_cast<double>(x) - stats.mean;
            var_acc.add(d * d * static_cast<double>(c));
        }
        stats.variance = var_acc.value() / (static_cast<double>(total) - 1.0);
    } else {
        stats.variance = std::numeric_limits<double>::quiet_NaN();
    }

    double length = 1.0;
    for (int step = 0; step < hist.iteration; ++step) length *= hist.params.k;
    KahanAccumulator ent_acc;
    for (const auto& [x, c] : hist.counts) {
        const double r = static_cast<double>(x) / length;
        double h = 0.0;
        if (r > 0.0 && r < 1.0)
            h = -(r * std::log2(r) + (1.0 - r) * std::log2(1.0 - r));
        ent_acc.add(h * static_cast<double>(c));
    }
    stats.mean_entropy = ent_acc.value() / static_cast<double>(total);
    return stats;
}

double total_variation(const EnsembleHistogram& hist, const CountDistribution& dist) {
    if (hist.params.k != dist.k || hist.iteration != dist.iteration)
        throw std::invalid_argument("total_variation: histogram and distribution "
                                    "describe different ensembles");
    if (hist.runs < 1) throw std::invalid_argument("total_variation: empty histogram");

    const double n = static_cast<double>(hist.runs);
    KahanAccumulator l1;
    auto it = hist.counts.begin();
    for (Eigen::Index x = 0; x < dist.probs.size(); ++x) {
        double emp = 0.0;
        if (it != hist.counts.end() && it->first == static_cast<long long>(x)) {
            emp = static_cast<double>(it->second) / n;
            ++it;
        }
        l1.add(std::abs(emp - dist.probs[x]));
    }
    for (; it != hist.counts.end(); ++it)
        l1.add(static_cast<double>(it->second) / n);
    return 0.5 * l1.value();
}

}  // namespace randsubst
