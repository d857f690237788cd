#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randsubst/dist_core.hpp"
#include "randsubst/entropy.hpp"
#include "randsubst/extrema.hpp"
#include "randsubst/moments.hpp"
#include "randsubst/params.hpp"
#include "randsubst/simulate.hpp"

using nlohmann::ordered_json;
using namespace randsubst;

namespace {

using Cell = std::variant<long long, double, std::string>;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<long long>(c))
        return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    return std::get<std::string>(c);
}

// Non-finite doubles have no JSON representation, so they go out as the
// strings "inf"/"-inf"/"nan" (matching the CSV text).
ordered_json cell_json(const Cell& c) {
    if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        if (std::isfinite(v)) return v;
        return format_double(v);
    }
    return std::get<std::string>(c);
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;
};

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << cell_text(row[c]);
        os << '\n';
    }
    if (!t.summary.empty()) {
        os << "# summary\n";
        for (const auto& [name, value] : t.summary)
            os << "# " << name << ',' << cell_text(value) << '\n';
    }
}

void write_json_table(std::ostream& os, const Table& t) {
    ordered_json doc;
    doc["rows"] = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json obj;
        for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = cell_json(row[c]);
        doc["rows"].push_back(std::move(obj));
    }
    if (!t.summary.empty()) {
        ordered_json s;
        for (const auto& [name, value] : t.summary) s[name] = cell_json(value);
        doc["summary"] = std::move(s);
    }
    os << doc.dump(2) << '\n';
}

struct CommonOpts {
    std::string format = "csv";
    std::string out;
    std::size_t support_cap = default_support_cap();
};

void add_common(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--format", c.format, "Output format (csv|json)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "Write to this file instead of stdout");
    sub->add_option("--support-cap", c.support_cap,
                    "Maximum number of support entries for exact distributions");
}

class OutputStream {
  public:
    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void emit(const CommonOpts& common, const Table& t) {
    OutputStream out(common.out);
    if (common.format == "json")
        write_json_table(out.get(), t);
    else
        write_csv(out.get(), t);
}

double parse_double(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
    return v;
}

// "--p" accepts a single probability or an inclusive start:stop:step grid.
std::vector<double> parse_p_values(const std::string& text) {
    auto check = [](double v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("p must lie in [0,1], got " + format_double(v));
        return v;
    };
    if (text.find(':') == std::string::npos) return {check(parse_double(text))};

    const std::size_t a = text.find(':');
    const std::size_t b = text.find(':', a + 1);
    if (b == std::string::npos || text.find(':', b + 1) != std::string::npos)
        throw std::invalid_argument("p grid must be start:stop:step, got '" + text + "'");
    const double start = check(parse_double(text.substr(0, a)));
    const double stop = check(parse_double(text.substr(a + 1, b - a - 1)));
    const double step = parse_double(text.substr(b + 1));
    if (!(step > 0.0)) throw std::invalid_argument("p grid step must be > 0");
    if (stop < start) throw std::invalid_argument("p grid needs start <= stop");

    const long long count = static_cast<long long>((stop - start) / step + 1e-9);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count) + 1);
    for (long long j = 0; j <= count; ++j) {
        double v = start + static_cast<double>(j) * step;
        if (v > 1.0 && v < 1.0 + 1e-9) v = 1.0;
        values.push_back(check(v));
    }
    return values;
}

// "--i" accepts a single iteration or an inclusive lo:hi range.
std::pair<int, int> parse_i_range(const std::string& text) {
    auto parse_int = [](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not an integer: '" + s + "'");
        }
        if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
        return v;
    };
    const std::size_t a = text.find(':');
    if (a == std::string::npos) {
        const int v = parse_int(text);
        return {v, v};
    }
    if (text.find(':', a + 1) != std::string::npos)
        throw std::invalid_argument("i range must be lo:hi, got '" + text + "'");
    const int lo = parse_int(text.substr(0, a));
    const int hi = parse_int(text.substr(a + 1));
    if (hi < lo) throw std::invalid_argument("i range is empty: '" + text + "'");
    return {lo, hi};
}

std::vector<int> parse_k_list(const std::string& text) {
    std::vector<int> ks;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string piece =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (piece.empty()) throw std::invalid_argument("empty entry in k list");
        std::size_t used = 0;
        int k = 0;
        try {
            k = std::stoi(piece, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not an integer: '" + piece + "'");
        }
        if (used != piece.size())
            throw std::invalid_argument("not an integer: '" + piece + "'");
        ks.push_back(k);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (ks.empty()) throw std::invalid_argument("empty k list");
    return ks;
}

void write_sequence(const CommonOpts& common, const std::vector<std::uint8_t>& seq) {
    OutputStream out(common.out);
    if (common.format == "json") {
        ordered_json doc;
        doc["sequence"] = ordered_json::array();
        for (std::uint8_t s : seq) doc["sequence"].push_back(static_cast<int>(s));
        out.get() << doc.dump(2) << '\n';
        return;
    }
    out.get() << '(';
    for (std::size_t j = 0; j < seq.size(); ++j)
        out.get() << (j ? "," : "") << static_cast<int>(seq[j]);
    out.get() << ")\n";
}

int run_dist(int k, int i, const std::string& p_text, const CommonOpts& common) {
    Table t;
    t.columns = {"iteration", "k", "p", "x", "prob"};
    for (double p : parse_p_values(p_text)) {
        const CountDistribution d = distribution(i, RuleParams{k, p}, common.support_cap);
        for (Eigen::Index x = 0; x < d.probs.size(); ++x)
            t.rows.push_back({static_cast<long long>(i), static_cast<long long>(k), p,
                              static_cast<long long>(x), d.probs[x]});
    }
    emit(common, t);
    return 0;
}

int run_moments(int k, int i, const std::string& p_text, const CommonOpts& common) {
    Table t;
    t.columns = {"p", "mean", "var", "sigma", "dispersion", "zeros_mean", "ratio"};
    for (double p : parse_p_values(p_text)) {
        const MomentSummary m = moments(i, RuleParams{k, p});
        t.rows.push_back({m.params.p, m.mean, m.variance, m.std_dev, m.dispersion,
                          m.zeros_mean, m.ones_zeros_ratio});
    }
    emit(common, t);
    return 0;
}

int run_entropy(int k, const std::string& i_text, const std::string& p_text,
                const CommonOpts& common) {
    const auto [i_lo, i_hi] = parse_i_range(i_text);
    const std::vector<double> ps = parse_p_values(p_text);
    Table t;
    t.columns = {"i", "p", "H_i", "h_i", "H_per_digit"};
    for (int i = i_lo; i <= i_hi; ++i) {
        const Eigen::VectorXd h_here = entropy_vector(i, k, common.support_cap);
        const Eigen::VectorXd h_next = entropy_vector(i + 1, k, common.support_cap);
        double length = 1.0;
        for (int step = 0; step < i; ++step) length *= k;
        for (double p : ps) {
            const RuleParams params{k, p};
            const CountDistribution here = distribution(i, params, common.support_cap);
            const CountDistribution next = step_distribution(here, params, common.support_cap);
            const double H = h_here.dot(here.probs);
            const double h = h_next.dot(next.probs) - H;
            t.rows.push_back({static_cast<long long>(i), p, H, h, H / length});
        }
    }
    emit(common, t);
    return 0;
}

int run_hvar(int k, const std::string& i_text, const std::string& p_text,
             const CommonOpts& common) {
    const auto [i_lo, i_hi] = parse_i_range(i_text);
    const std::vector<double> ps = parse_p_values(p_text);
    Table t;
    t.columns = {"i", "p", "VAR", "H", "is_p_r"};
    for (int i = i_lo; i <= i_hi; ++i) {
        const HVarCurve curve = hvar_curve(i, k, ps, common.support_cap);
        std::vector<HVarPoint> pts = curve.points;
        const Eigen::VectorXd h = entropy_vector(i, k, common.support_cap);
        const RuleParams at_r{k, curve.p_r};
        const HVarPoint r_point{curve.p_r, variance(i, at_r),
                                h.dot(distribution(i, at_r, common.support_cap).probs)};
        pts.push_back(r_point);
        std::sort(pts.begin(), pts.end(),
                  [](const HVarPoint& a, const HVarPoint& b) { return a.p < b.p; });
        for (const HVarPoint& pt : pts)
            t.rows.push_back({static_cast<long long>(i), pt.p, pt.variance,
                              pt.mean_entropy,
                              static_cast<long long>(pt.p == r_point.p &&
                                                     pt.variance == r_point.variance)});
    }
    emit(common, t);
    return 0;
}

int run_extrema(const std::string& k_text, const std::string& i_text,
                const std::string& out_path) {
    const auto [i_lo, i_hi] = parse_i_range(i_text);
    ordered_json doc;
    doc["fits"] = ordered_json::array();
    for (int k : parse_k_list(k_text)) {
        const FitResult fit = fit_root_curve(k, i_lo, i_hi);
        ordered_json f;
        f["k"] = fit.k;
        f["i_lo"] = fit.i_lo;
        f["i_hi"] = fit.i_hi;
        f["alpha"] = fit.alpha;
        f["beta"] = fit.beta;
        f["rss"] = fit.rss;
        f["roots"] = ordered_json::array();
        for (const auto& [i, root] : fit.roots) {
            ordered_json r;
            r["i"] = i;
            r["p_m"] = root;
            f["roots"].push_back(std::move(r));
        }
        doc["fits"].push_back(std::move(f));
    }
    OutputStream out(out_path);
    out.get() << doc.dump(2) << '\n';
    return 0;
}

int run_simulate(const std::string& preset_name, int k, const std::string& p_text,
                 int i, long long runs, std::uint64_t seed, const std::string& mode_text,
                 std::size_t length_cap, const CommonOpts& common) {
    const std::vector<double> ps = parse_p_values(p_text);
    if (ps.size() != 1)
        throw std::invalid_argument("simulate takes a single p, not a grid");
    const double p = ps.front();

    if (runs == 0) {
        write_sequence(common, preset_sequence(preset_name, i, k, p, seed, length_cap));
        return 0;
    }
    if (preset_name != "mandelbrot")
        throw std::invalid_argument("--runs draws an ensemble of the random rule; "
                                    "use --preset mandelbrot");
    const SimulationMode mode = mode_text == "full" ? SimulationMode::full_sequence
                                                    : SimulationMode::count_only;
    const RuleParams params{k, p};
    const EnsembleHistogram hist = ensemble_counts(params, i, runs, seed, mode, length_cap);
    const EmpiricalStats stats = empirical_stats(hist);

    std::optional<CountDistribution> exact;
    try {
        exact = distribution(i, params, common.support_cap);
    } catch (const resource_limit_error&) {
        // Exact reference is optional; the histogram stands on its own.
    }

    Table t;
    t.columns = {"x", "count", "empirical_prob"};
    if (exact) t.columns.push_back("exact_prob");
    for (const auto& [x, c] : hist.counts) {
        std::vector<Cell> row{x, c,
                              static_cast<double>(c) / static_cast<double>(hist.runs)};
        if (exact)
            row.push_back(x < exact->probs.size() ? exact->probs[x] : 0.0);
        t.rows.push_back(std::move(row));
    }

    t.summary.emplace_back("runs", static_cast<long long>(hist.runs));
    t.summary.emplace_back("seed", static_cast<long long>(hist.seed));
    t.summary.emplace_back("empirical_mean", stats.mean);
    t.summary.emplace_back("empirical_var", stats.variance);
    t.summary.emplace_back("empirical_entropy", stats.mean_entropy);
    if (exact) {
        t.summary.emplace_back("exact_mean", mean(i, params));
        t.summary.emplace_back("exact_var", variance(i, params));
        t.summary.emplace_back("exact_entropy", mean_entropy(i, params, common.support_cap));
        t.summary.emplace_back("tv_distance", total_variation(hist, *exact));
    }
    emit(common, t);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte Carlo statistics of sequences grown by random "
                 "constant-length substitutions"};
    app.require_subcommand(1);

    CLI::App* dist = app.add_subcommand("dist", "Exact distribution of the ones count");
    int dist_k = 2, dist_i = 7;
    std::string dist_p = "0.5";
    CommonOpts dist_common;
    dist->add_option("--k", dist_k, "Substitution length");
    dist->add_option("--i", dist_i, "Iteration");
    dist->add_option("--p", dist_p, "Fill probability (scalar or start:stop:step)");
    add_common(dist, dist_common);

    CLI::App* mom = app.add_subcommand("moments", "Closed-form moments over a p grid");
    int mom_k = 2, mom_i = 10;
    std::string mom_p = "0:1:0.001";
    CommonOpts mom_common;
    mom->add_option("--k", mom_k, "Substitution length");
    mom->add_option("--i", mom_i, "Iteration");
    mom->add_option("--p", mom_p, "Fill probability (scalar or start:stop:step)");
    add_common(mom, mom_common);

    CLI::App* ent = app.add_subcommand("entropy", "Mean entropy over iterations and p");
    int ent_k = 2;
    std::string ent_i = "1:10", ent_p = "0:1:0.01";
    CommonOpts ent_common;
    ent->add_option("--k", ent_k, "Substitution length");
    ent->add_option("--i", ent_i, "Iteration (scalar or lo:hi)");
    ent->add_option("--p", ent_p, "Fill probability (scalar or start:stop:step)");
    add_common(ent, ent_common);

    CLI::App* hvar = app.add_subcommand("hvar", "Entropy-variance parametric curves");
    int hvar_k = 2;
    std::string hvar_i = "1:10", hvar_p = "0:1:0.01";
    CommonOpts hvar_common;
    hvar->add_option("--k", hvar_k, "Substitution length");
    hvar->add_option("--i", hvar_i, "Iteration (scalar or lo:hi)");
    hvar->add_option("--p", hvar_p, "Fill probability (scalar or start:stop:step)");
    add_common(hvar, hvar_common);

    CLI::App* ext = app.add_subcommand("extrema",
                                       "Variance maxima and the fitted root curve (JSON)");
    std::string ext_k = "2", ext_i = "2:40", ext_out;
    ext->add_option("--k", ext_k, "Substitution lengths, comma separated");
    ext->add_option("--i", ext_i, "Iteration range lo:hi");
    ext->add_option("--out", ext_out, "Write to this file instead of stdout");

    CLI::App* sim = app.add_subcommand("simulate",
                                       "Sample sequences or ensemble histograms");
    std::string sim_preset = "mandelbrot", sim_p = "0.5", sim_mode = "count";
    int sim_k = 2, sim_i = 7;
    long long sim_runs = 0;
    std::uint64_t sim_seed = default_seed();
    std::size_t sim_length_cap = default_length_cap();
    CommonOpts sim_common;
    sim->add_option("--preset", sim_preset,
                    "cantor, morse_thue, fibonacci or mandelbrot");
    sim->add_option("--k", sim_k, "Substitution length (mandelbrot)");
    sim->add_option("--p", sim_p, "Fill probability (mandelbrot)");
    sim->add_option("--i", sim_i, "Iteration (fibonacci: generation number)");
    sim->add_option("--runs", sim_runs, "Ensemble size; omit to print one sequence")
        ->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--mode", sim_mode, "Ensemble bookkeeping (count|full)")
        ->check(CLI::IsMember({"count", "full"}));
    sim->add_option("--length-cap", sim_length_cap, "Maximum sequence length");
    add_common(sim, sim_common);

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(dist)) return run_dist(dist_k, dist_i, dist_p, dist_common);
        if (app.got_subcommand(mom)) return run_moments(mom_k, mom_i, mom_p, mom_common);
        if (app.got_subcommand(ent)) return run_entropy(ent_k, ent_i, ent_p, ent_common);
        if (app.got_subcommand(hvar))
            return run_hvar(hvar_k, hvar_i, hvar_p, hvar_common);
        if (app.got_subcommand(ext)) return run_extrema(ext_k, ext_i, ext_out);
        if (app.got_subcommand(sim))
            return run_simulate(sim_preset, sim_k, sim_p, sim_i, sim_runs, sim_seed,
                                sim_mode, sim_length_cap, sim_common);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const resource_limit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const convergence_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
