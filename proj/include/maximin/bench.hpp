/**
 * @file bench.hpp
 * @brief Experiment harness comparing the SDP-based rounding (algorithm 1)
 * with the relaxation-free rounding (algorithm 2) on random instances.
 *
 * Sweeps:
 *   - MSweep: p = 3, n = 20, m in {10, 12, ..., 30}. One n x 220 uniform
 *     [-1,1] matrix is drawn and cut into consecutive column blocks of sizes
 *     10, 12, ..., 30 (block k is the point set for the k-th m).
 *   - PSweep: m = 30, n = 20, p in {2, 3, 5, 10, 20, 50, 100, 200, 500, 800,
 *     1000}, all on one n x 30 matrix.
 *   - Single: one instance (from a file or drawn), one cell.
 *
 * Each cell solves the relaxation once, then runs both algorithms `runs`
 * times. Run r of both algorithms uses the same derived seed, so the pair is
 * a like-for-like comparison.
 */

#ifndef MAXIMIN_BENCH_HPP
#define MAXIMIN_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "maximin/core.hpp"
#include "maximin/oracle.hpp"
#include "maximin/rng.hpp"
#include "maximin/sdp_relaxation.hpp"
#include "maximin/sign_rounding.hpp"

namespace maximin {

enum class Mode { MSweep, PSweep, Single };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::MSweep: return "msweep";
        case Mode::PSweep: return "psweep";
        case Mode::Single: return "single";
    }
    return "?";
}

enum class AlgorithmChoice { One, Two, Both };

struct ExperimentConfig {
    Mode mode = Mode::MSweep;
    std::size_t n = 20;
    std::vector<std::size_t> m_list{10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
    std::vector<NormExponent> p_list{NormExponent(3.0)};
    double rho = 0.9999;
    int runs_per_cell = 20;
    std::uint64_t seed = 0;
    bool with_oracle = false;
    AlgorithmChoice algorithms = AlgorithmChoice::Both;
    SdpOptions sdp;
    std::uint64_t max_trials = kDefaultMaxTrials;
    /// Single mode: use this instance instead of drawing one.
    std::optional<ProblemInstance> instance;
    std::string output_path;

    static ExperimentConfig msweep() { return {}; }

    static ExperimentConfig psweep() {
        ExperimentConfig c;
        c.mode = Mode::PSweep;
        c.m_list = {30};
        c.p_list.clear();
        for (double p : {2, 3, 5, 10, 20, 50, 100, 200, 500, 800, 1000}) c.p_list.emplace_back(p);
        return c;
    }

    static ExperimentConfig single(std::size_t n, std::size_t m, NormExponent p) {
        ExperimentConfig c;
        c.mode = Mode::Single;
        c.n = n;
        c.m_list = {m};
        c.p_list = {p};
        return c;
    }

    static ExperimentConfig single(ProblemInstance inst) {
        ExperimentConfig c = single(inst.n(), inst.m(), inst.p());
        c.instance = std::move(inst);
        return c;
    }

    void validate() const {
        if (runs_per_cell < 1) throw std::invalid_argument("config: runs must be >= 1");
        if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("config: rho must lie in (0,1)");
        if (n == 0) throw std::invalid_argument("config: n must be positive");
        if (m_list.empty() || p_list.empty()) throw std::invalid_argument("config: empty m or p list");
        for (std::size_t m : m_list)
            if (m == 0) throw std::invalid_argument("config: m must be positive");
        for (NormExponent p : p_list)
            if (!(p.value() >= 2.0)) throw std::invalid_argument("config: p must be >= 2 or inf");
        if (mode == Mode::PSweep && m_list.size() != 1) throw std::invalid_argument("config: psweep takes one m");
        if (mode == Mode::MSweep && p_list.size() != 1) throw std::invalid_argument("config: msweep takes one p");
        if (mode == Mode::Single && (m_list.size() != 1 || p_list.size() != 1))
            throw std::invalid_argument("config: single mode takes one m and one p");
        if (instance && mode != Mode::Single) throw std::invalid_argument("config: an instance file needs single mode");
    }
};

/// One (m, p) cell and its instance.
struct Cell {
    std::size_t index;
    ProblemInstance instance;
};

/// Uniform [-1,1] points drawn point by point (column-major in an n x count matrix).
inline std::vector<Vector> draw_points(Xoshiro256& gen, std::size_t n, std::size_t count) {
    std::vector<Vector> pts(count, Vector(n));
    for (auto& pt : pts)
        for (double& v : pt) v = gen.uniform(-1.0, 1.0);
    return pts;
}

/// Stream index reserved for instance generation; run streams use 1, 2, ...
inline constexpr std::uint64_t kInstanceStream = 0;

inline std::vector<Cell> generate_instances(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<Cell> cells;
    if (cfg.instance) {
        cells.push_back({0, *cfg.instance});
        return cells;
    }
    Xoshiro256 gen(derive_seed(cfg.seed, kInstanceStream));
    if (cfg.mode == Mode::PSweep) {
        const auto pts = draw_points(gen, cfg.n, cfg.m_list.front());
        for (NormExponent p : cfg.p_list) cells.push_back({cells.size(), ProblemInstance(cfg.n, p, pts)});
        return cells;
    }
    std::size_t total = 0;
    for (std::size_t m : cfg.m_list) total += m;
    const auto pts = draw_points(gen, cfg.n, total);
    std::size_t offset = 0;
    for (std::size_t m : cfg.m_list) {
        std::vector<Vector> block(pts.begin() + static_cast<std::ptrdiff_t>(offset),
                                  pts.begin() + static_cast<std::ptrdiff_t>(offset + m));
        offset += m;
        cells.push_back({cells.size(), ProblemInstance(cfg.n, cfg.p_list.front(), std::move(block))});
    }
    return cells;
}

struct ExperimentRecord {
    Mode mode = Mode::Single;
    std::size_t cell = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    NormExponent p;
    double rho = 0.0;
    int run = 0;
    int algorithm = 0;  ///< 1 or 2
    double objective = 0.0;
    std::uint64_t trials = 0;
    double certified_ratio = 0.0;  ///< f(x~) / v(SDP)
    double gamma1 = 0.0;
    bool sdp_converged = false;
    double sdp_objective = 0.0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::optional<double> oracle_value;
    std::optional<bool> bound_certified;  ///< algorithm 2 only
};

/// Resolution for the --with-oracle grid: dyadic, about 10^5 .. 10^6 nodes.
inline double default_oracle_resolution(std::size_t n) {
    switch (n) {
        case 1: return std::ldexp(1.0, -16);
        case 2: return std::ldexp(1.0, -9);
        case 3: return std::ldexp(1.0, -6);
        default: return std::ldexp(1.0, -4);
    }
}

inline std::uint64_t run_seed(std::uint64_t seed, std::size_t cell, int run) {
    return derive_seed(derive_seed(seed, cell + 1), static_cast<std::uint64_t>(run));
}

/**
 * @brief Runs every cell. SDP non-convergence is recorded, not fatal;
 * BudgetExhausted and NumericalError propagate.
 */
inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
    const auto cells = generate_instances(cfg);
    std::vector<ExperimentRecord> records;
    using Clock = std::chrono::steady_clock;
    const bool run1 = cfg.algorithms != AlgorithmChoice::Two;
    const bool run2 = cfg.algorithms != AlgorithmChoice::One;

    for (const Cell& cell : cells) {
        const ProblemInstance& inst = cell.instance;
        const SdpSolution sdp = solve_sdp(inst, cfg.sdp);
        const double ratio = bound_constant(inst.n(), inst.m(), cfg.rho).ratio;
        std::optional<OracleResult> oracle;
        if (cfg.with_oracle && inst.n() <= kOracleMaxDimension)
            oracle = grid_search(inst, default_oracle_resolution(inst.n()), true);

        for (int run = 0; run < cfg.runs_per_cell; ++run) {
            const std::uint64_t seed = run_seed(cfg.seed, cell.index, run);
            for (int alg : {1, 2}) {
                if ((alg == 1 && !run1) || (alg == 2 && !run2)) continue;
                SignSampler sampler(seed, cfg.max_trials);
                const auto t0 = Clock::now();
                auto [cand, rep] = alg == 1 ? sdp_rounding(inst, sdp, cfg.rho, sampler)
                                            : sign_rounding(inst, cfg.rho, sampler);
                ExperimentRecord r;
                r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
                r.mode = cfg.mode;
                r.cell = cell.index;
                r.n = inst.n();
                r.m = inst.m();
                r.p = inst.p();
                r.rho = cfg.rho;
                r.run = run;
                r.algorithm = alg;
                r.objective = cand.objective;
                r.trials = rep.trials;
                r.certified_ratio = sdp.objective > 0.0 ? cand.objective / sdp.objective : 0.0;
                r.gamma1 = sdp.gamma1;
                r.sdp_converged = sdp.diagnostics.converged;
                r.sdp_objective = sdp.objective;
                r.seed = seed;
                if (oracle) {
                    r.oracle_value = oracle->value;
                    if (alg == 2) r.bound_certified = certify_bound(rep, oracle->value, ratio).holds;
                }
                records.push_back(std::move(r));
            }
        }
    }
    std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
        return std::tie(a.cell, a.run, a.algorithm) < std::tie(b.cell, b.run, b.algorithm);
    });
    return records;
}

/// Shortest round-trip decimal form of a double.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline bool records_have_oracle(const std::vector<ExperimentRecord>& records) {
    return std::any_of(records.begin(), records.end(), [](const auto& r) { return r.oracle_value.has_value(); });
}

/// One row per record. Wall time is left out so that equal configs give equal bytes.
inline void write_records_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
    const bool oracle = records_have_oracle(records);
    os << "mode,n,m,p,rho,run,algorithm,objective,trials,certified_ratio,gamma1,sdp_converged,seed";
    if (oracle) os << ",oracle_value,bound_certified";
    os << '\n';
    for (const auto& r : records) {
        os << to_string(r.mode) << ',' << r.n << ',' << r.m << ',' << r.p.to_string() << ',' << format_number(r.rho)
           << ',' << r.run << ',' << r.algorithm << ',' << format_number(r.objective) << ',' << r.trials << ','
           << format_number(r.certified_ratio) << ',' << format_number(r.gamma1) << ','
           << (r.sdp_converged ? "true" : "false") << ',' << r.seed;
        if (oracle) {
            os << ',' << (r.oracle_value ? format_number(*r.oracle_value) : "");
            os << ',' << (r.bound_certified ? (*r.bound_certified ? "true" : "false") : "");
        }
        os << '\n';
    }
}

struct CellSummary {
    Mode mode = Mode::Single;
    std::size_t cell = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    NormExponent p;
    int algorithm = 0;
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double mean_trials = 0.0;
    /// Share of paired runs this algorithm wins (ties count 1/2); NaN when
    /// the other algorithm was not run.
    double win_rate = std::numeric_limits<double>::quiet_NaN();
    bool sdp_converged = false;
    Vector objectives;  ///< by run index
};

inline std::vector<CellSummary> summarize(const std::vector<ExperimentRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");
    std::map<std::pair<std::size_t, int>, CellSummary> groups;
    std::map<std::pair<std::size_t, int>, std::map<int, double>> by_run;
    for (const auto& r : records) {
        auto& g = groups[{r.cell, r.algorithm}];
        g.mode = r.mode;
        g.cell = r.cell;
        g.n = r.n;
        g.m = r.m;
        g.p = r.p;
        g.algorithm = r.algorithm;
        g.sdp_converged = r.sdp_converged;
        g.mean_trials += static_cast<double>(r.trials);
        by_run[{r.cell, r.algorithm}][r.run] = r.objective;
    }
    std::vector<CellSummary> out;
    for (auto& [key, g] : groups) {
        const auto& runs = by_run[key];
        for (const auto& [run, obj] : runs) g.objectives.push_back(obj);
        g.count = g.objectives.size();
        Vector sorted = g.objectives;
        std::sort(sorted.begin(), sorted.end());
        g.min = sorted.front();
        g.max = sorted.back();
        const std::size_t h = sorted.size() / 2;
        g.median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
        double sum = 0.0;
        for (double v : g.objectives) sum += v;
        g.mean = sum / static_cast<double>(g.count);
        g.mean_trials /= static_cast<double>(g.count);

        const auto other = by_run.find({key.first, 3 - key.second});
        if (other != by_run.end()) {
            double wins = 0.0;
            std::size_t pairs = 0;
            for (const auto& [run, obj] : runs) {
                const auto it = other->second.find(run);
                if (it == other->second.end()) continue;
                ++pairs;
                wins += obj > it->second ? 1.0 : (obj == it->second ? 0.5 : 0.0);
            }
            if (pairs > 0) g.win_rate = wins / static_cast<double>(pairs);
        }
        out.push_back(std::move(g));
    }
    return out;
}

/// Long format: one row per cell x algorithm x statistic.
inline void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& summary) {
    os << "mode,n,m,p,algorithm,statistic,value\n";
    for (const auto& s : summary) {
        const std::pair<const char*, double> stats[] = {
            {"count", static_cast<double>(s.count)}, {"mean", s.mean}, {"median", s.median}, {"min", s.min},
            {"max", s.max}, {"mean_trials", s.mean_trials}, {"win_rate", s.win_rate},
            {"sdp_converged", s.sdp_converged ? 1.0 : 0.0}};
        for (const auto& [name, value] : stats)
            os << to_string(s.mode) << ',' << s.n << ',' << s.m << ',' << s.p.to_string() << ',' << s.algorithm << ','
               << name << ',' << format_number(value) << '\n';
    }
}

/// Whitespace-separated rows "x algorithm f_1 ... f_runs", x = m (msweep) or p.
inline void write_plot_data(std::ostream& os, const std::vector<CellSummary>& summary) {
    os << "# x algorithm objectives...\n";
    for (const auto& s : summary) {
        os << (s.mode == Mode::PSweep ? s.p.to_string() : std::to_string(s.m)) << ' ' << s.algorithm;
        for (double v : s.objectives) os << ' ' << format_number(v);
        os << '\n';
    }
}

/// Per-sweep tally of cells where algorithm 2 has the higher mean objective.
struct SweepVerdict {
    std::size_t cells = 0;
    std::size_t wins = 0;      ///< among converged cells
    std::size_t excluded = 0;  ///< cells whose relaxation did not converge
};

inline SweepVerdict compare_means(const std::vector<CellSummary>& summary) {
    std::map<std::size_t, std::pair<const CellSummary*, const CellSummary*>> cells;
    for (const auto& s : summary) (s.algorithm == 1 ? cells[s.cell].first : cells[s.cell].second) = &s;
    SweepVerdict v;
    for (const auto& [idx, pr] : cells) {
        if (!pr.first || !pr.second) continue;
        ++v.cells;
        if (!pr.first->sdp_converged) {
            ++v.excluded;
            continue;
        }
        if (pr.second->mean > pr.first->mean) ++v.wins;
    }
    return v;
}

}  // namespace maximin

#endif  // MAXIMIN_BENCH_HPP
