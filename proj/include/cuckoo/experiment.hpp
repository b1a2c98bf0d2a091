#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <mutex>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cuckoo/analytic.hpp"
#include "cuckoo/cuckoo_table.hpp"
#include "cuckoo/hypergraph.hpp"
#include "cuckoo/orientation.hpp"
#include "cuckoo/rng.hpp"

// Monte Carlo harness: single trials, load sweeps, empirical threshold
// estimation by bisection on the load, core-statistics validation, and CSV
// emission. Trial i of a run always uses derive_seed(master_seed, i), so
// results are identical no matter how trials are scheduled across workers.

namespace cuckoo {

enum class Model { multigraph, simple, binomial, cloning };

inline const char* to_string(Model model) {
    switch (model) {
        case Model::multigraph: return "multigraph";
        case Model::simple: return "simple";
        case Model::binomial: return "binomial";
        case Model::cloning: return "cloning";
    }
    return "unknown";
}

inline Model model_from_string(std::string_view name) {
    if (name == "multigraph") return Model::multigraph;
    if (name == "simple") return Model::simple;
    if (name == "binomial") return Model::binomial;
    if (name == "cloning") return Model::cloning;
    throw std::invalid_argument("unknown model: " + std::string(name));
}

struct TrialRecord {
    int k = 0;
    std::uint32_t n = 0;
    double c = 0.0;  // load, items per slot
    std::uint64_t seed = 0;
    Model model = Model::simple;
    bool orientable = false;
    std::size_t matching_size = 0;
    std::size_t core_n2 = 0;
    std::size_t core_m2 = 0;
    double elapsed_ms = 0.0;
};

namespace detail {

/// Runs fn(i) for i in [0, count) on `threads` workers (0 = hardware count).
/// Index-based work split; the first worker exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& worker : pool) worker.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline double binomial_edge_probability(int k, std::uint32_t n, double c) {
    // p = ck / C(n-1, k-1)
    double choose = 1.0;
    for (int i = 1; i <= k - 1; ++i)
        choose *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return c * k / choose;
}

inline void append_significant(std::string& out, double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    out += buffer;
}

} // namespace detail

/// One Monte Carlo trial: generate at load c, peel the 2-core, run the
/// matching, time it.
inline TrialRecord run_trial(int k, std::uint32_t n, double c, std::uint64_t seed,
                             Model model) {
    if (n < static_cast<std::uint32_t>(k))
        throw std::invalid_argument("run_trial: requires n >= k");
    const auto m = static_cast<std::size_t>(c * n);
    const auto start = std::chrono::steady_clock::now();
    Hypergraph graph = [&] {
        switch (model) {
            case Model::multigraph: return gen_multigraph(n, m, k, seed);
            case Model::simple: return gen_simple(n, m, k, seed);
            case Model::binomial:
                return gen_binomial(n, detail::binomial_edge_probability(k, n, c), k, seed);
            case Model::cloning: break;
        }
        throw std::invalid_argument("run_trial: model must be multigraph, simple or binomial");
    }();
    const CoreSubgraph core = peel_core(graph);
    const MatchingResult matching = max_matching(graph);
    const auto stop = std::chrono::steady_clock::now();

    TrialRecord record;
    record.k = k;
    record.n = n;
    record.c = c;
    record.seed = seed;
    record.model = model;
    record.matching_size = matching.size;
    record.orientable = matching.size == graph.edge_count();
    record.core_n2 = core.n2;
    record.core_m2 = core.m2;
    record.elapsed_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();
    return record;
}

struct SweepResult {
    std::vector<double> c_values;
    std::vector<std::uint32_t> successes;
    std::vector<std::uint32_t> trials;
    double transition_midpoint = 0.0;  // isotonic-smoothed 50% crossing
    std::vector<TrialRecord> records;  // trial-index order
};

namespace detail {

/// Pool-adjacent-violators fit of a non-increasing sequence to the rates.
inline std::vector<double> isotonic_non_increasing(std::span<const double> rates) {
    std::vector<double> level;
    std::vector<double> weight;
    for (const double rate : rates) {
        level.push_back(rate);
        weight.push_back(1.0);
        while (level.size() > 1 && level[level.size() - 2] < level.back()) {
            const double w = weight.back() + weight[weight.size() - 2];
            const double merged =
                (level.back() * weight.back() + level[level.size() - 2] * weight[weight.size() - 2]) / w;
            level.pop_back();
            weight.pop_back();
            level.back() = merged;
            weight.back() = w;
        }
    }
    std::vector<double> fitted;
    for (std::size_t block = 0; block < level.size(); ++block)
        fitted.insert(fitted.end(), static_cast<std::size_t>(weight[block]), level[block]);
    return fitted;
}

inline double crossing_midpoint(std::span<const double> c_values,
                                std::span<const double> fitted) {
    if (fitted.empty()) return 0.0;
    if (fitted.front() <= 0.5) return c_values.front();
    for (std::size_t i = 0; i + 1 < fitted.size(); ++i) {
        if (fitted[i] > 0.5 && fitted[i + 1] <= 0.5) {
            const double span = fitted[i] - fitted[i + 1];
            const double t = span > 0.0 ? (fitted[i] - 0.5) / span : 0.5;
            return c_values[i] + t * (c_values[i + 1] - c_values[i]);
        }
    }
    return c_values.back();
}

} // namespace detail

/// Success counts over a c-grid. Deterministic for a given master seed, and
/// identical whether run on 1 or many workers.
inline SweepResult sweep(int k, std::uint32_t n, double c_min, double c_max, double step,
                         std::uint32_t trials_per_c, std::uint64_t master_seed, Model model,
                         unsigned threads = 0) {
    if (c_min > c_max) throw std::invalid_argument("sweep: requires c_min <= c_max");
    if (step <= 0.0) throw std::invalid_argument("sweep: requires step > 0");
    SweepResult result;
    for (double c = c_min; c <= c_max + 0.5 * step; c += step) result.c_values.push_back(c);
    const std::size_t total = result.c_values.size() * trials_per_c;
    result.records.resize(total);
    detail::parallel_for(total, threads, [&](std::size_t t) {
        const double c = result.c_values[t / trials_per_c];
        result.records[t] = run_trial(k, n, c, derive_seed(master_seed, t), model);
    });
    result.successes.assign(result.c_values.size(), 0);
    result.trials.assign(result.c_values.size(), trials_per_c);
    for (std::size_t t = 0; t < total; ++t)
        if (result.records[t].orientable) ++result.successes[t / trials_per_c];
    std::vector<double> rates;
    for (std::size_t i = 0; i < result.c_values.size(); ++i)
        rates.push_back(trials_per_c == 0 ? 0.0
                                          : static_cast<double>(result.successes[i]) / trials_per_c);
    const auto fitted = detail::isotonic_non_increasing(rates);
    result.transition_midpoint = detail::crossing_midpoint(result.c_values, fitted);
    return result;
}

struct ThresholdEvaluation {
    double c = 0.0;
    std::uint32_t successes = 0;
    std::uint32_t trials = 0;
    double wilson_low = 0.0;  // 95% interval, reported but never steering
    double wilson_high = 0.0;
};

struct ThresholdEstimate {
    double estimate = 0.0;
    std::vector<ThresholdEvaluation> evaluations;
};

/// Bisection on the load over [1/2, 1], steering toward 50% offline success.
inline ThresholdEstimate estimate_threshold_detailed(int k, std::uint32_t n,
                                                     std::uint32_t trials, double tolerance,
                                                     std::uint64_t master_seed,
                                                     Model model = Model::simple,
                                                     unsigned threads = 0) {
    if (trials == 0) throw std::invalid_argument("estimate_threshold: requires trials >= 1");
    if (tolerance < 1.0 / n)
        throw std::domain_error("estimate_threshold: tolerance must be >= 1/n");
    ThresholdEstimate result;
    double lo = 0.5, hi = 1.0;
    std::uint64_t evaluation = 0;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        std::vector<std::uint8_t> outcome(trials, 0);
        detail::parallel_for(trials, threads, [&](std::size_t t) {
            const std::uint64_t seed = derive_seed(master_seed, evaluation * trials + t);
            outcome[t] = run_trial(k, n, mid, seed, model).orientable ? 1 : 0;
        });
        std::uint32_t successes = 0;
        for (const std::uint8_t ok : outcome) successes += ok;
        const double p_hat = static_cast<double>(successes) / trials;
        constexpr double z = 1.959963984540054;  // 95%
        const double z2n = z * z / trials;
        const double center = (p_hat + 0.5 * z2n) / (1.0 + z2n);
        const double half =
            z * std::sqrt(p_hat * (1.0 - p_hat) / trials + 0.25 * z2n / trials) / (1.0 + z2n);
        result.evaluations.push_back(
            ThresholdEvaluation{mid, successes, trials, center - half, center + half});
        // A strict majority is required to call the load feasible; an exact
        // tie counts against it.
        if (2 * static_cast<std::uint64_t>(successes) > trials)
            lo = mid;
        else
            hi = mid;
        ++evaluation;
    }
    result.estimate = 0.5 * (lo + hi);
    return result;
}

inline double estimate_threshold(int k, std::uint32_t n, std::uint32_t trials,
                                 double tolerance, std::uint64_t master_seed,
                                 Model model = Model::simple, unsigned threads = 0) {
    return estimate_threshold_detailed(k, n, trials, tolerance, master_seed, model, threads)
        .estimate;
}

struct CoreStatsSummary {
    int k = 0;
    std::uint32_t n = 0;
    double c = 0.0;
    std::uint32_t trials = 0;
    double mean_n2_fraction = 0.0;
    double sd_n2_fraction = 0.0;
    double mean_m2_fraction = 0.0;
    double sd_m2_fraction = 0.0;
    double predicted_vertex_fraction = 0.0;
    double predicted_edge_fraction = 0.0;
    double vertex_deviation = 0.0;
    double edge_deviation = 0.0;
    std::uint32_t cores_denser_than_1 = 0;  // trials with m2 > n2
    std::uint32_t cores_sparser_than_1 = 0; // trials with 0 < n2 and m2 < n2
    std::uint32_t empty_cores = 0;
};

/// Compares empirical core sizes against the fixed-point predictions.
inline CoreStatsSummary core_stats_experiment(int k, std::uint32_t n, double c,
                                              std::uint32_t trials, std::uint64_t master_seed,
                                              Model model = Model::simple,
                                              unsigned threads = 0) {
    CoreStatsSummary summary;
    summary.k = k;
    summary.n = n;
    summary.c = c;
    summary.trials = trials;
    const CoreFractions predicted = core_fractions(c, k);
    summary.predicted_vertex_fraction = predicted.vertex_fraction;
    summary.predicted_edge_fraction = predicted.edge_fraction;

    std::vector<double> n2_fraction(trials, 0.0), m2_fraction(trials, 0.0);
    std::vector<std::uint8_t> denser(trials, 0), sparser(trials, 0), empty(trials, 0);
    detail::parallel_for(trials, threads, [&](std::size_t t) {
        const TrialRecord record = run_trial(k, n, c, derive_seed(master_seed, t), model);
        n2_fraction[t] = static_cast<double>(record.core_n2) / n;
        m2_fraction[t] = static_cast<double>(record.core_m2) / n;
        denser[t] = record.core_m2 > record.core_n2 ? 1 : 0;
        sparser[t] = record.core_n2 > 0 && record.core_m2 < record.core_n2 ? 1 : 0;
        empty[t] = record.core_n2 == 0 ? 1 : 0;
    });
    double sum_n2 = 0.0, sum_m2 = 0.0;
    for (std::uint32_t t = 0; t < trials; ++t) {
        sum_n2 += n2_fraction[t];
        sum_m2 += m2_fraction[t];
        summary.cores_denser_than_1 += denser[t];
        summary.cores_sparser_than_1 += sparser[t];
        summary.empty_cores += empty[t];
    }
    if (trials > 0) {
        summary.mean_n2_fraction = sum_n2 / trials;
        summary.mean_m2_fraction = sum_m2 / trials;
        double var_n2 = 0.0, var_m2 = 0.0;
        for (std::uint32_t t = 0; t < trials; ++t) {
            var_n2 += (n2_fraction[t] - summary.mean_n2_fraction) *
                      (n2_fraction[t] - summary.mean_n2_fraction);
            var_m2 += (m2_fraction[t] - summary.mean_m2_fraction) *
                      (m2_fraction[t] - summary.mean_m2_fraction);
        }
        summary.sd_n2_fraction = std::sqrt(var_n2 / trials);
        summary.sd_m2_fraction = std::sqrt(var_m2 / trials);
    }
    summary.vertex_deviation =
        std::abs(summary.mean_n2_fraction - summary.predicted_vertex_fraction);
    summary.edge_deviation =
        std::abs(summary.mean_m2_fraction - summary.predicted_edge_fraction);
    return summary;
}

struct DuplicatePairSummary {
    double mean_pairs = 0.0;
    double expected_bound = 0.0;  // (cn)^2 / C(n,k)
    bool within_bound = false;    // mean <= 2x bound
};

/// Counts coincident edge pairs in the multigraph model across trials.
inline DuplicatePairSummary duplicate_edge_experiment(int k, std::uint32_t n, double c,
                                                      std::uint32_t trials,
                                                      std::uint64_t master_seed) {
    const auto m = static_cast<std::size_t>(c * n);
    std::uint64_t total_pairs = 0;
    for (std::uint32_t t = 0; t < trials; ++t) {
        const Hypergraph graph = gen_multigraph(n, m, k, derive_seed(master_seed, t));
        std::vector<std::vector<VertexId>> edges;
        edges.reserve(m);
        for (std::size_t e = 0; e < m; ++e) {
            const auto edge = graph.edge(e);
            edges.emplace_back(edge.begin(), edge.end());
        }
        std::sort(edges.begin(), edges.end());
        std::size_t run = 1;
        for (std::size_t e = 1; e <= edges.size(); ++e) {
            if (e < edges.size() && edges[e] == edges[e - 1]) {
                ++run;
            } else {
                total_pairs += run * (run - 1) / 2;
                run = 1;
            }
        }
    }
    DuplicatePairSummary summary;
    summary.mean_pairs = trials == 0 ? 0.0 : static_cast<double>(total_pairs) / trials;
    double choose = 1.0;
    for (int i = 1; i <= k; ++i)
        choose *= static_cast<double>(n - k + i) / static_cast<double>(i);
    const double cn = static_cast<double>(m);
    summary.expected_bound = cn * cn / choose;
    summary.within_bound = summary.mean_pairs <= 2.0 * summary.expected_bound;
    return summary;
}

struct OracleReport {
    std::uint64_t instances = 0;
    bool pass = true;
    std::string counterexample;  // serialized hypergraph + verdicts, empty if pass
};

/// Property check of the Hall reduction: orientability must coincide with the
/// absence of an over-dense subset on every instance. Cells cover
/// n in [k, n_max], m in [1, n+2], rotating through all distinct-vertex
/// generators (multigraph, simple, binomial at matched expected load).
inline OracleReport oracle_check(int k, VertexId n_max, std::uint32_t trials_per_cell,
                                 std::uint64_t master_seed) {
    if (n_max > 14)
        throw std::invalid_argument("oracle_check: strict-density oracle requires n_max <= 14");
    OracleReport report;
    std::uint64_t stream = 0;
    for (VertexId n = static_cast<VertexId>(k); n <= n_max; ++n) {
        for (std::size_t m = 1; m <= static_cast<std::size_t>(n) + 2; ++m) {
            for (std::uint32_t t = 0; t < trials_per_cell; ++t) {
                const std::uint64_t seed = derive_seed(master_seed, stream++);
                const double tuples =
                    static_cast<double>(detail::binomial_capped(n, k));
                const Hypergraph graph = [&] {
                    switch (t % 3) {
                        case 1:
                            if (m <= tuples) return gen_simple(n, m, k, seed);
                            break;
                        case 2:
                            return gen_binomial(n, std::min(1.0, m / tuples), k, seed);
                    }
                    return gen_multigraph(n, m, k, seed);
                }();
                const bool orientable = is_orientable(graph);
                const auto witness = brute_force_dense_subset(graph, /*strict=*/true);
                ++report.instances;
                if (orientable == witness.has_value()) {
                    report.pass = false;
                    std::ostringstream out;
                    out << "# counterexample: is_orientable=" << (orientable ? 1 : 0)
                        << " over_dense_witness=" << (witness.has_value() ? 1 : 0) << '\n';
                    if (witness.has_value()) {
                        out << "# witness U = {";
                        for (std::size_t i = 0; i < witness->vertex_set.size(); ++i)
                            out << (i ? "," : "") << witness->vertex_set[i];
                        out << "} e_U = " << witness->internal_edges << '\n';
                    }
                    write_hypergraph(out, graph);
                    report.counterexample = out.str();
                    return report;
                }
            }
        }
    }
    return report;
}

// CSV schema (bit-exact header, floats at 17 significant digits):
// k,n,c,seed,model,orientable,matching_size,core_n2,core_m2,elapsed_ms
//
// Deterministic mode produces byte-identical files across runs: it drops the
// timestamp comment line and zeroes the wall-clock column, which is the only
// field that varies between identically-seeded runs.

inline constexpr std::string_view kCsvHeader =
    "k,n,c,seed,model,orientable,matching_size,core_n2,core_m2,elapsed_ms";

inline void write_csv(std::ostream& out, std::span<const TrialRecord> records,
                      bool deterministic) {
    if (!deterministic) {
        const std::time_t now = std::time(nullptr);
        char stamp[64];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        out << "# generated " << stamp << '\n';
    }
    out << kCsvHeader << '\n';
    std::string line;
    for (const TrialRecord& record : records) {
        line.clear();
        line += std::to_string(record.k);
        line += ',';
        line += std::to_string(record.n);
        line += ',';
        detail::append_significant(line, record.c);
        line += ',';
        line += std::to_string(record.seed);
        line += ',';
        line += to_string(record.model);
        line += ',';
        line += record.orientable ? '1' : '0';
        line += ',';
        line += std::to_string(record.matching_size);
        line += ',';
        line += std::to_string(record.core_n2);
        line += ',';
        line += std::to_string(record.core_m2);
        line += ',';
        detail::append_significant(line, deterministic ? 0.0 : record.elapsed_ms);
        out << line << '\n';
    }
}

} // namespace cuckoo
