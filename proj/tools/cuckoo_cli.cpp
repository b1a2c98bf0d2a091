// Command-line front end: analytic tables, core peeling of hypergraph files,
// Monte Carlo sweeps, threshold estimation, core statistics, duplicate-pair
// checks, the Hall-equivalence oracle, and a runnable cuckoo table.
//
// Exit codes: 0 success, 1 invariant violation or counterexample, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuckoo/analytic.hpp"
#include "cuckoo/cuckoo_table.hpp"
#include "cuckoo/experiment.hpp"
#include "cuckoo/hypergraph.hpp"
#include "cuckoo/orientation.hpp"
#include "cuckoo/rng.hpp"

namespace {

using namespace cuckoo;

struct IntRange {
    int low = 0;
    int high = 0;
};

// Accepts "3" or "3..10".
IntRange parse_range(const std::string& text) {
    const auto dots = text.find("..");
    IntRange range;
    if (dots == std::string::npos) {
        range.low = range.high = std::stoi(text);
    } else {
        range.low = std::stoi(text.substr(0, dots));
        range.high = std::stoi(text.substr(dots + 2));
    }
    if (range.high < range.low) throw CLI::ValidationError("range upper bound below lower");
    return range;
}

void emit_csv(const std::string& path, const std::vector<TrialRecord>& records,
              bool deterministic) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_csv(out, records, deterministic);
}

int cmd_threshold(const std::string& k_range) {
    const IntRange range = parse_range(k_range);
    std::printf("k,xi_star,c_star,residual\n");
    for (int k = range.low; k <= range.high; ++k) {
        try {
            const ThresholdSolution t = threshold_c_star(k);
            std::printf("%d,%.17g,%.17g,%.3g\n", k, t.xi_star, t.c_star, t.residual);
        } catch (const std::domain_error& error) {
            std::printf("%d,error: %s\n", k, error.what());
        }
    }
    return 0;
}

int cmd_core(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open input file: " + in_path);
    const Hypergraph graph = read_hypergraph(in);
    const CoreSubgraph core = peel_core(graph);
    std::printf("n=%u m=%zu k=%d multiset=%d core_n2=%zu core_m2=%zu", graph.vertex_count(),
                graph.edge_count(), graph.arity(), graph.multiset_edges() ? 1 : 0, core.n2,
                core.m2);
    if (core.n2 > 0) std::printf(" core_density=%zu/%zu", core.m2, core.n2);
    if (!graph.multiset_edges()) {
        const MatchingResult matching = max_matching(graph);
        std::printf(" matching=%zu orientable=%d", matching.size,
                    matching.size == graph.edge_count() ? 1 : 0);
    }
    std::printf("\n");
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        write_hypergraph(out, core_subgraph(graph, core));
    }
    return 0;
}

int cmd_sweep(int k, std::uint32_t n, double c_min, double c_max, double step,
              std::uint32_t trials, std::uint64_t seed, const std::string& model_name,
              const std::string& out_path, bool deterministic, unsigned threads) {
    const SweepResult result =
        sweep(k, n, c_min, c_max, step, trials, seed, model_from_string(model_name), threads);
    for (std::size_t i = 0; i < result.c_values.size(); ++i)
        std::printf("c=%.6f success=%u/%u\n", result.c_values[i], result.successes[i],
                    result.trials[i]);
    std::printf("transition_midpoint=%.6f\n", result.transition_midpoint);
    emit_csv(out_path, result.records, deterministic);
    return 0;
}

int cmd_estimate(int k, std::uint32_t n, std::uint32_t trials, double tolerance,
                 std::uint64_t seed, const std::string& model_name, unsigned threads) {
    const ThresholdEstimate result = estimate_threshold_detailed(
        k, n, trials, tolerance, seed, model_from_string(model_name), threads);
    for (const ThresholdEvaluation& eval : result.evaluations)
        std::printf("c=%.6f success=%u/%u wilson95=[%.3f,%.3f]\n", eval.c, eval.successes,
                    eval.trials, eval.wilson_low, eval.wilson_high);
    std::printf("estimate=%.6f", result.estimate);
    if (k >= 2) {
        const double analytic = threshold_c_star(k).c_star;
        std::printf(" analytic=%.6f diff=%.6f", analytic,
                    std::abs(result.estimate - analytic));
    }
    std::printf("\n");
    return 0;
}

int cmd_core_stats(int k, std::uint32_t n, double c, std::uint32_t trials,
                   std::uint64_t seed, const std::string& model_name, unsigned threads) {
    const CoreStatsSummary s =
        core_stats_experiment(k, n, c, trials, seed, model_from_string(model_name), threads);
    std::printf("predicted: n2/n=%.6f m2/n=%.6f\n", s.predicted_vertex_fraction,
                s.predicted_edge_fraction);
    std::printf("observed:  n2/n=%.6f (sd %.2g) m2/n=%.6f (sd %.2g) over %u trials\n",
                s.mean_n2_fraction, s.sd_n2_fraction, s.mean_m2_fraction, s.sd_m2_fraction,
                s.trials);
    std::printf("deviation: |dn2|=%.6f |dm2|=%.6f\n", s.vertex_deviation, s.edge_deviation);
    std::printf("cores: denser-than-1 %u, sparser-than-1 %u, empty %u\n",
                s.cores_denser_than_1, s.cores_sparser_than_1, s.empty_cores);
    return 0;
}

int cmd_dupe_check(int k, std::uint32_t n, double c, std::uint32_t trials,
                   std::uint64_t seed) {
    const DuplicatePairSummary s = duplicate_edge_experiment(k, n, c, trials, seed);
    std::printf("mean_duplicate_pairs=%.6g bound=%.6g within_2x_bound=%d\n", s.mean_pairs,
                s.expected_bound, s.within_bound ? 1 : 0);
    return s.within_bound ? 0 : 1;
}

int cmd_oracle_check(int k, std::uint32_t n_max, std::uint32_t trials, std::uint64_t seed) {
    const OracleReport report = oracle_check(k, static_cast<VertexId>(n_max), trials, seed);
    std::printf("instances=%llu pass=%d\n",
                static_cast<unsigned long long>(report.instances), report.pass ? 1 : 0);
    if (!report.pass) {
        std::fputs(report.counterexample.c_str(), stdout);
        return 1;
    }
    return 0;
}

int cmd_table(std::uint32_t capacity, int k, double load, std::uint64_t seed,
              std::uint32_t max_steps, bool offline) {
    const auto count = static_cast<std::size_t>(load * capacity);
    Xoshiro256ss rng(derive_seed(seed, 0x6974656d73ULL));
    std::set<std::uint64_t> distinct;
    while (distinct.size() < count) distinct.insert(rng.next());
    const std::vector<std::uint64_t> items(distinct.begin(), distinct.end());

    if (offline) {
        const OfflineBuild build = build_offline(capacity, k, seed, items);
        std::printf("offline: items=%zu placed=%zu success=%d load_factor=%.6f\n",
                    items.size(), build.placed, build.success ? 1 : 0,
                    build.table.load_factor());
        return 0;
    }
    CuckooTable table(capacity, k, seed, max_steps);
    std::size_t inserted = 0;
    for (const std::uint64_t item : items) inserted += table.insert(item).success ? 1 : 0;
    const CuckooTable::Stats& stats = table.stats();
    std::printf("online: items=%zu inserted=%zu failures=%llu evictions=%llu "
                "load_factor=%.6f max_steps=%u success=%d\n",
                items.size(), inserted, static_cast<unsigned long long>(stats.failures),
                static_cast<unsigned long long>(stats.evictions), table.load_factor(),
                table.max_steps(), inserted == items.size() ? 1 : 0);
    return 0;
}

// Tabulators behind `analysis`; domain violations are reported per row.

template <typename Fn>
void tabulate(const std::string& header, double lo, double hi, double step, Fn&& fn) {
    std::printf("%s\n", header.c_str());
    for (double x = lo; x <= hi + 0.5 * step; x += step) {
        try {
            std::printf("%s\n", fn(x).c_str());
        } catch (const std::exception& error) {
            std::printf("%.6g,error: %s\n", x, error.what());
        }
    }
}

std::string format_row(std::initializer_list<double> values) {
    std::string row;
    char buffer[40];
    for (const double v : values) {
        if (!row.empty()) row += ',';
        std::snprintf(buffer, sizeof(buffer), "%.17g", v);
        row += buffer;
    }
    return row;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"load thresholds for k-ary cuckoo hashing: analytic values and "
                 "Monte Carlo verification"};
    app.require_subcommand(1);

    // threshold
    std::string threshold_k = "3..10";
    auto* threshold_cmd = app.add_subcommand("threshold", "table of c_k* over a k range");
    threshold_cmd->add_option("--k", threshold_k, "k or k range, e.g. 3..10");

    // core
    std::string core_in, core_out;
    auto* core_cmd = app.add_subcommand("core", "peel the 2-core of a hypergraph file");
    core_cmd->add_option("--in", core_in, "hypergraph text file")->required();
    core_cmd->add_option("--out", core_out, "write the core subgraph here");

    // shared experiment flags
    int k = 3;
    std::uint32_t n = 100000;
    double c = 0.9;
    std::uint64_t seed = 1;
    std::uint32_t trials = 20;
    std::string model = "simple";
    std::string out_path;
    bool deterministic = false;
    unsigned threads = 0;

    auto add_common = [&](CLI::App* cmd, bool with_model) {
        cmd->add_option("--k", k, "choices per item");
        cmd->add_option("--n", n, "table slots / vertices");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--trials", trials, "trials per point");
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
        if (with_model)
            cmd->add_option("--model", model, "multigraph | simple | binomial");
    };

    // sweep
    double c_min = 0.88, c_max = 0.95, step = 0.005;
    auto* sweep_cmd = app.add_subcommand("sweep", "success rate across a load grid");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--c-min", c_min, "lowest load");
    sweep_cmd->add_option("--c-max", c_max, "highest load");
    sweep_cmd->add_option("--step", step, "grid step");
    sweep_cmd->add_option("--out", out_path, "CSV output path");
    sweep_cmd->add_flag("--deterministic", deterministic,
                        "omit the timestamp header line from CSV output");

    // estimate
    double tolerance = 0.002;
    auto* estimate_cmd =
        app.add_subcommand("estimate", "bisect the load toward 50% success");
    add_common(estimate_cmd, true);
    estimate_cmd->add_option("--tol", tolerance, "bisection interval tolerance");

    // core-stats
    auto* core_stats_cmd =
        app.add_subcommand("core-stats", "empirical core sizes vs predictions");
    add_common(core_stats_cmd, true);
    core_stats_cmd->add_option("--c", c, "load");

    // dupe-check
    auto* dupe_cmd =
        app.add_subcommand("dupe-check", "duplicate-pair count in the multigraph model");
    add_common(dupe_cmd, false);
    dupe_cmd->add_option("--c", c, "load");

    // oracle-check
    std::uint32_t n_max = 12;
    auto* oracle_cmd = app.add_subcommand(
        "oracle-check", "orientability vs brute-force density oracle on small graphs");
    oracle_cmd->add_option("--k", k, "choices per item");
    oracle_cmd->add_option("--n-max", n_max, "largest vertex count (<= 14)");
    oracle_cmd->add_option("--trials", trials, "trials per (n, m) cell");
    oracle_cmd->add_option("--seed", seed, "master seed");

    // table
    std::uint32_t capacity = 10000, max_steps = 0;
    double load = 0.9;
    bool offline = false;
    auto* table_cmd = app.add_subcommand("table", "run a cuckoo hash table at a load");
    table_cmd->add_option("--capacity", capacity, "slots");
    table_cmd->add_option("--k", k, "choices per item");
    table_cmd->add_option("--load", load, "items per slot");
    table_cmd->add_option("--seed", seed, "table seed");
    table_cmd->add_option("--max-steps", max_steps, "walk budget (0 = 100 ln n)");
    table_cmd->add_flag("--offline", offline, "build via matching instead of inserting");

    // analysis
    auto* analysis_cmd =
        app.add_subcommand("analysis", "tabulate an analytic function over a grid");
    analysis_cmd->require_subcommand(1);

    std::string analysis_k = "3..10";
    auto* a_threshold = analysis_cmd->add_subcommand("threshold", "c_k* over a k range");
    a_threshold->add_option("--k", analysis_k, "k or k range");

    auto* a_lambda2 = analysis_cmd->add_subcommand("lambda2", "core-emergence minimum");
    a_lambda2->add_option("--k", analysis_k, "k or k range");

    double grid_min = 0.0, grid_max = 0.0, grid_step = 0.0;
    auto* a_corefrac =
        analysis_cmd->add_subcommand("corefrac", "core fractions across loads");
    a_corefrac->add_option("--k", k, "choices per item");
    a_corefrac->add_option("--c-min", grid_min, "lowest load")->default_val(0.82);
    a_corefrac->add_option("--c-max", grid_max, "highest load")->default_val(1.0);
    a_corefrac->add_option("--step", grid_step, "grid step")->default_val(0.01);

    double xi_override = 0.0, z_single = -1.0;
    auto* a_rate = analysis_cmd->add_subcommand("I", "large-deviation rate function");
    a_rate->add_option("--k", k, "sets xi = xi*(k)");
    a_rate->add_option("--xi", xi_override, "explicit xi (overrides --k)");
    a_rate->add_option("--z", z_single, "single z value");
    a_rate->add_option("--z-min", grid_min, "lowest z")->default_val(2.0);
    a_rate->add_option("--z-max", grid_max, "highest z")->default_val(0.0);
    a_rate->add_option("--step", grid_step, "grid step")->default_val(0.05);

    double beta_single = -1.0, q_single = -1.0, beta_fixed = 0.7;
    auto* a_f = analysis_cmd->add_subcommand("f", "first-moment exponent f(beta, q)");
    a_f->add_option("--k", k, "choices per item");
    a_f->add_option("--xi", xi_override, "explicit xi (overrides xi*(k))");
    a_f->add_option("--beta", beta_fixed, "fixed beta");
    a_f->add_option("--q", q_single, "single q value");
    a_f->add_option("--q-min", grid_min, "lowest q")->default_val(0.0);
    a_f->add_option("--q-max", grid_max, "highest q")->default_val(0.0);
    a_f->add_option("--step", grid_step, "grid step")->default_val(0.01);

    auto* a_h = analysis_cmd->add_subcommand("h", "critical-line exponent h(beta)");
    a_h->add_option("--k", k, "choices per item");
    a_h->add_option("--xi", xi_override, "explicit xi (overrides xi*(k))");
    a_h->add_option("--beta", beta_single, "single beta value");
    a_h->add_option("--beta-min", grid_min, "lowest beta")->default_val(0.7);
    a_h->add_option("--beta-max", grid_max, "highest beta")->default_val(1.0);
    a_h->add_option("--step", grid_step, "grid step")->default_val(0.01);

    try {
        app.parse(argc, argv);

        if (threshold_cmd->parsed()) return cmd_threshold(threshold_k);
        if (core_cmd->parsed()) return cmd_core(core_in, core_out);
        if (sweep_cmd->parsed())
            return cmd_sweep(k, n, c_min, c_max, step, trials, seed, model, out_path,
                             deterministic, threads);
        if (estimate_cmd->parsed())
            return cmd_estimate(k, n, trials, tolerance, seed, model, threads);
        if (core_stats_cmd->parsed())
            return cmd_core_stats(k, n, c, trials, seed, model, threads);
        if (dupe_cmd->parsed()) return cmd_dupe_check(k, n, c, trials, seed);
        if (oracle_cmd->parsed()) return cmd_oracle_check(k, n_max, trials, seed);
        if (table_cmd->parsed()) return cmd_table(capacity, k, load, seed, max_steps, offline);

        if (analysis_cmd->parsed()) {
            if (a_threshold->parsed()) return cmd_threshold(analysis_k);
            if (a_lambda2->parsed()) {
                const IntRange range = parse_range(analysis_k);
                std::printf("k,lambda2,argmin\n");
                for (int kk = range.low; kk <= range.high; ++kk) {
                    try {
                        std::printf("%d,%.17g,%.17g\n", kk, lambda2(kk), lambda2_argmin(kk));
                    } catch (const std::exception& error) {
                        std::printf("%d,error: %s\n", kk, error.what());
                    }
                }
                return 0;
            }
            if (a_corefrac->parsed()) {
                tabulate("c,xbar,xi,vertex_fraction,edge_fraction", grid_min, grid_max,
                         grid_step, [&](double load_value) {
                             const double xbar = largest_fixed_point_xbar(load_value, k);
                             const CoreFractions fractions = core_fractions(load_value, k);
                             return format_row({load_value, xbar, xbar * load_value * k,
                                                fractions.vertex_fraction,
                                                fractions.edge_fraction});
                         });
                return 0;
            }
            if (a_rate->parsed()) {
                const double xi = xi_override > 0.0 ? xi_override : solve_xi_star(k);
                double lo = grid_min, hi = grid_max;
                if (z_single >= 0.0) lo = hi = z_single;
                if (hi < lo) hi = truncated_poisson_mean(xi);  // default upper end: mu
                tabulate("z,T_z,I", lo, hi, grid_step, [&](double z) {
                    const RateFunctionEval eval = rate_eval(z, xi);
                    return format_row({z, eval.t_z, eval.value});
                });
                return 0;
            }
            if (a_f->parsed()) {
                const double xi = xi_override > 0.0 ? xi_override : solve_xi_star(k);
                double lo = grid_min, hi = grid_max;
                if (q_single >= 0.0) {
                    lo = hi = q_single;
                } else if (hi <= lo) {
                    lo = beta_fixed;
                    hi = 1.0 - 2.0 * (1.0 - beta_fixed) / k;
                }
                tabulate("q,f", lo, hi, grid_step, [&](double q) {
                    return format_row({q, f_beta_q(beta_fixed, q, k, xi)});
                });
                return 0;
            }
            if (a_h->parsed()) {
                const double xi = xi_override > 0.0 ? xi_override : solve_xi_star(k);
                double lo = grid_min, hi = grid_max;
                if (beta_single >= 0.0) lo = hi = beta_single;
                tabulate("beta,h", lo, hi, grid_step, [&](double beta) {
                    return format_row({beta, h_beta(beta, k, xi)});
                });
                return 0;
            }
        }
        std::fprintf(stderr, "no subcommand selected\n");
        return 2;
    } catch (const CLI::ParseError& error) {
        if (error.get_name() == "CallForHelp" || error.get_name() == "CallForAllHelp") {
            std::cout << app.help();
            return 0;
        }
        std::fprintf(stderr, "usage error: %s\n", error.what());
        return 2;
    } catch (const std::exception& error) {
        std::fprintf(stderr, "error: %s\n", error.what());
        return 2;
    }
}
