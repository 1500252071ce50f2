// Command-line front end: exact POMDP solving, cross-sum pruning
// benchmarks, and model file checking.

#include "incprune/bench.hpp"
#include "incprune/dp.hpp"
#include "incprune/format.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace {

using incprune::Algorithm;
using nlohmann::json;

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
    if (name == "naive") return Algorithm::kNaive;
    if (name == "gip") return Algorithm::kGip;
    if (name == "ibip") return Algorithm::kIbip;
    if (name == "rbip") return Algorithm::kRbip;
    return std::nullopt;
}

std::optional<incprune::SetOrdering> ordering_from_name(const std::string& name) {
    if (name == "as-given") return incprune::SetOrdering::kAsGiven;
    if (name == "ascending") return incprune::SetOrdering::kAscendingSize;
    if (name == "descending") return incprune::SetOrdering::kDescendingSize;
    return std::nullopt;
}

// "2..5", "3", or "2,4,6".
std::vector<long long> parse_range(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const size_t dots = part.find("..");
        if (dots != std::string::npos) {
            const long long lo = std::stoll(part.substr(0, dots));
            const long long hi = std::stoll(part.substr(dots + 2));
            if (hi < lo) throw CLI::ValidationError("range '" + part + "' is descending");
            for (long long v = lo; v <= hi; ++v) out.push_back(v);
        } else if (!part.empty()) {
            out.push_back(std::stoll(part));
        }
    }
    if (out.empty()) throw CLI::ValidationError("empty range '" + text + "'");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct SolveOptions {
    std::string model_path;
    std::string algorithm = "rbip";
    std::string ordering = "ascending";
    int iterations = 200;
    double epsilon = 1e-6;
    double tol = 1e-7;
    std::string output;
    bool count_all = false;
    bool as_json = false;
    bool explicit_epsilon = false;
    bool explicit_iterations = false;
    int verbosity = 0;
};

int run_solve(const SolveOptions& opt) {
    incprune::ParseResult parsed;
    try {
        parsed = incprune::parse_pomdp(read_file(opt.model_path));
    } catch (const incprune::ParseError& err) {
        std::cerr << "parse error (line " << err.line() << "): " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    for (const std::string& warning : parsed.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    const auto diags = incprune::validate(parsed.model);
    if (!diags.empty()) {
        for (const auto& d : diags) std::cerr << "invalid model: " << d.message << "\n";
        return 1;
    }

    incprune::PrunerConfig config;
    config.algorithm = *algorithm_from_name(opt.algorithm);
    config.set_ordering = *ordering_from_name(opt.ordering);
    config.tol = opt.tol;

    // An explicit --iterations without --epsilon means a fixed-length run;
    // otherwise the residual rule decides convergence.
    const double epsilon =
        (opt.explicit_iterations && !opt.explicit_epsilon) ? 0.0 : opt.epsilon;

    incprune::DpStats stats;
    incprune::ValueIterationResult result;
    try {
        result = incprune::value_iterate(parsed.model, config, opt.iterations, epsilon, stats);
    } catch (const incprune::SolverError& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        return 2;
    }

    const std::string out_path =
        opt.output.empty() ? opt.model_path + ".alpha" : opt.output;
    {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return 2;
        }
        incprune::write_alpha_file(result.vf.vectors, out);
    }

    auto row_lp = [&](const incprune::IterationRow& row) {
        auto lp = row.cross_sum.lp_count;
        auto c = row.cross_sum.constraint_total;
        if (opt.count_all) {
            lp += row.standard.lp_count;
            c += row.standard.constraint_total;
        }
        return std::pair<long long, long long>(lp, c);
    };

    if (opt.as_json) {
        json j;
        j["algorithm"] = opt.algorithm;
        j["converged"] = result.converged;
        j["residual"] = result.residual;
        j["alpha_file"] = out_path;
        j["iterations"] = json::array();
        for (const auto& row : result.rows) {
            const auto [lp, c] = row_lp(row);
            j["iterations"].push_back({{"iteration", row.iteration},
                                       {"size", row.size},
                                       {"time_s", row.seconds},
                                       {"lp_count", lp},
                                       {"constraints", c},
                                       {"residual", row.residual}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("%5s %10s %10s %12s %7s %11s\n", "iter", "time", "LP", "C", "|V|",
                    "residual");
        for (const auto& row : result.rows) {
            const auto [lp, c] = row_lp(row);
            std::printf("%5d %10.3f %10lld %12lld %7d %11.3e\n", row.iteration, row.seconds,
                        static_cast<long long>(lp), static_cast<long long>(c), row.size,
                        row.residual);
        }
        std::printf("wrote %d vectors to %s\n", result.vf.vectors.size(), out_path.c_str());
    }

    if (epsilon > 0.0 && !result.converged) {
        std::cerr << "did not converge within " << opt.iterations
                  << " iterations (residual " << result.residual << "); partial output written\n";
        return 3;
    }
    return 0;
}

struct BenchOptions {
    std::string k_range = "2..4";
    std::string n_range = "5";
    int states = 10;
    std::string algorithms = "naive,gip,ibip,rbip";
    std::string seeds;
    std::vector<std::uint64_t> single_seeds;
    std::string csv_path;
    std::string ordering = "ascending";
    double timeout = 600.0;
    double tol = 1e-7;
    double range_low = -100.0;
    double range_high = 100.0;
    int workers = 0;
    bool keep_going = false;
    bool zero_time = false;
    bool as_json = false;
    std::string histogram_path;
};

int run_bench(const BenchOptions& opt) {
    incprune::SweepSpec spec;
    for (long long k : parse_range(opt.k_range)) spec.ks.push_back(static_cast<int>(k));
    for (long long n : parse_range(opt.n_range)) spec.ns.push_back(static_cast<int>(n));
    spec.n_states = opt.states;
    std::stringstream algos(opt.algorithms);
    std::string name;
    while (std::getline(algos, name, ',')) {
        const auto algo = algorithm_from_name(name);
        if (!algo) {
            std::cerr << "unknown algorithm '" << name << "'\n";
            return 1;
        }
        spec.algorithms.push_back(*algo);
    }
    if (!opt.seeds.empty()) {
        for (long long s : parse_range(opt.seeds)) {
            spec.seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    for (std::uint64_t s : opt.single_seeds) spec.seeds.push_back(s);
    if (spec.seeds.empty()) spec.seeds.push_back(0);
    spec.set_ordering = *ordering_from_name(opt.ordering);
    spec.timeout_s = opt.timeout;
    spec.tol = opt.tol;
    spec.gen.low = opt.range_low;
    spec.gen.high = opt.range_high;
    spec.workers = opt.workers > 0
                       ? opt.workers
                       : std::max(1u, std::thread::hardware_concurrency());
    spec.zero_time = opt.zero_time;
    spec.log_constraints = !opt.histogram_path.empty();

    const incprune::SweepResult result = incprune::run_sweep(spec);

    if (!opt.csv_path.empty()) {
        std::ofstream out(opt.csv_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << opt.csv_path << "'\n";
            return 2;
        }
        incprune::emit_csv(result.rows, out);
    }

    if (!opt.histogram_path.empty()) {
        json j;
        j["cells"] = json::array();
        for (const auto& detail : result.details) {
            std::map<std::int64_t, std::int64_t> hist;
            for (auto c : detail.constraint_log) ++hist[c];
            json cell;
            cell["problem"] = detail.problem;
            cell["seed"] = detail.seed;
            cell["algorithm"] = detail.algorithm;
            cell["lp_constraint_histogram"] = json::object();
            for (const auto& [count, freq] : hist) {
                cell["lp_constraint_histogram"][std::to_string(count)] = freq;
            }
            j["cells"].push_back(std::move(cell));
        }
        std::ofstream out(opt.histogram_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << opt.histogram_path << "'\n";
            return 2;
        }
        out << j.dump(2) << "\n";
    }

    if (opt.as_json) {
        json j = json::array();
        for (const auto& r : result.rows) {
            j.push_back({{"problem", r.problem},
                         {"k", r.k},
                         {"n", r.n},
                         {"states", r.n_states},
                         {"algorithm", r.algorithm},
                         {"seed", r.seed},
                         {"time_s", r.time_s},
                         {"lp_count", r.lp_count},
                         {"constraints", r.constraint_total},
                         {"result_size", r.result_size},
                         {"status", r.status}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        // Per-cell speedup against the slowest algorithm.
        std::printf("%-16s %6s  %s\n", "problem", "seed", "speedup vs slowest");
        std::map<std::pair<std::string, std::uint64_t>, std::vector<const incprune::BenchRow*>>
            cells;
        for (const auto& r : result.rows) cells[{r.problem, r.seed}].push_back(&r);
        for (const auto& [key, rows] : cells) {
            double slowest = 0.0;
            for (const auto* r : rows) {
                if (r->status == "ok" || r->status == "size_mismatch") {
                    slowest = std::max(slowest, r->time_s);
                }
            }
            std::string line;
            for (const auto* r : rows) {
                char buf[96];
                if (r->status == "ok" || r->status == "size_mismatch") {
                    std::snprintf(buf, sizeof(buf), "%s %.2fx (|V|=%d)  ", r->algorithm.c_str(),
                                  r->time_s > 0 ? slowest / r->time_s : 1.0, r->result_size);
                } else {
                    std::snprintf(buf, sizeof(buf), "%s %s  ", r->algorithm.c_str(),
                                  r->status.c_str());
                }
                line += buf;
            }
            std::printf("%-16s %6llu  %s\n", key.first.c_str(),
                        static_cast<unsigned long long>(key.second), line.c_str());
        }
    }

    bool any_error = false;
    bool any_mismatch = false;
    for (const auto& r : result.rows) {
        if (r.status.rfind("error:", 0) == 0) any_error = true;
        if (r.status == "size_mismatch") any_mismatch = true;
    }
    if (any_mismatch) std::cerr << "warning: result sizes disagree on some cells\n";
    if (any_error && !opt.keep_going) return 2;
    return 0;
}

int run_check(const std::string& path, bool as_json) {
    incprune::ParseResult parsed;
    try {
        parsed = incprune::parse_pomdp(read_file(path));
    } catch (const incprune::ParseError& err) {
        if (as_json) {
            json j;
            j["ok"] = false;
            j["diagnostics"] = {std::string("line ") + std::to_string(err.line()) + ": " +
                                err.what()};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << "parse error (line " << err.line() << "): " << err.what() << "\n";
        }
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    const auto diags = incprune::validate(parsed.model);
    if (as_json) {
        json j;
        j["ok"] = diags.empty();
        j["states"] = parsed.model.n_states;
        j["actions"] = parsed.model.n_actions;
        j["observations"] = parsed.model.n_observations;
        j["discount"] = parsed.model.discount;
        j["warnings"] = parsed.warnings;
        j["diagnostics"] = json::array();
        for (const auto& d : diags) j["diagnostics"].push_back(d.message);
        std::cout << j.dump(2) << "\n";
    } else {
        for (const std::string& warning : parsed.warnings) {
            std::cerr << "warning: " << warning << "\n";
        }
        for (const auto& d : diags) std::cout << "diagnostic: " << d.message << "\n";
        if (diags.empty()) {
            std::cout << "ok: " << parsed.model.n_states << " states, "
                      << parsed.model.n_actions << " actions, " << parsed.model.n_observations
                      << " observations, discount " << parsed.model.discount << "\n";
        }
    }
    return diags.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact POMDP value iteration with cross-sum pruning"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "Solve a .POMDP model by value iteration");
    solve->add_option("model", solve_opt.model_path, "Path to the .POMDP file")->required();
    solve->add_option("--algorithm", solve_opt.algorithm,
                      "Cross-sum pruner: naive|gip|ibip|rbip (default rbip)")
        ->check(CLI::IsMember({"naive", "gip", "ibip", "rbip"}));
    auto* iters = solve->add_option("--iterations", solve_opt.iterations,
                                    "Backup count cap; without --epsilon this is a fixed-length "
                                    "run (default 200)");
    auto* eps = solve->add_option(
        "--epsilon", solve_opt.epsilon,
        "Residual threshold for convergence (default 1e-6; 0 disables the check)");
    solve->add_option("--tol", solve_opt.tol, "LP strictness tolerance (default 1e-7)");
    solve->add_option("--output", solve_opt.output,
                      "Alpha-vector file path (default <model>.alpha)");
    solve->add_option("--set-ordering", solve_opt.ordering,
                      "Cross-sum operand order: as-given|ascending|descending")
        ->check(CLI::IsMember({"as-given", "ascending", "descending"}));
    solve->add_flag("--count-all-lps", solve_opt.count_all,
                    "Report all LPs per iteration, not only cross-sum pruning ones");
    solve->add_flag("--json", solve_opt.as_json, "Machine-readable stats on stdout");
    solve->add_flag("-v,--verbose", solve_opt.verbosity, "More logging");
    int solve_workers = 0;
    solve->add_option("--workers", solve_workers,
                      "Worker threads for internal parallelism (default: machine)");

    BenchOptions bench_opt;
    CLI::App* bench = app.add_subcommand(
        "bench", "Random cross-sum pruning benchmark over a (k, n) grid");
    bench->add_option("--k", bench_opt.k_range, "Number of sets, e.g. 2..5 or 3 (default 2..4)");
    bench->add_option("--n", bench_opt.n_range, "Vectors per set, e.g. 5 or 5,10 (default 5)");
    bench->add_option("--states", bench_opt.states, "Vector dimension (default 10)");
    bench->add_option("--algorithms", bench_opt.algorithms,
                      "Comma list of naive,gip,ibip,rbip (default all)");
    bench->add_option("--seeds", bench_opt.seeds, "Seed range, e.g. 0..9");
    bench->add_option("--seed", bench_opt.single_seeds, "Single seed (repeatable)");
    bench->add_option("--csv", bench_opt.csv_path, "Write rows to this CSV file");
    bench->add_option("--set-ordering", bench_opt.ordering,
                      "Cross-sum operand order: as-given|ascending|descending")
        ->check(CLI::IsMember({"as-given", "ascending", "descending"}));
    bench->add_option("--timeout", bench_opt.timeout,
                      "Per-run timeout in seconds (default 600; 0 disables)");
    bench->add_option("--tol", bench_opt.tol, "LP strictness tolerance (default 1e-7)");
    bench->add_option("--range-low", bench_opt.range_low, "Entry range lower bound (-100)");
    bench->add_option("--range-high", bench_opt.range_high, "Entry range upper bound (100)");
    bench->add_option("--workers", bench_opt.workers,
                      "Concurrent cells (default: machine parallelism)");
    bench->add_flag("--keep-going", bench_opt.keep_going,
                    "Do not fail the run on per-cell numerical errors");
    bench->add_flag("--zero-time", bench_opt.zero_time,
                    "Write zeros in time columns for byte-reproducible output");
    bench->add_flag("--json", bench_opt.as_json, "Machine-readable rows on stdout");
    bench->add_option("--lp-histogram", bench_opt.histogram_path,
                      "Write per-cell JSON with an LP constraint-count histogram");

    std::string check_path;
    bool check_json = false;
    CLI::App* check = app.add_subcommand("check", "Parse and validate a .POMDP file");
    check->add_option("model", check_path, "Path to the .POMDP file")->required();
    check->add_flag("--json", check_json, "Machine-readable diagnostics on stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            solve_opt.explicit_iterations = iters->count() > 0;
            solve_opt.explicit_epsilon = eps->count() > 0;
            return run_solve(solve_opt);
        }
        if (bench->parsed()) return run_bench(bench_opt);
        if (check->parsed()) return run_check(check_path, check_json);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
