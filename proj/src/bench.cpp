#include "incprune/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace incprune {

namespace {

double uniform_real(std::mt19937_64& rng, double low, double high) {
    // 53-bit mantissa scaling; identical on every platform.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return low + u * (high - low);
}

Vector draw_vector(std::mt19937_64& rng, int n_states, const GenConfig& config) {
    Vector v(n_states);
    for (int s = 0; s < n_states; ++s) v[s] = uniform_real(rng, config.low, config.high);
    return v;
}

VectorSet gen_from_stream(int n_states, int n, std::mt19937_64& rng, const GenConfig& config) {
    if (n < 1) throw std::invalid_argument("gen_random_vector_set: n must be >= 1");
    if (n_states < 2) throw std::invalid_argument("gen_random_vector_set: need >= 2 states");
    if (!(config.low < config.high)) {
        throw std::invalid_argument("gen_random_vector_set: empty value range");
    }
    LpContext ctx;  // generation LPs are not part of any algorithm's meter
    VectorSet set(n_states);
    set.insert(AlphaVector(draw_vector(rng, n_states, config)));
    long long draws = 0;
    while (set.size() < n) {
        if (++draws > config.max_rejections) {
            throw std::runtime_error("gen_random_vector_set: rejection cap exceeded");
        }
        AlphaVector cand(draw_vector(rng, n_states, config));
        if (!lp_dominate(cand, set, ctx)) continue;
        // Keep the set minimal: the newcomer may cover earlier members.
        VectorSet trial = set;
        if (!trial.insert(std::move(cand))) continue;
        set = pr(trial, ctx);
    }
    return set;
}

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t cell_seed(std::uint64_t seed, int k, int n, int n_states) {
    std::uint64_t x = seed;
    std::uint64_t h = splitmix64(x);
    x ^= static_cast<std::uint64_t>(k) * 0x9e3779b97f4a7c15ull;
    h ^= splitmix64(x);
    x ^= static_cast<std::uint64_t>(n) * 0xc2b2ae3d27d4eb4full;
    h ^= splitmix64(x);
    x ^= static_cast<std::uint64_t>(n_states) * 0x165667b19e3779f9ull;
    h ^= splitmix64(x);
    return h;
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

}  // namespace

VectorSet gen_random_vector_set(int n_states, int n, std::uint64_t seed, const GenConfig& config) {
    std::mt19937_64 rng(seed);
    return gen_from_stream(n_states, n, rng, config);
}

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::kNaive: return "naive";
        case Algorithm::kGip: return "gip";
        case Algorithm::kIbip: return "ibip";
        case Algorithm::kRbip: return "rbip";
    }
    return "?";
}

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.ks.empty() || spec.ns.empty() || spec.seeds.empty()) {
        throw std::invalid_argument("run_sweep: empty parameter range");
    }
    struct Cell {
        int k, n;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (int k : spec.ks) {
        for (int n : spec.ns) {
            for (std::uint64_t seed : spec.seeds) cells.push_back({k, n, seed});
        }
    }
    const size_t n_algos = spec.algorithms.size();
    SweepResult result;
    result.rows.assign(cells.size() * n_algos, BenchRow{});
    if (spec.log_constraints) result.details.assign(cells.size() * n_algos, CellDetail{});

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t ci = next.fetch_add(1);
            if (ci >= cells.size()) return;
            const Cell& cell = cells[ci];
            const std::string problem =
                "rand-k" + std::to_string(cell.k) + "-n" + std::to_string(cell.n);

            std::mt19937_64 rng(cell_seed(cell.seed, cell.k, cell.n, spec.n_states));
            std::vector<VectorSet> sets;
            sets.reserve(static_cast<size_t>(cell.k));
            for (int i = 0; i < cell.k; ++i) {
                sets.push_back(gen_from_stream(spec.n_states, cell.n, rng, spec.gen));
            }

            for (size_t ai = 0; ai < n_algos; ++ai) {
                const Algorithm algo = spec.algorithms[ai];
                BenchRow row;
                row.problem = problem;
                row.k = cell.k;
                row.n = cell.n;
                row.n_states = spec.n_states;
                row.algorithm = algorithm_name(algo);
                row.seed = cell.seed;

                PrunerConfig config;
                config.algorithm = algo;
                config.set_ordering = spec.set_ordering;
                config.tol = spec.tol;
                LpContext ctx;
                ctx.tol = spec.tol;
                std::vector<std::int64_t> log;
                if (spec.log_constraints) ctx.constraint_log = &log;
                if (spec.timeout_s > 0.0) {
                    ctx.deadline = std::chrono::steady_clock::now() +
                                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                       std::chrono::duration<double>(spec.timeout_s));
                }
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    const VectorSet pruned = cross_sum_prune(sets, config, ctx);
                    row.result_size = pruned.size();
                    row.status = "ok";
                } catch (const DeadlineExceeded&) {
                    row.status = "timeout";
                } catch (const SolverError& err) {
                    row.status = sanitize(std::string("error:") + err.what());
                }
                row.time_s = spec.zero_time
                                 ? 0.0
                                 : std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                                 t0)
                                       .count();
                row.lp_count = ctx.stats.lp_count;
                row.constraint_total = ctx.stats.constraint_total;
                result.rows[ci * n_algos + ai] = std::move(row);
                if (spec.log_constraints) {
                    CellDetail detail;
                    detail.problem = problem;
                    detail.seed = cell.seed;
                    detail.algorithm = algorithm_name(algo);
                    detail.constraint_log = std::move(log);
                    result.details[ci * n_algos + ai] = std::move(detail);
                }
            }

            // Cross-check: identical instances must yield identical sizes.
            int agreed = -1;
            bool mismatch = false;
            for (size_t ai = 0; ai < n_algos; ++ai) {
                const BenchRow& row = result.rows[ci * n_algos + ai];
                if (row.status != "ok") continue;
                if (agreed < 0) {
                    agreed = row.result_size;
                } else if (row.result_size != agreed) {
                    mismatch = true;
                }
            }
            if (mismatch) {
                for (size_t ai = 0; ai < n_algos; ++ai) {
                    BenchRow& row = result.rows[ci * n_algos + ai];
                    if (row.status == "ok") row.status = "size_mismatch";
                }
            }
        }
    };

    const int n_workers = std::max(1, spec.workers);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_workers));
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    auto key = [](const BenchRow& r) {
        return std::tuple<int, int, std::uint64_t, std::string>(r.k, r.n, r.seed, r.algorithm);
    };
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [&](const BenchRow& a, const BenchRow& b) { return key(a) < key(b); });
    std::stable_sort(result.details.begin(), result.details.end(),
                     [](const CellDetail& a, const CellDetail& b) {
                         return std::tie(a.problem, a.seed, a.algorithm) <
                                std::tie(b.problem, b.seed, b.algorithm);
                     });
    return result;
}

void emit_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "problem,k,n,states,algorithm,seed,time_s,lp_count,constraints,result_size,status\n";
    char buf[32];
    for (const BenchRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6f", r.time_s);
        out << sanitize(r.problem) << ',' << r.k << ',' << r.n << ',' << r.n_states << ','
            << sanitize(r.algorithm) << ',' << r.seed << ',' << buf << ',' << r.lp_count << ','
            << r.constraint_total << ',' << r.result_size << ',' << sanitize(r.status) << '\n';
    }
}

std::vector<BenchRow> parse_csv(std::istream& in) {
    std::vector<BenchRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 11) throw std::runtime_error("parse_csv: malformed row: " + line);
        BenchRow r;
        r.problem = fields[0];
        r.k = std::stoi(fields[1]);
        r.n = std::stoi(fields[2]);
        r.n_states = std::stoi(fields[3]);
        r.algorithm = fields[4];
        r.seed = std::stoull(fields[5]);
        r.time_s = std::stod(fields[6]);
        r.lp_count = std::stoll(fields[7]);
        r.constraint_total = std::stoll(fields[8]);
        r.result_size = std::stoi(fields[9]);
        r.status = fields[10];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace incprune
