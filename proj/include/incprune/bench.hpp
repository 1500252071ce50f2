#pragma once

#include "incprune/algorithms.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace incprune {

struct GenConfig {
    double low = -100.0;
    double high = 100.0;
    /// Candidate draws allowed before giving up on degenerate parameters.
    long long max_rejections = 100000;
};

/// A minimal set of exactly n vectors with entries drawn uniformly from
/// [low, high]. Candidates dominated by the current set are rejected via
/// the dominance LP; accepted candidates re-minimize the set, so the
/// output always survives pruning unchanged. Deterministic given the seed
/// (mt19937_64 stream, uniform reals by 53-bit mantissa scaling).
VectorSet gen_random_vector_set(int n_states, int n, std::uint64_t seed,
                                const GenConfig& config = {});

struct BenchRow {
    std::string problem;
    int k = 0;
    int n = 0;
    int n_states = 0;
    std::string algorithm;
    std::uint64_t seed = 0;
    double time_s = 0.0;
    std::int64_t lp_count = 0;
    std::int64_t constraint_total = 0;
    int result_size = 0;
    std::string status;  // ok | size_mismatch | timeout | error:<what>
};

struct SweepSpec {
    std::vector<int> ks;
    std::vector<int> ns;
    int n_states = 10;
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> seeds;
    SetOrdering set_ordering = SetOrdering::kAscendingSize;
    double tol = 1e-7;
    double timeout_s = 600.0;
    int workers = 1;
    GenConfig gen;
    /// When set, time_s columns are written as zero so repeated runs are
    /// byte-identical.
    bool zero_time = false;
    /// Collect per-LP constraint counts per cell (feeds the JSON dump).
    bool log_constraints = false;
};

struct CellDetail {
    std::string problem;
    std::uint64_t seed = 0;
    std::string algorithm;
    std::vector<std::int64_t> constraint_log;
};

struct SweepResult {
    std::vector<BenchRow> rows;
    std::vector<CellDetail> details;  // populated when log_constraints
};

/// For each (k, n, seed): draw k independent sets from one seeded stream,
/// run every requested algorithm on the same sets, and record one row per
/// run. Result sizes are cross-checked per cell; disagreements are flagged
/// in the status column. Cells may run concurrently; the output is sorted
/// (k, n, seed, algorithm) regardless.
SweepResult run_sweep(const SweepSpec& spec);

const char* algorithm_name(Algorithm a);

/// CSV with header problem,k,n,states,algorithm,seed,time_s,lp_count,
/// constraints,result_size,status in deterministic order.
void emit_csv(const std::vector<BenchRow>& rows, std::ostream& out);
std::vector<BenchRow> parse_csv(std::istream& in);

}  // namespace incprune
