#pragma once

#include "incprune/prune.hpp"

#include <span>

namespace incprune {

enum class Algorithm { kNaive, kGip, kIbip, kRbip };

enum class SetOrdering { kAsGiven, kAscendingSize, kDescendingSize };

struct PrunerConfig {
    Algorithm algorithm = Algorithm::kRbip;
    SetOrdering set_ordering = SetOrdering::kAscendingSize;
    double tol = 1e-7;
};

/// Prunes the full cross-sum in one shot: materialize every combination,
/// then run the standard reduction. The reference the other strategies are
/// checked against.
VectorSet naive_prune(std::span<const VectorSet> sets, const PrunerConfig& config, LpContext& ctx);

/// Generalized incremental pruning: pairwise cross-sums interleaved with
/// pruning, where each dominance LP picks the smallest valid constraint
/// set among the kept set D, the same-u translate form D', and the same-w
/// form D''. Source bookkeeping comes from the cross-sum tags; untagged
/// input degenerates to plain pruning.
VectorSet gip_prune(std::span<const VectorSet> sets, const PrunerConfig& config, LpContext& ctx);

/// Intersection-based incremental pruning: enumerates tuples of witness
/// regions with nonempty common interior, recursing as region-of-first-set
/// against tuples of the rest, and sums the vectors of each surviving
/// tuple. Inputs are expected to be minimal sets.
VectorSet ibip_prune(std::span<const VectorSet> sets, const PrunerConfig& config, LpContext& ctx);

/// Region-based incremental pruning: like the intersection recursion, but
/// each candidate set is first narrowed to the vectors surviving region-
/// restricted pruning under the accumulated region, shrinking later LPs.
/// Inputs are expected to be minimal sets.
VectorSet rbip_prune(std::span<const VectorSet> sets, const PrunerConfig& config, LpContext& ctx);

/// Dispatch on config.algorithm, with singleton operands folded in as
/// plain translations (they cost no LPs and introduce no dominated
/// vectors).
VectorSet cross_sum_prune(std::span<const VectorSet> sets, const PrunerConfig& config,
                          LpContext& ctx);

/// The processing order the given config induces over the operand sets.
std::vector<int> set_order(std::span<const VectorSet> sets, SetOrdering ordering);

}  // namespace incprune
