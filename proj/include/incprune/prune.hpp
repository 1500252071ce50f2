#pragma once

#include "incprune/lp.hpp"

#include <vector>

namespace incprune {

/// White-Lark reduction of a vector set to the unique minimal set
/// representing the same pointwise-max function. Vectors are examined in
/// lexicographic order; the pointwise test runs first, then the dominance
/// LP against the accumulating kept set, with BEST selecting which vector
/// to keep at each witness. Output is lexicographically sorted.
VectorSet pr(const VectorSet& w, LpContext& ctx);

/// Region-restricted pruning: the subset of `w` not dominated over the
/// given region. No pointwise fast path here; every examination is one LP.
/// A region with empty interior yields the empty set.
VectorSet pr_region(const RegionConstraintSet& region, const VectorSet& w, LpContext& ctx);

/// As pr_region, over the subset of `w` named by `members`; returns the
/// surviving members' indices into `w` (ascending). Regions passed during
/// recursion are built against the narrowed subsets, so survivors keep
/// their identity in the original set.
std::vector<int> pr_region_subset(const RegionConstraintSet& region, const VectorSet& w,
                                  std::span<const int> members, LpContext& ctx);

}  // namespace incprune
