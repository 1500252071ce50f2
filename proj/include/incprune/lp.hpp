#pragma once

#include "incprune/geometry.hpp"
#include "incprune/region.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace incprune {

/// Whether a constraint's right-hand side is the objective variable d
/// (b . c >= d) or the constant zero (b . c >= 0).
enum class ConstraintKind { kSlackCoupled, kPlainNonneg };

struct LinearConstraint {
    Vector coeffs;
    ConstraintKind kind = ConstraintKind::kSlackCoupled;
};

/// One linear program over the belief simplex. The simplex conditions
/// (b >= 0, sum b = 1) are implicit in every instance; `constraints` holds
/// only the difference-vector rows.
struct LpInstance {
    int dimension = 0;
    std::vector<LinearConstraint> constraints;
    /// True for the dominance LPs (maximize d); false for feasibility
    /// queries recast as maximize-minimum-slack. The solver treats both
    /// identically; the flag records intent.
    bool has_objective_d = true;
};

enum class LpStatus { kOptimal, kInfeasible };

struct LpOutcome {
    LpStatus status = LpStatus::kInfeasible;
    /// Objective value when optimal. +infinity when the objective is
    /// unconstrained (no slack-coupled rows and a feasible region).
    double d = 0.0;
    std::optional<Belief> witness;
};

/// Cumulative counters. `constraint_total` counts only difference-vector
/// constraints, never the simplex conditions.
struct LpStats {
    std::int64_t lp_count = 0;
    std::int64_t constraint_total = 0;
    std::chrono::duration<double> wall_time{0.0};

    void merge(const LpStats& other) {
        lp_count += other.lp_count;
        constraint_total += other.constraint_total;
        wall_time += other.wall_time;
    }
};

/// The solver failed numerically (cycling, ill-conditioning). Distinct
/// from infeasibility by contract.
class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// A cooperative deadline expired mid-computation.
class DeadlineExceeded : public std::runtime_error {
  public:
    DeadlineExceeded() : std::runtime_error("deadline exceeded") {}
};

/// Per-task solver state: tolerance, counters, optional deadline, and an
/// optional per-LP constraint-count log (for histograms and audits).
/// Never shared across threads; merge stats at join points.
struct LpContext {
    double tol = 1e-7;
    LpStats stats;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::vector<std::int64_t>* constraint_log = nullptr;
};

/// Solves the instance with a dense simplex method (Bland's rule engaged
/// as an anti-cycling fallback). Updates the context's counters. Throws
/// SolverError on numerical failure and DeadlineExceeded past a deadline.
LpOutcome solve(const LpInstance& lp, LpContext& ctx);

/// Table-1 dominance test: a belief where w improves on every member of
/// the rival set by more than ctx.tol, or nullopt when w is dominated. An
/// empty rival set yields a vertex belief.
std::optional<Belief> lp_dominate(const AlphaVector& w, const VectorSet& u, LpContext& ctx);
std::optional<Belief> lp_dominate(const AlphaVector& w,
                                  std::span<const AlphaVector* const> rivals, LpContext& ctx);

/// Region-restricted dominance test: a belief inside the closure of the
/// region where w beats every member of `d` by more than ctx.tol. With an
/// empty `d` this degenerates to an interior probe of the region itself.
std::optional<Belief> lp_dominate_region(const RegionConstraintSet& region, const AlphaVector& w,
                                         const VectorSet& d, LpContext& ctx);
std::optional<Belief> lp_dominate_region(const RegionConstraintSet& region, const AlphaVector& w,
                                         std::span<const AlphaVector* const> d, LpContext& ctx);

struct IntersectOutcome {
    bool intersects = false;
    /// Optimal shared slack; the regions' common interior is nonempty iff
    /// this exceeds the tolerance.
    double slack = 0.0;
    std::optional<Belief> witness;
};

/// True iff the regions share an interior point (maximize a shared slack
/// over all region constraints; test slack > ctx.tol).
bool lp_intersect(std::span<const RegionConstraintSet> regions, LpContext& ctx);
bool lp_intersect(std::span<const RegionConstraintSet* const> regions, LpContext& ctx);
IntersectOutcome lp_intersect_slack(std::span<const RegionConstraintSet> regions, LpContext& ctx);
IntersectOutcome lp_intersect_slack(std::span<const RegionConstraintSet* const> regions,
                                    LpContext& ctx);

}  // namespace incprune
