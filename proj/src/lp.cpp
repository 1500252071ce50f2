#include "incprune/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace incprune {

namespace {

constexpr double kPivotTol = 1e-10;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_deadline(const LpContext& ctx) {
    if (ctx.deadline && std::chrono::steady_clock::now() > *ctx.deadline) {
        throw DeadlineExceeded();
    }
}

void record(LpContext& ctx, std::int64_t n_constraints) {
    ctx.stats.lp_count += 1;
    ctx.stats.constraint_total += n_constraints;
    if (ctx.constraint_log) ctx.constraint_log->push_back(n_constraints);
}

class StopWatch {
  public:
    explicit StopWatch(LpStats& stats) : stats_(stats), start_(std::chrono::steady_clock::now()) {}
    ~StopWatch() { stats_.wall_time += std::chrono::steady_clock::now() - start_; }

  private:
    LpStats& stats_;
    std::chrono::steady_clock::time_point start_;
};

/*
 * Dense simplex over the belief simplex. The instance is
 *
 *     max d   s.t.  b . c_j >= d (coupled),  b . c_j >= 0 (plain),
 *                   sum_s b(s) = 1,  b >= 0,
 *
 * with few variables and possibly many constraints, so we pivot on its
 * dual instead:
 *
 *     min t   s.t.  sum_j lambda_j c_j(s) <= t  for every state s,
 *                   sum_{coupled j} lambda_j = 1,  lambda >= 0,
 *
 * whose tableau has |S|+1 rows however many constraints there are. The
 * dual is feasible by construction (all weight on one coupled constraint),
 * so no phase-1 is needed, and dual unboundedness signals primal
 * infeasibility. At optimality the dual objective equals the primal d*,
 * and the primal witness b is read off the reduced costs of the slack
 * columns. The tableau buffer is reused across calls.
 *
 * Callers must install at least one coupled constraint.
 */
class DualSimplex {
  public:
    // n states, m difference constraints.
    void setup(int n, int m) {
        n_ = n;
        m_ = m;
        rows_ = n + 1;
        cols_ = m + 2 + n;
        if (tab_.rows() < rows_ + 1 || tab_.cols() < cols_ + 1) {
            tab_.resize(std::max<Eigen::Index>(rows_ + 1, tab_.rows()),
                        std::max<Eigen::Index>(cols_ + 1, tab_.cols()));
        }
        tab_.topLeftCorner(rows_ + 1, cols_ + 1).setZero();
        first_coupled_ = -1;
        next_col_ = 0;
    }

    void add_constraint(const Vector& c, bool coupled) {
        const int j = next_col_++;
        tab_.col(j).head(n_) = c;
        if (coupled) couple(j);
    }

    void add_constraint_diff(const Vector& a, const Vector& b, bool coupled) {
        const int j = next_col_++;
        tab_.col(j).head(n_) = a - b;
        if (coupled) couple(j);
    }

    struct Result {
        LpStatus status = LpStatus::kInfeasible;
        double d = 0.0;
        Vector witness;
    };

    Result run(const LpContext& ctx) {
        const int col_tp = m_;
        const int col_tm = m_ + 1;
        const int col_slack0 = m_ + 2;
        tab_.col(col_tp).head(n_).setConstant(-1.0);
        tab_.col(col_tm).head(n_).setConstant(1.0);
        for (int s = 0; s < n_; ++s) tab_(s, col_slack0 + s) = 1.0;
        tab_(n_, cols_) = 1.0;       // rhs of the normalization row
        tab_(rows_, col_tp) = -1.0;  // objective: max (t- - t+) = -t
        tab_(rows_, col_tm) = 1.0;

        basic_.assign(static_cast<size_t>(rows_), -1);
        colq_.assign(static_cast<size_t>(rows_ + 1), 0.0);

        // Starting basis: weight 1 on one coupled constraint, t at its
        // largest coordinate, slacks elsewhere. Feasible by construction.
        int s_star = 0;
        for (int s = 1; s < n_; ++s) {
            if (tab_(s, first_coupled_) > tab_(s_star, first_coupled_)) s_star = s;
        }
        const bool t_plus = tab_(s_star, first_coupled_) >= 0.0;
        pivot(n_, first_coupled_);
        pivot(s_star, t_plus ? col_tp : col_tm);
        for (int s = 0; s < n_; ++s) {
            if (basic_[static_cast<size_t>(s)] < 0) basic_[static_cast<size_t>(s)] = col_slack0 + s;
            if (tab_(s, cols_) < 0.0) {
                if (tab_(s, cols_) < -1e-7) throw SolverError("simplex: infeasible start");
                tab_(s, cols_) = 0.0;
            }
        }

        bool bland = false;
        int stalled = 0;
        const long long cap = 5000 + 10LL * cols_;
        for (long long iter = 0;; ++iter) {
            if (iter > cap) throw SolverError("simplex: iteration limit (possible cycling)");
            if ((iter & 127) == 127) check_deadline(ctx);

            int q = -1;
            if (!bland) {
                double best_red = kPivotTol;
                for (int j = 0; j < cols_; ++j) {
                    const double red = tab_(rows_, j);
                    if (red > best_red) {
                        best_red = red;
                        q = j;
                    }
                }
            } else {
                for (int j = 0; j < cols_; ++j) {
                    if (tab_(rows_, j) > kPivotTol) {
                        q = j;
                        break;
                    }
                }
            }
            if (q < 0) break;  // optimal

            int r = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < rows_; ++i) {
                const double a = tab_(i, q);
                if (a <= kPivotTol) continue;
                const double ratio = std::max(tab_(i, cols_), 0.0) / a;
                if (ratio < best_ratio - 1e-12) {
                    best_ratio = ratio;
                    r = i;
                } else if (r >= 0 && ratio < best_ratio + 1e-12 &&
                           basic_[static_cast<size_t>(i)] < basic_[static_cast<size_t>(r)]) {
                    r = i;  // tie toward the smallest basic index (Bland-safe)
                }
            }
            if (r < 0) {
                // Dual unbounded below: no feasible belief exists.
                return {LpStatus::kInfeasible, 0.0, Vector()};
            }

            const double corner_before = tab_(rows_, cols_);
            pivot(r, q);
            if (corner_before - tab_(rows_, cols_) < 1e-13) {
                if (++stalled > 64) bland = true;
            } else {
                stalled = 0;
            }
        }

        Result out;
        out.status = LpStatus::kOptimal;
        out.d = tab_(rows_, cols_);  // dual optimum t* equals the primal d*
        out.witness.resize(n_);
        for (int s = 0; s < n_; ++s) {
            out.witness[s] = std::max(0.0, -tab_(rows_, col_slack0 + s));
        }
        if (std::abs(out.witness.sum() - 1.0) > 1e-7) {
            throw SolverError("simplex: witness left the simplex");
        }
        return out;
    }

  private:
    void couple(int j) {
        tab_(n_, j) = 1.0;
        if (first_coupled_ < 0) first_coupled_ = j;
    }

    void pivot(int r, int q) {
        for (int i = 0; i <= rows_; ++i) colq_[static_cast<size_t>(i)] = tab_(i, q);
        const double piv = colq_[static_cast<size_t>(r)];
        auto block = tab_.topLeftCorner(rows_ + 1, cols_ + 1);
        block.row(r) /= piv;
        for (int i = 0; i <= rows_; ++i) {
            if (i == r) continue;
            const double f = colq_[static_cast<size_t>(i)];
            if (f != 0.0) block.row(i) -= f * block.row(r);
        }
        if (r < rows_) basic_[static_cast<size_t>(r)] = q;
    }

    RowMatrix tab_;
    std::vector<int> basic_;
    std::vector<double> colq_;
    int n_ = 0, m_ = 0, rows_ = 0, cols_ = 0;
    int first_coupled_ = -1;
    int next_col_ = 0;
};

thread_local DualSimplex g_solver;

Belief make_belief(Vector raw) { return Belief(std::move(raw)); }

}  // namespace

LpOutcome solve(const LpInstance& lp, LpContext& ctx) {
    check_deadline(ctx);
    if (lp.dimension < 1) throw std::invalid_argument("solve: dimension must be >= 1");
    for (const LinearConstraint& c : lp.constraints) {
        if (c.coeffs.size() != lp.dimension) {
            throw std::invalid_argument("solve: constraint dimension mismatch");
        }
        if (!c.coeffs.allFinite()) throw std::invalid_argument("solve: non-finite constraint");
    }
    record(ctx, static_cast<std::int64_t>(lp.constraints.size()));
    StopWatch watch(ctx.stats);

    if (lp.constraints.empty()) {
        return {LpStatus::kOptimal, std::numeric_limits<double>::infinity(),
                Belief::uniform(lp.dimension)};
    }

    const bool any_coupled =
        std::any_of(lp.constraints.begin(), lp.constraints.end(), [](const LinearConstraint& c) {
            return c.kind == ConstraintKind::kSlackCoupled;
        });

    const int m = static_cast<int>(lp.constraints.size());
    g_solver.setup(lp.dimension, m);
    for (const LinearConstraint& c : lp.constraints) {
        // With no coupled rows the objective is vacuous and the query is
        // closed feasibility; maximize the minimum slack over everything
        // instead. The region is nonempty iff that optimum is nonnegative.
        g_solver.add_constraint(c.coeffs, !any_coupled || c.kind == ConstraintKind::kSlackCoupled);
    }
    DualSimplex::Result out = g_solver.run(ctx);
    if (out.status != LpStatus::kOptimal) return {LpStatus::kInfeasible, 0.0, std::nullopt};
    if (!any_coupled) {
        if (out.d < -1e-9) return {LpStatus::kInfeasible, 0.0, std::nullopt};
        return {LpStatus::kOptimal, std::numeric_limits<double>::infinity(),
                make_belief(std::move(out.witness))};
    }
    return {LpStatus::kOptimal, out.d, make_belief(std::move(out.witness))};
}

std::optional<Belief> lp_dominate(const AlphaVector& w,
                                  std::span<const AlphaVector* const> rivals, LpContext& ctx) {
    if (rivals.empty()) {
        // Vacuous domination: any vertex works. Still counted as one call.
        record(ctx, 0);
        return Belief::vertex(w.dim(), 0);
    }
    check_deadline(ctx);
    record(ctx, static_cast<std::int64_t>(rivals.size()));
    StopWatch watch(ctx.stats);
    g_solver.setup(w.dim(), static_cast<int>(rivals.size()));
    for (const AlphaVector* rival : rivals) {
        g_solver.add_constraint_diff(w.coeffs, rival->coeffs, true);
    }
    DualSimplex::Result out = g_solver.run(ctx);
    if (out.status != LpStatus::kOptimal) throw SolverError("dominance LP reported infeasible");
    if (out.d > ctx.tol) return make_belief(std::move(out.witness));
    return std::nullopt;
}

std::optional<Belief> lp_dominate(const AlphaVector& w, const VectorSet& u, LpContext& ctx) {
    std::vector<const AlphaVector*> rivals;
    rivals.reserve(static_cast<size_t>(u.size()));
    for (const AlphaVector& v : u) rivals.push_back(&v);
    return lp_dominate(w, rivals, ctx);
}

std::optional<Belief> lp_dominate_region(const RegionConstraintSet& region, const AlphaVector& w,
                                         std::span<const AlphaVector* const> d, LpContext& ctx) {
    if (d.empty()) {
        if (region.empty()) {
            record(ctx, 0);
            return Belief::vertex(w.dim(), 0);
        }
        // First vector examined: probe the region's interior by maximizing
        // a shared slack over its own constraints.
        check_deadline(ctx);
        record(ctx, region.size());
        StopWatch watch(ctx.stats);
        g_solver.setup(w.dim(), region.size());
        for (const Vector& c : region.constraints) g_solver.add_constraint(c, true);
        DualSimplex::Result out = g_solver.run(ctx);
        if (out.status == LpStatus::kOptimal && out.d > ctx.tol) {
            return make_belief(std::move(out.witness));
        }
        return std::nullopt;
    }
    check_deadline(ctx);
    record(ctx, region.size() + static_cast<std::int64_t>(d.size()));
    StopWatch watch(ctx.stats);
    g_solver.setup(w.dim(), region.size() + static_cast<int>(d.size()));
    for (const Vector& c : region.constraints) g_solver.add_constraint(c, false);
    for (const AlphaVector* rival : d) g_solver.add_constraint_diff(w.coeffs, rival->coeffs, true);
    DualSimplex::Result out = g_solver.run(ctx);
    if (out.status != LpStatus::kOptimal) return std::nullopt;
    if (out.d > ctx.tol) return make_belief(std::move(out.witness));
    return std::nullopt;
}

std::optional<Belief> lp_dominate_region(const RegionConstraintSet& region, const AlphaVector& w,
                                         const VectorSet& d, LpContext& ctx) {
    std::vector<const AlphaVector*> rivals;
    rivals.reserve(static_cast<size_t>(d.size()));
    for (const AlphaVector& v : d) rivals.push_back(&v);
    return lp_dominate_region(region, w, rivals, ctx);
}

IntersectOutcome lp_intersect_slack(std::span<const RegionConstraintSet* const> regions,
                                    LpContext& ctx) {
    if (regions.empty()) throw std::invalid_argument("lp_intersect: no regions given");
    int dim = 0;
    int m = 0;
    for (const RegionConstraintSet* r : regions) {
        if (r->dim > 0) {
            if (dim > 0 && r->dim != dim) {
                throw std::invalid_argument("lp_intersect: dimension mismatch");
            }
            dim = r->dim;
        }
        m += r->size();
    }
    if (m == 0) {
        // Every region is the whole simplex.
        record(ctx, 0);
        IntersectOutcome out;
        out.intersects = true;
        out.slack = std::numeric_limits<double>::infinity();
        if (dim > 0) out.witness = Belief::uniform(dim);
        return out;
    }
    check_deadline(ctx);
    record(ctx, m);
    StopWatch watch(ctx.stats);
    g_solver.setup(dim, m);
    for (const RegionConstraintSet* r : regions) {
        for (const Vector& c : r->constraints) g_solver.add_constraint(c, true);
    }
    DualSimplex::Result sol = g_solver.run(ctx);
    IntersectOutcome out;
    out.slack = sol.d;
    out.intersects = sol.status == LpStatus::kOptimal && sol.d > ctx.tol;
    if (sol.status == LpStatus::kOptimal) out.witness = make_belief(std::move(sol.witness));
    return out;
}

IntersectOutcome lp_intersect_slack(std::span<const RegionConstraintSet> regions, LpContext& ctx) {
    std::vector<const RegionConstraintSet*> ptrs;
    ptrs.reserve(regions.size());
    for (const RegionConstraintSet& r : regions) ptrs.push_back(&r);
    return lp_intersect_slack(std::span<const RegionConstraintSet* const>(ptrs), ctx);
}

bool lp_intersect(std::span<const RegionConstraintSet* const> regions, LpContext& ctx) {
    return lp_intersect_slack(regions, ctx).intersects;
}

bool lp_intersect(std::span<const RegionConstraintSet> regions, LpContext& ctx) {
    return lp_intersect_slack(regions, ctx).intersects;
}

}  // namespace incprune
