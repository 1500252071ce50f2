#pragma once

#include "incprune/algorithms.hpp"
#include "incprune/model.hpp"

#include <iosfwd>
#include <string>

namespace incprune {

/// A piecewise linear convex value function together with the number of
/// backups that produced it.
struct ValueFunction {
    VectorSet vectors;
    int iteration = 0;
};

/// LP counters split by what the paper's tables report: cross-sum pruning
/// on one side, everything else (per-observation and union prunes,
/// residual certification) on the other.
struct DpStats {
    LpStats cross_sum;
    LpStats standard;

    void merge(const DpStats& other) {
        cross_sum.merge(other.cross_sum);
        standard.merge(other.standard);
    }
};

/// P^a(z|b): probability of observing z after acting from belief b.
double obs_prob(const PomdpModel& model, int action, int obs, const Belief& b);

/// Bayes update of b after action and observation. Throws when the
/// observation has zero probability at b.
Belief belief_update(const PomdpModel& model, int action, int obs, const Belief& b);

/// The transformed vector folding reward share, discount, transition and
/// observation weights into v.
AlphaVector back_project(const PomdpModel& model, const AlphaVector& v, int action, int obs);

/// Minimal set for one (action, observation) pair: prune of the
/// back-projections of the current value function.
VectorSet compute_vaz(const PomdpModel& model, const VectorSet& v, int action, int obs,
                      LpContext& ctx);

/// Minimal set for one action: the configured cross-sum pruner applied to
/// the per-observation sets.
VectorSet compute_va(const PomdpModel& model, const VectorSet& v, int action,
                     const PrunerConfig& config, DpStats& stats);

/// One exact backup of the value function: union over actions of the
/// per-action sets, pruned. Every output vector is tagged with its action.
ValueFunction dp_update(const PomdpModel& model, const ValueFunction& v,
                        const PrunerConfig& config, DpStats& stats);

/// Value of a vector set at a belief (max over members of the dot product).
double value_at(const VectorSet& set, const Belief& b);

/// Sup-norm distance between two envelopes, certified exactly by one
/// dominance LP per vector (and cross-checked on the probe grid by tests).
double envelope_distance(const VectorSet& a, const VectorSet& b, LpContext& ctx);

struct IterationRow {
    int iteration = 0;
    int size = 0;
    double seconds = 0.0;
    double residual = 0.0;
    LpStats cross_sum;
    LpStats standard;
};

struct ValueIterationResult {
    ValueFunction vf;
    bool converged = false;
    double residual = 0.0;
    std::vector<IterationRow> rows;
};

/// Repeated backups from the blind lower-bound vector min R / (1 - beta)
/// until the envelope moves by no more than epsilon or max_iter is hit.
/// A non-positive epsilon disables the residual stop (fixed iteration
/// count). Deadlines on `stats` contexts are honored via the pruners.
ValueIterationResult value_iterate(const PomdpModel& model, const PrunerConfig& config,
                                   int max_iter, double epsilon, DpStats& stats);

/// Alpha-vector file: per vector an action line, a coefficient line
/// (17 significant digits), and a blank separator, in canonical order.
void write_alpha_file(const VectorSet& set, std::ostream& out);
std::string to_alpha_text(const VectorSet& set);

}  // namespace incprune
