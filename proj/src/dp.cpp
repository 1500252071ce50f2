#include "incprune/dp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace incprune {

namespace {

void check_indices(const PomdpModel& model, int action, int obs) {
    if (action < 0 || action >= model.n_actions) throw std::out_of_range("bad action index");
    if (obs < 0 || obs >= model.n_observations) throw std::out_of_range("bad observation index");
}

}  // namespace

double obs_prob(const PomdpModel& model, int action, int obs, const Belief& b) {
    check_indices(model, action, obs);
    if (b.dim() != model.n_states) throw std::invalid_argument("obs_prob: belief dimension");
    const Vector successor = model.transition[action].transpose() * b.probs();
    return successor.dot(model.observation[action].col(obs));
}

Belief belief_update(const PomdpModel& model, int action, int obs, const Belief& b) {
    check_indices(model, action, obs);
    const Vector successor = model.transition[action].transpose() * b.probs();
    Vector next = model.observation[action].col(obs).cwiseProduct(successor);
    const double norm = next.sum();
    if (norm <= 0.0) {
        throw std::domain_error("belief_update: observation has zero probability here");
    }
    next /= norm;
    return Belief(std::move(next));
}

AlphaVector back_project(const PomdpModel& model, const AlphaVector& v, int action, int obs) {
    check_indices(model, action, obs);
    if (v.dim() != model.n_states) throw std::invalid_argument("back_project: dimension");
    Vector weighted = model.observation[action].col(obs).cwiseProduct(v.coeffs);
    Vector out = model.reward.row(action).transpose() / model.n_observations +
                 model.discount * (model.transition[action] * weighted);
    AlphaVector projected(std::move(out));
    projected.action = action;
    return projected;
}

VectorSet compute_vaz(const PomdpModel& model, const VectorSet& v, int action, int obs,
                      LpContext& ctx) {
    if (v.empty()) throw std::invalid_argument("compute_vaz: empty value function");
    VectorSet projected(model.n_states);
    for (const AlphaVector& vec : v) {
        projected.insert(back_project(model, vec, action, obs));
    }
    return pr(projected, ctx);
}

VectorSet compute_va(const PomdpModel& model, const VectorSet& v, int action,
                     const PrunerConfig& config, DpStats& stats) {
    std::vector<VectorSet> vaz;
    vaz.reserve(static_cast<size_t>(model.n_observations));
    LpContext standard_ctx;
    standard_ctx.tol = config.tol;
    for (int z = 0; z < model.n_observations; ++z) {
        vaz.push_back(compute_vaz(model, v, action, z, standard_ctx));
    }
    stats.standard.merge(standard_ctx.stats);

    LpContext cross_ctx;
    cross_ctx.tol = config.tol;
    VectorSet va = cross_sum_prune(vaz, config, cross_ctx);
    stats.cross_sum.merge(cross_ctx.stats);
    return va;
}

ValueFunction dp_update(const PomdpModel& model, const ValueFunction& v,
                        const PrunerConfig& config, DpStats& stats) {
    if (v.vectors.empty()) throw std::invalid_argument("dp_update: empty value function");
    VectorSet pooled(model.n_states);
    for (int a = 0; a < model.n_actions; ++a) {
        const VectorSet va = compute_va(model, v.vectors, a, config, stats);
        for (const AlphaVector& vec : va) pooled.insert(vec);
    }
    LpContext standard_ctx;
    standard_ctx.tol = config.tol;
    ValueFunction next;
    next.vectors = pr(pooled, standard_ctx);
    next.iteration = v.iteration + 1;
    stats.standard.merge(standard_ctx.stats);
    return next;
}

double value_at(const VectorSet& set, const Belief& b) {
    if (set.empty()) throw std::invalid_argument("value_at: empty set");
    double max = dot(b, set[0]);
    for (int i = 1; i < set.size(); ++i) max = std::max(max, dot(b, set[i]));
    return max;
}

namespace {

// Largest amount by which `over` rises above the envelope of `base`
// anywhere on the simplex; may be negative when it never does.
double max_improvement(const VectorSet& over, const VectorSet& base, LpContext& ctx) {
    double result = -std::numeric_limits<double>::infinity();
    for (const AlphaVector& v : over) {
        LpInstance lp;
        lp.dimension = v.dim();
        for (const AlphaVector& rival : base) {
            lp.constraints.push_back({v.coeffs - rival.coeffs, ConstraintKind::kSlackCoupled});
        }
        const LpOutcome out = solve(lp, ctx);
        if (out.status != LpStatus::kOptimal) throw SolverError("envelope LP infeasible");
        result = std::max(result, out.d);
    }
    return result;
}

}  // namespace

double envelope_distance(const VectorSet& a, const VectorSet& b, LpContext& ctx) {
    const double up = max_improvement(a, b, ctx);
    const double down = max_improvement(b, a, ctx);
    return std::max({up, down, 0.0});
}

ValueIterationResult value_iterate(const PomdpModel& model, const PrunerConfig& config,
                                   int max_iter, double epsilon, DpStats& stats) {
    if (max_iter < 1) throw std::invalid_argument("value_iterate: max_iter must be >= 1");
    if (model.discount < 0.0 || model.discount >= 1.0) {
        throw std::invalid_argument("value_iterate: discount must be in [0,1)");
    }
    const double floor_reward = model.reward.minCoeff();
    const double blind = floor_reward / (1.0 - model.discount);

    ValueIterationResult result;
    result.vf.vectors = VectorSet(model.n_states);
    result.vf.vectors.insert(AlphaVector(Vector::Constant(model.n_states, blind)));
    result.vf.iteration = 0;

    for (int iter = 1; iter <= max_iter; ++iter) {
        const auto t0 = std::chrono::steady_clock::now();
        const DpStats before = stats;
        ValueFunction next = dp_update(model, result.vf, config, stats);

        LpContext residual_ctx;
        residual_ctx.tol = config.tol;
        const double residual = envelope_distance(next.vectors, result.vf.vectors, residual_ctx);
        stats.standard.merge(residual_ctx.stats);

        IterationRow row;
        row.iteration = iter;
        row.size = next.vectors.size();
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.residual = residual;
        row.cross_sum = stats.cross_sum;
        row.cross_sum.lp_count -= before.cross_sum.lp_count;
        row.cross_sum.constraint_total -= before.cross_sum.constraint_total;
        row.cross_sum.wall_time -= before.cross_sum.wall_time;
        row.standard = stats.standard;
        row.standard.lp_count -= before.standard.lp_count;
        row.standard.constraint_total -= before.standard.constraint_total;
        row.standard.wall_time -= before.standard.wall_time;
        result.rows.push_back(row);

        result.vf = std::move(next);
        result.residual = residual;
        if (epsilon > 0.0 && residual <= epsilon) {
            result.converged = true;
            break;
        }
    }
    return result;
}

std::string to_alpha_text(const VectorSet& set) {
    std::vector<const AlphaVector*> order;
    order.reserve(static_cast<size_t>(set.size()));
    for (const AlphaVector& v : set) order.push_back(&v);
    std::sort(order.begin(), order.end(),
              [](const AlphaVector* a, const AlphaVector* b) { return lex_less(*a, *b); });
    std::string out;
    char buf[64];
    for (const AlphaVector* v : order) {
        out += std::to_string(v->action);
        out += '\n';
        for (int s = 0; s < v->dim(); ++s) {
            std::snprintf(buf, sizeof(buf), "%.17g", v->coeffs[s]);
            if (s > 0) out += ' ';
            out += buf;
        }
        out += "\n\n";
    }
    return out;
}

void write_alpha_file(const VectorSet& set, std::ostream& out) { out << to_alpha_text(set); }

}  // namespace incprune
