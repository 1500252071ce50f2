#include "incprune/algorithms.hpp"

#include "internal.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace incprune {

namespace {

void validate_sets(std::span<const VectorSet> sets) {
    if (sets.empty()) throw std::invalid_argument("prune: no vector sets given");
    const int dim = sets.front().dim();
    for (const VectorSet& s : sets) {
        if (s.empty()) throw std::invalid_argument("prune: empty vector set");
        if (s.dim() != dim) throw std::invalid_argument("prune: dimension mismatch");
    }
}

/*
 * One incremental step: prune u_set (+) w_set. Runs the standard loop over
 * the products, except that each dominance LP may swap the kept set D for
 *
 *     D'  = ({u} (+) W  minus the candidate) union {u' + w in D}
 *     D'' = (U (+) {w}  minus the candidate) union {u + w' in D},
 *
 * whichever of the three is smallest. Products are deduplicated, so the
 * translate groups are tracked per (i, j) source pair rather than per kept
 * tag; a vector that arises from two sums belongs to both of its groups.
 * Pointwise screening stays against D.
 */
VectorSet gip_pairwise(const VectorSet& u_set, const VectorSet& w_set, LpContext& ctx) {
    if (u_set.empty() || w_set.empty()) throw std::invalid_argument("gip: empty operand");
    if (u_set.dim() != w_set.dim()) throw std::invalid_argument("gip: dimension mismatch");
    const int nu = u_set.size();
    const int nw = w_set.size();

    VectorSet products(u_set.dim());
    // group_left[i] holds the product indices of {u_i} (+) W (always |W|
    // distinct values); lefts_of/rights_of invert the membership.
    std::vector<std::vector<int>> group_left(static_cast<size_t>(nu));
    std::vector<std::vector<int>> group_right(static_cast<size_t>(nw));
    std::vector<std::vector<int>> lefts_of, rights_of;
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nw; ++j) {
            AlphaVector sum(u_set[i].coeffs + w_set[j].coeffs);
            sum.action = (u_set[i].action == w_set[j].action) ? u_set[i].action : -1;
            sum.src_left = i;
            sum.src_right = j;
            const auto [idx, fresh] = products.insert_indexed(std::move(sum));
            group_left[static_cast<size_t>(i)].push_back(idx);
            group_right[static_cast<size_t>(j)].push_back(idx);
            if (fresh) {
                lefts_of.emplace_back();
                rights_of.emplace_back();
            }
            lefts_of[static_cast<size_t>(idx)].push_back(i);
            rights_of[static_cast<size_t>(idx)].push_back(j);
        }
    }

    const int np = products.size();
    const std::vector<int> order = detail::lex_order(products);
    std::vector<char> alive(order.size(), 1);
    int n_alive = np;
    size_t front = 0;

    VectorSet kept(products.dim());
    std::vector<const AlphaVector*> kept_ptrs;
    // Product indices of kept vectors, sliced by translate-group membership.
    std::vector<std::vector<int>> kept_left(static_cast<size_t>(nu));
    std::vector<std::vector<int>> kept_right(static_cast<size_t>(nw));
    std::vector<const AlphaVector*> rivals;
    std::vector<int> stamp(static_cast<size_t>(np), -1);
    int epoch = 0;

    while (n_alive > 0) {
        while (!alive[front]) ++front;
        const int p = order[front];
        const AlphaVector& cand = products[p];
        if (pointwise_dominate(cand, kept)) {
            alive[front] = 0;
            --n_alive;
            continue;
        }
        const auto iu = static_cast<size_t>(cand.src_left);
        const auto iw = static_cast<size_t>(cand.src_right);
        const size_t size_d = kept_ptrs.size();
        const size_t size_d1 = static_cast<size_t>(nw - 1) + kept_right[iw].size();
        const size_t size_d2 = static_cast<size_t>(nu - 1) + kept_left[iu].size();

        std::optional<Belief> witness;
        if (size_d <= size_d1 && size_d <= size_d2) {
            witness = lp_dominate(cand, kept_ptrs, ctx);
        } else {
            rivals.clear();
            ++epoch;
            const auto& translate = size_d1 <= size_d2 ? group_left[iu] : group_right[iw];
            const auto& matched = size_d1 <= size_d2 ? kept_right[iw] : kept_left[iu];
            for (int q : translate) {
                if (q == p || stamp[static_cast<size_t>(q)] == epoch) continue;
                stamp[static_cast<size_t>(q)] = epoch;
                rivals.push_back(&products[q]);
            }
            for (int q : matched) {
                if (q == p || stamp[static_cast<size_t>(q)] == epoch) continue;
                stamp[static_cast<size_t>(q)] = epoch;
                rivals.push_back(&products[q]);
            }
            witness = lp_dominate(cand, rivals, ctx);
        }
        if (!witness) {
            alive[front] = 0;
            --n_alive;
            continue;
        }
        const int pick = detail::best_alive(*witness, products, order, alive);
        const int win_idx = order[static_cast<size_t>(pick)];
        const AlphaVector& winner = products[win_idx];
        kept.insert(winner);
        kept_ptrs.push_back(&winner);
        for (int i : lefts_of[static_cast<size_t>(win_idx)]) {
            kept_left[static_cast<size_t>(i)].push_back(win_idx);
        }
        for (int j : rights_of[static_cast<size_t>(win_idx)]) {
            kept_right[static_cast<size_t>(j)].push_back(win_idx);
        }
        alive[static_cast<size_t>(pick)] = 0;
        --n_alive;
    }
    kept.sort_lex();
    return kept;
}

AlphaVector sum_tuple(std::span<const VectorSet* const> ordered, std::span<const int> tuple) {
    Vector sum = (*ordered[0])[tuple[0]].coeffs;
    int action = (*ordered[0])[tuple[0]].action;
    for (size_t i = 1; i < ordered.size(); ++i) {
        const AlphaVector& part = (*ordered[i])[tuple[i]];
        sum += part.coeffs;
        if (part.action != action) action = -1;
    }
    AlphaVector out(std::move(sum));
    out.action = action;
    return out;
}

}  // namespace

std::vector<int> set_order(std::span<const VectorSet> sets, SetOrdering ordering) {
    std::vector<int> idx(sets.size());
    std::iota(idx.begin(), idx.end(), 0);
    switch (ordering) {
        case SetOrdering::kAsGiven:
            break;
        case SetOrdering::kAscendingSize:
            std::stable_sort(idx.begin(), idx.end(),
                             [&](int a, int b) { return sets[a].size() < sets[b].size(); });
            break;
        case SetOrdering::kDescendingSize:
            std::stable_sort(idx.begin(), idx.end(),
                             [&](int a, int b) { return sets[a].size() > sets[b].size(); });
            break;
    }
    return idx;
}

VectorSet naive_prune(std::span<const VectorSet> sets, const PrunerConfig& config, LpContext& ctx) {
    validate_sets(sets);
    ctx.tol = config.tol;
    const std::vector<int> order = set_order(sets, config.set_ordering);
    VectorSet acc = sets[order[0]];
    for (size_t i = 1; i < order.size(); ++i) {
        acc = cross_sum(acc, sets[order[i]]);
    }
    return pr(acc, ctx);
}

VectorSet gip_prune(std::span<const VectorSet> sets, const PrunerConfig& config, LpContext& ctx) {
    validate_sets(sets);
    ctx.tol = config.tol;
    const std::vector<int> order = set_order(sets, config.set_ordering);
    const size_t k = order.size();
    if (k == 1) return pr(sets[order[0]], ctx);
    VectorSet acc = sets[order[k - 1]];
    for (size_t i = k - 1; i-- > 0;) {
        acc = gip_pairwise(sets[order[i]], acc, ctx);
    }
    return acc;
}

VectorSet ibip_prune(std::span<const VectorSet> sets, const PrunerConfig& config, LpContext& ctx) {
    validate_sets(sets);
    ctx.tol = config.tol;
    const std::vector<int> idx = set_order(sets, config.set_ordering);
    const int k = static_cast<int>(idx.size());
    if (k == 1) return pr(sets[idx[0]], ctx);

    std::vector<const VectorSet*> ordered;
    ordered.reserve(static_cast<size_t>(k));
    for (int i : idx) ordered.push_back(&sets[i]);

    std::vector<std::vector<RegionConstraintSet>> regions(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < ordered[static_cast<size_t>(i)]->size(); ++j) {
            regions[static_cast<size_t>(i)].push_back(
                region_of(*ordered[static_cast<size_t>(i)], j, i));
        }
    }

    // Bottom of the recursion: exhaustive pairwise tests over the last two
    // sets; every level above pairs each region of its set with the tuples
    // already found below.
    std::vector<std::vector<int>> tuples;
    {
        const auto a = static_cast<size_t>(k - 2);
        const auto b = static_cast<size_t>(k - 1);
        std::vector<const RegionConstraintSet*> pair(2);
        for (int va = 0; va < ordered[a]->size(); ++va) {
            for (int vb = 0; vb < ordered[b]->size(); ++vb) {
                pair[0] = &regions[a][static_cast<size_t>(va)];
                pair[1] = &regions[b][static_cast<size_t>(vb)];
                if (lp_intersect(std::span<const RegionConstraintSet* const>(pair), ctx)) {
                    tuples.push_back({va, vb});
                }
            }
        }
    }
    for (int level = k - 3; level >= 0; --level) {
        std::vector<std::vector<int>> next;
        std::vector<const RegionConstraintSet*> args(static_cast<size_t>(k - level));
        for (int v = 0; v < ordered[static_cast<size_t>(level)]->size(); ++v) {
            args[0] = &regions[static_cast<size_t>(level)][static_cast<size_t>(v)];
            for (const std::vector<int>& tup : tuples) {
                for (size_t j = 0; j < tup.size(); ++j) {
                    args[j + 1] =
                        &regions[static_cast<size_t>(level) + 1 + j][static_cast<size_t>(tup[j])];
                }
                if (lp_intersect(std::span<const RegionConstraintSet* const>(args), ctx)) {
                    std::vector<int> extended;
                    extended.reserve(tup.size() + 1);
                    extended.push_back(v);
                    extended.insert(extended.end(), tup.begin(), tup.end());
                    next.push_back(std::move(extended));
                }
            }
        }
        tuples = std::move(next);
    }

    VectorSet out(ordered[0]->dim());
    for (const std::vector<int>& tup : tuples) out.insert(sum_tuple(ordered, tup));
    out.sort_lex();
    return out;
}

namespace {

// Table-4 style recursion. `members[i]` narrows ordered[i]; the whole
// simplex is an empty constraint set. Emits tuples of original member
// indices, last set's choice in the last slot.
void rbip_recurse(std::span<const VectorSet* const> ordered,
                  std::vector<std::vector<int>>& members, int t,
                  const RegionConstraintSet& btilde, std::vector<int>& tuple,
                  std::vector<std::vector<int>>& out, LpContext& ctx) {
    if (t == 1) {
        const std::vector<int> surv =
            pr_region_subset(btilde, *ordered[0], members[0], ctx);
        for (int v : surv) {
            tuple[0] = v;
            out.push_back(tuple);
        }
        return;
    }
    const VectorSet& vt = *ordered[static_cast<size_t>(t - 1)];
    const std::vector<int> current = members[static_cast<size_t>(t - 1)];
    for (int v : current) {
        RegionConstraintSet bv = btilde;
        for (int u : current) {
            if (u != v) bv.add(vt[v].coeffs - vt[u].coeffs, t - 1, v);
        }
        // One probe skips the region prunes when the accumulated region
        // already has empty interior.
        const RegionConstraintSet* probe = &bv;
        if (!lp_intersect(std::span<const RegionConstraintSet* const>(&probe, 1), ctx)) continue;

        std::vector<std::vector<int>> narrowed(static_cast<size_t>(t - 1));
        bool viable = true;
        for (int i = 0; i < t - 1 && viable; ++i) {
            narrowed[static_cast<size_t>(i)] =
                pr_region_subset(bv, *ordered[static_cast<size_t>(i)],
                                 members[static_cast<size_t>(i)], ctx);
            viable = !narrowed[static_cast<size_t>(i)].empty();
        }
        if (!viable) continue;
        tuple[static_cast<size_t>(t - 1)] = v;
        rbip_recurse(ordered, narrowed, t - 1, bv, tuple, out, ctx);
    }
}

}  // namespace

VectorSet rbip_prune(std::span<const VectorSet> sets, const PrunerConfig& config, LpContext& ctx) {
    validate_sets(sets);
    ctx.tol = config.tol;
    const std::vector<int> idx = set_order(sets, config.set_ordering);
    const int k = static_cast<int>(idx.size());
    if (k == 1) return pr(sets[idx[0]], ctx);

    std::vector<const VectorSet*> ordered;
    ordered.reserve(static_cast<size_t>(k));
    for (int i : idx) ordered.push_back(&sets[i]);

    std::vector<std::vector<int>> members(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        members[static_cast<size_t>(i)].resize(
            static_cast<size_t>(ordered[static_cast<size_t>(i)]->size()));
        std::iota(members[static_cast<size_t>(i)].begin(), members[static_cast<size_t>(i)].end(),
                  0);
    }

    std::vector<std::vector<int>> tuples;
    std::vector<int> tuple(static_cast<size_t>(k), -1);
    RegionConstraintSet whole(ordered[0]->dim());
    rbip_recurse(ordered, members, k, whole, tuple, tuples, ctx);

    VectorSet out(ordered[0]->dim());
    for (const std::vector<int>& tup : tuples) out.insert(sum_tuple(ordered, tup));
    out.sort_lex();
    return out;
}

VectorSet cross_sum_prune(std::span<const VectorSet> sets, const PrunerConfig& config,
                          LpContext& ctx) {
    validate_sets(sets);
    const std::vector<int> idx = set_order(sets, config.set_ordering);

    Vector shift;
    int shift_action = -1;
    bool have_shift = false;
    std::vector<VectorSet> core_sets;
    for (int i : idx) {
        const VectorSet& s = sets[i];
        if (s.size() == 1) {
            if (!have_shift) {
                shift = s[0].coeffs;
                shift_action = s[0].action;
                have_shift = true;
            } else {
                shift += s[0].coeffs;
                if (s[0].action != shift_action) shift_action = -1;
            }
        } else {
            core_sets.push_back(s);
        }
    }

    VectorSet core(sets.front().dim());
    if (core_sets.empty()) {
        AlphaVector only(shift);
        only.action = shift_action;
        core.insert(std::move(only));
        return core;
    }
    if (core_sets.size() == 1) {
        core = core_sets[0];  // already minimal by contract; no LPs needed
        core.sort_lex();
    } else {
        PrunerConfig inner = config;
        inner.set_ordering = SetOrdering::kAsGiven;  // already ordered above
        switch (config.algorithm) {
            case Algorithm::kNaive:
                core = naive_prune(core_sets, inner, ctx);
                break;
            case Algorithm::kGip:
                core = gip_prune(core_sets, inner, ctx);
                break;
            case Algorithm::kIbip:
                core = ibip_prune(core_sets, inner, ctx);
                break;
            case Algorithm::kRbip:
                core = rbip_prune(core_sets, inner, ctx);
                break;
        }
    }
    if (!have_shift) return core;

    VectorSet shifted(core.dim());
    for (const AlphaVector& v : core) {
        AlphaVector moved(v.coeffs + shift);
        moved.action = (v.action == shift_action) ? v.action : -1;
        shifted.insert(std::move(moved));
    }
    shifted.sort_lex();
    return shifted;
}

}  // namespace incprune
